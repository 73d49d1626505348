use affine_fock::PBWVector;
use exact_kernel::{factorial, CombineMode, Linear, LogSeries, Scalar};
use num_integer::Integer;
use num_traits::One;

use crate::{DeltaError, DeltaOperator};

/// Coefficients of `x_2^j`, `j = 0..=max`, in `f(x + x_2)` expanded in
/// nonnegative powers of `x_2`: `f^{(j)}(x) / j!`.
pub fn taylor_shift<V: Linear<Scalar>>(f: &LogSeries<V>, max: u32) -> Vec<LogSeries<V>> {
    let mut out = Vec::with_capacity(max as usize + 1);
    let mut d = f.clone();
    for j in 0..=max {
        out.push(d.scale(&(Scalar::one() / factorial(j))));
        d = d.derivative::<Scalar>();
    }
    out
}

/// `Δ(x)` applied to a series of vectors, termwise.
pub fn apply_to_series(
    delta: &DeltaOperator,
    s: &LogSeries<PBWVector<Scalar>>,
) -> Result<LogSeries<PBWVector<Scalar>>, DeltaError> {
    let denom = delta.denom().lcm(&s.denom());
    let mut out = LogSeries::zero(denom);
    for (e, k, v) in s.iter() {
        let t = delta.apply(v)?.with_denom(denom)?.shift(e, k)?;
        out = out.combine::<Scalar>(&t, CombineMode::Add)?;
    }
    Ok(out)
}
