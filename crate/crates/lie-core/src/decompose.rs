use exact_kernel::{LinalgError, Matrix, Scalar};
use num_traits::Zero;

use crate::{LieAlgebra, LieElt, LieError};

/// `a = s + n` with `ad_s` semisimple, `ad_n` nilpotent and `[s, n] = 0`.
pub fn jordan_chevalley(alg: &LieAlgebra, a: &LieElt) -> Result<(LieElt, LieElt), LieError> {
    let ad = alg.ad(a);
    let (big_s, _) = ad.jordan_chevalley()?;
    // ad is injective on a simple algebra, so the preimage is unique.
    let s = alg
        .ad_preimage(&big_s)
        .expect("semisimple part of ad_a is a derivation");
    let n = a.sub(&s);
    assert!(alg.bracket(&s, &n).is_zero(), "[s, n] = 0");
    assert!(alg.form(&s, &n).is_zero(), "(s, n) = 0");
    assert!(alg.ad(&n).nilpotency_index().is_some(), "ad_n nilpotent");
    Ok((s, n))
}

/// An `ad_s`-eigenbasis with eigenvalues. Cartan inputs return the
/// Chevalley basis itself in basis order.
pub fn ad_eigendata(alg: &LieAlgebra, s: &LieElt) -> Result<Vec<(LieElt, Scalar)>, LieError> {
    let out: Vec<(LieElt, Scalar)> = if alg.is_cartan(s) {
        (0..alg.dim())
            .map(|i| (alg.basis(i), alg.root_value(s, i)))
            .collect()
    } else {
        let ad = alg.ad(s);
        let (_, nil) = ad.jordan_chevalley()?;
        if !nil.is_zero() {
            return Err(LieError::NotSemisimple);
        }
        let d = alg.dim();
        let mut out = Vec::new();
        for (lam, _) in ad.rational_spectrum()? {
            let shifted = ad.sub(&Matrix::identity(d).scale(&lam));
            for v in shifted.kernel() {
                out.push((LieElt(v), lam.clone()));
            }
        }
        out
    };
    for (v, lam) in &out {
        if !lam.is_zero() {
            assert!(alg.form(s, v).is_zero(), "(s, a_i) vanishes off the zero eigenspace");
        }
    }
    Ok(out)
}

/// `log U` for unipotent `U`, with `exp(log U) = U` exactly.
pub fn unipotent_log(u: &Matrix<Scalar>) -> Result<Matrix<Scalar>, LieError> {
    u.log_unipotent().map_err(|e| match e {
        LinalgError::NotUnipotent => LieError::NotUnipotent,
        other => other.into(),
    })
}
