//! The exact rational scalar and small helpers around it.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Arbitrary precision rational; always stored in lowest terms with a
/// positive denominator.
pub type Scalar = num_rational::BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("cannot parse {0:?} as an exact rational")]
pub struct ScalarParseError(pub String);

/// `n / d` as a scalar.
pub fn rat(n: i64, d: i64) -> Scalar {
    Scalar::new(BigInt::from(n), BigInt::from(d))
}

/// The integer `n` as a scalar.
pub fn int(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

/// Parse `"p/q"`, `"p"` or `"-p/q"`.
pub fn parse_scalar(s: &str) -> Result<Scalar, ScalarParseError> {
    let t = s.trim();
    let err = || ScalarParseError(s.to_string());
    let (num, den) = match t.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (t, "1"),
    };
    let n: BigInt = num.parse().map_err(|_| err())?;
    let d: BigInt = den.parse().map_err(|_| err())?;
    if d.is_zero() {
        return Err(err());
    }
    Ok(Scalar::new(n, d))
}

/// Canonical text form: `"p/q"`, or `"p"` when the denominator is 1.
pub fn format_scalar(x: &Scalar) -> String {
    x.to_string()
}

/// `n!` as a scalar.
pub fn factorial(n: u32) -> Scalar {
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= i;
    }
    Scalar::from_integer(acc)
}

/// Generalized binomial coefficient `C(e, j)` for rational `e`.
pub fn binomial(e: &Scalar, j: u32) -> Scalar {
    let mut acc = Scalar::one();
    for i in 0..j {
        acc = acc * (e - int(i as i64)) / int(i as i64 + 1);
    }
    acc
}

/// Least common multiple of the denominators, as a `u64`.
pub fn denominator_lcm<'a>(xs: impl IntoIterator<Item = &'a Scalar>) -> u64 {
    let mut acc = BigInt::one();
    for x in xs {
        acc = acc.lcm(x.denom());
    }
    u64::try_from(acc).expect("denominator bound exceeds u64")
}

/// Whether `x` is an integer.
pub fn is_integer(x: &Scalar) -> bool {
    x.is_integer()
}

/// `(-1)^n` for an integer scalar.
pub fn sign_power(n: &Scalar) -> Scalar {
    debug_assert!(n.is_integer());
    if n.to_integer().is_even() {
        Scalar::one()
    } else {
        -Scalar::one()
    }
}

/// Absolute value helper kept here so callers need not import `Signed`.
pub fn abs(x: &Scalar) -> Scalar {
    x.abs()
}

/// Convert an integer scalar to `i64`.
pub fn to_i64(x: &Scalar) -> Option<i64> {
    if !x.is_integer() {
        return None;
    }
    i64::try_from(x.to_integer()).ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_roundtrip() {
        for s in ["1/2", "-3/4", "5", "0", "-7"] {
            assert_eq!(format_scalar(&parse_scalar(s).unwrap()), s);
        }
        assert_eq!(parse_scalar("2/4").unwrap(), rat(1, 2));
        assert!(parse_scalar("1/0").is_err());
        assert!(parse_scalar("x").is_err());
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(&int(5), 2), int(10));
        assert_eq!(binomial(&int(-1), 3), int(-1));
        assert_eq!(binomial(&rat(1, 2), 2), rat(-1, 8));
        assert_eq!(factorial(5), int(120));
    }

    #[test]
    fn lcm_of_denominators() {
        assert_eq!(denominator_lcm(&[rat(1, 2), rat(2, 3), int(4)]), 6);
        assert_eq!(denominator_lcm(&[]), 1);
    }
}
