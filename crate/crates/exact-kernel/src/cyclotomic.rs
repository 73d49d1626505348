//! Elements of Q(ζ_D)[T], where `T` is a formal symbol standing for 2πi.
//!
//! Each T-coefficient is a polynomial in `z = ζ_D` reduced modulo the D-th
//! cyclotomic polynomial. Values with different `D` are lifted to the lcm
//! before combining, using `ζ_d = ζ_D^{D/d}`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::coeff::Coeff;
use crate::poly::QPoly;
use crate::scalar::Scalar;

/// The `n`-th cyclotomic polynomial, memoized.
pub fn cyclotomic_poly(n: u64) -> Arc<QPoly> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<QPoly>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&n) {
        return p.clone();
    }
    assert!(n >= 1, "cyclotomic order must be positive");
    let mut num = vec![Scalar::zero(); n as usize + 1];
    num[0] = -Scalar::one();
    num[n as usize] = Scalar::one();
    let mut p = QPoly::new(num);
    for d in 1..n {
        if n % d == 0 {
            p = p.div_rem(&cyclotomic_poly(d)).0;
        }
    }
    let p = Arc::new(p);
    cache.lock().unwrap().insert(n, p.clone());
    p
}

#[derive(Clone, Debug)]
pub struct CycScalar {
    d: u64,
    /// `t[j]` is the coefficient of `T^j`, reduced mod `Φ_d`.
    t: Vec<QPoly>,
}

impl CycScalar {
    pub fn order(&self) -> u64 {
        self.d
    }

    fn normalize(mut self) -> Self {
        while self.t.last().is_some_and(|p| p.is_zero()) {
            self.t.pop();
        }
        self
    }

    /// `ζ_d^k` for any integer `k`.
    pub fn zeta(d: u64, k: i64) -> Self {
        assert!(d >= 1);
        let e = k.rem_euclid(d as i64) as usize;
        let mut cs = vec![Scalar::zero(); e + 1];
        cs[e] = Scalar::one();
        let p = QPoly::new(cs).rem(&cyclotomic_poly(d));
        CycScalar { d, t: vec![p] }.normalize()
    }

    /// `e^{2πi q}` for rational `q`, as a power of `ζ_D` where `D` is the
    /// denominator of `q`.
    pub fn exp_2pi_i(q: &Scalar) -> Self {
        let d = u64::try_from(q.denom().clone()).expect("denominator too large");
        let k = i64::try_from(q.numer().clone()).expect("numerator too large");
        CycScalar::zeta(d, k)
    }

    /// The formal symbol `T`.
    pub fn t() -> Self {
        CycScalar {
            d: 1,
            t: vec![QPoly::zero(), QPoly::one()],
        }
    }

    /// `T^k`.
    pub fn t_pow(k: usize) -> Self {
        let mut t = vec![QPoly::zero(); k + 1];
        t[k] = QPoly::one();
        CycScalar { d: 1, t }
    }

    /// Re-express over `ζ_big`, where `self.d` divides `big`.
    pub fn lift(&self, big: u64) -> Self {
        assert!(big % self.d == 0, "cannot lift ζ_{} to ζ_{}", self.d, big);
        if big == self.d {
            return self.clone();
        }
        let step = (big / self.d) as usize;
        let phi = cyclotomic_poly(big);
        let t = self
            .t
            .iter()
            .map(|p| {
                let mut cs = vec![Scalar::zero(); p.coeffs().len().saturating_sub(1) * step + 1];
                for (i, c) in p.coeffs().iter().enumerate() {
                    cs[i * step] = c.clone();
                }
                QPoly::new(cs).rem(&phi)
            })
            .collect();
        CycScalar { d: big, t }.normalize()
    }

    fn common(&self, other: &Self) -> (Self, Self, u64) {
        let d = self.d.lcm(&other.d);
        (self.lift(d), other.lift(d), d)
    }

    /// The T-degree; `None` for zero.
    pub fn t_degree(&self) -> Option<usize> {
        self.t.len().checked_sub(1)
    }

    /// Coefficient of `T^j` as coefficients in powers of `ζ_d`.
    pub fn t_coeff(&self, j: usize) -> Vec<Scalar> {
        self.t.get(j).map(|p| p.coeffs().to_vec()).unwrap_or_default()
    }

    /// The rational value, if the element lies in Q.
    pub fn as_rational(&self) -> Option<Scalar> {
        match self.t.len() {
            0 => Some(Scalar::zero()),
            1 if self.t[0].degree() == Some(0) => Some(self.t[0].coeffs()[0].clone()),
            _ => None,
        }
    }
}

impl PartialEq for CycScalar {
    fn eq(&self, other: &Self) -> bool {
        let (a, b, _) = self.common(other);
        a.t == b.t
    }
}

impl Coeff for CycScalar {
    fn zero_elt() -> Self {
        CycScalar { d: 1, t: vec![] }
    }
    fn one_elt() -> Self {
        CycScalar::from_scalar(&Scalar::one())
    }
    fn is_zero_elt(&self) -> bool {
        self.t.is_empty()
    }
    fn plus(&self, other: &Self) -> Self {
        let (a, b, d) = self.common(other);
        let n = a.t.len().max(b.t.len());
        let t = (0..n)
            .map(|j| {
                let x = a.t.get(j).cloned().unwrap_or_else(QPoly::zero);
                let y = b.t.get(j).cloned().unwrap_or_else(QPoly::zero);
                x.add(&y)
            })
            .collect();
        CycScalar { d, t }.normalize()
    }
    fn minus(&self, other: &Self) -> Self {
        self.plus(&other.negated())
    }
    fn times(&self, other: &Self) -> Self {
        if self.is_zero_elt() || other.is_zero_elt() {
            return CycScalar::zero_elt();
        }
        let (a, b, d) = self.common(other);
        let phi = cyclotomic_poly(d);
        let mut t = vec![QPoly::zero(); a.t.len() + b.t.len() - 1];
        for (i, x) in a.t.iter().enumerate() {
            for (j, y) in b.t.iter().enumerate() {
                t[i + j] = t[i + j].add(&x.mul(y).rem(&phi));
            }
        }
        CycScalar { d, t }.normalize()
    }
    fn negated(&self) -> Self {
        CycScalar {
            d: self.d,
            t: self.t.iter().map(|p| p.scale(&-Scalar::one())).collect(),
        }
    }
    fn from_scalar(x: &Scalar) -> Self {
        CycScalar {
            d: 1,
            t: vec![QPoly::constant(x.clone())],
        }
        .normalize()
    }
    fn render(&self) -> String {
        if self.t.is_empty() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (j, p) in self.t.iter().enumerate() {
            for (i, c) in p.coeffs().iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let mut s = c.to_string();
                if i > 0 {
                    s.push_str(&format!("*z{}^{}", self.d, i));
                }
                if j > 0 {
                    s.push_str(&format!("*T^{}", j));
                }
                parts.push(s);
            }
        }
        parts.join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    #[test]
    fn cyclotomic_polys() {
        assert_eq!(cyclotomic_poly(1).coeffs(), &[int(-1), int(1)]);
        assert_eq!(cyclotomic_poly(3).coeffs(), &[int(1), int(1), int(1)]);
        assert_eq!(cyclotomic_poly(4).coeffs(), &[int(1), int(0), int(1)]);
        assert_eq!(cyclotomic_poly(6).coeffs(), &[int(1), int(-1), int(1)]);
        assert_eq!(cyclotomic_poly(12).degree(), Some(4));
    }

    #[test]
    fn roots_of_unity() {
        assert_eq!(CycScalar::exp_2pi_i(&rat(1, 2)), CycScalar::from_scalar(&int(-1)));
        let z3 = CycScalar::zeta(3, 1);
        let cube = z3.times(&z3).times(&z3);
        assert_eq!(cube, CycScalar::one_elt());
        // 1 + ζ + ζ² = 0
        let s = CycScalar::one_elt().plus(&z3).plus(&z3.times(&z3));
        assert!(s.is_zero_elt());
        // ζ_6^2 = ζ_3 across different orders.
        assert_eq!(CycScalar::zeta(6, 2), z3);
        assert_eq!(CycScalar::zeta(3, -1), z3.times(&z3));
    }

    #[test]
    fn formal_t() {
        let t = CycScalar::t();
        let x = t.plus(&CycScalar::one_elt());
        let sq = x.times(&x);
        let expect = CycScalar::t_pow(2)
            .plus(&t.times(&CycScalar::from_scalar(&int(2))))
            .plus(&CycScalar::one_elt());
        assert_eq!(sq, expect);
        assert_eq!(sq.t_degree(), Some(2));
        assert_eq!(CycScalar::from_scalar(&rat(3, 4)).as_rational(), Some(rat(3, 4)));
        assert_eq!(t.as_rational(), None);
    }
}
