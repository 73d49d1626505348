use std::collections::BTreeMap;
use std::fmt::Write;

use exact_kernel::{Coeff, Linear, Scalar};

/// A normal-ordered PBW monomial `a_{i_1}(m_1) ... a_{i_k}(m_k) v_top`.
/// Factors are stored left to right and are weakly decreasing in
/// `(mode, generator)`, so the factor next to the top vector is the most
/// negative.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub modes: Vec<(i64, usize)>,
    pub top: usize,
}

impl Monomial {
    pub fn top(top: usize) -> Self {
        Monomial { modes: Vec::new(), top }
    }

    /// The vacuum `1` of a module with one-dimensional top.
    pub fn vacuum() -> Self {
        Monomial::top(0)
    }

    /// Build from factors in any order; they are sorted into normal order.
    /// All modes must be negative.
    pub fn from_factors(mut modes: Vec<(i64, usize)>, top: usize) -> Self {
        assert!(modes.iter().all(|(m, _)| *m < 0), "PBW modes are negative");
        modes.sort_by(|a, b| b.cmp(a));
        Monomial { modes, top }
    }

    /// Weight above the top space, `-Σ m_i`.
    pub fn depth(&self) -> i64 {
        -self.modes.iter().map(|(m, _)| m).sum::<i64>()
    }

    pub fn is_normal(&self) -> bool {
        self.modes.iter().all(|(m, _)| *m < 0) && self.modes.windows(2).all(|w| w[0] >= w[1])
    }

    /// The monomial with its leftmost factor removed.
    pub fn tail(&self) -> Monomial {
        Monomial {
            modes: self.modes[1..].to_vec(),
            top: self.top,
        }
    }

    pub fn render(&self, gens: &[String], tops: &[String]) -> String {
        let mut s = String::new();
        for (m, g) in &self.modes {
            write!(s, "{}({})", gens[*g], m).unwrap();
        }
        s.push_str(&tops[self.top]);
        s
    }
}

/// A finite linear combination of normal-ordered monomials.
#[derive(Clone, Debug, PartialEq)]
pub struct PBWVector<K> {
    terms: BTreeMap<Monomial, K>,
}

impl<K: Coeff> PBWVector<K> {
    pub fn zero() -> Self {
        PBWVector { terms: BTreeMap::new() }
    }

    pub fn from_monomial(m: Monomial) -> Self {
        Self::term(m, K::one_elt())
    }

    pub fn term(m: Monomial, c: K) -> Self {
        let mut v = Self::zero();
        v.add_term(m, c);
        v
    }

    pub fn vacuum() -> Self {
        Self::from_monomial(Monomial::vacuum())
    }

    pub fn add_term(&mut self, m: Monomial, c: K) {
        if c.is_zero_elt() {
            return;
        }
        debug_assert!(m.is_normal());
        match self.terms.get_mut(&m) {
            Some(old) => {
                *old = old.plus(&c);
                if old.is_zero_elt() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    /// `self += c · other`.
    pub fn axpy(&mut self, c: &K, other: &PBWVector<K>) {
        if c.is_zero_elt() {
            return;
        }
        for (m, d) in &other.terms {
            self.add_term(m.clone(), d.times(c));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Monomial, &K)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> K {
        self.terms.get(m).cloned().unwrap_or_else(K::zero_elt)
    }

    /// Largest depth among the monomials, `None` for zero.
    pub fn max_depth(&self) -> Option<i64> {
        self.terms.keys().map(Monomial::depth).max()
    }

    pub fn min_depth(&self) -> Option<i64> {
        self.terms.keys().map(Monomial::depth).min()
    }

    /// Whether every monomial has the same depth.
    pub fn is_homogeneous(&self) -> bool {
        self.max_depth() == self.min_depth()
    }

    pub fn map_coeffs<L: Coeff>(&self, f: impl Fn(&K) -> L) -> PBWVector<L> {
        let mut out = PBWVector::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }

    /// Split into the part of depth at most `max` and the remainder.
    pub fn split_depth(&self, max: i64) -> (PBWVector<K>, PBWVector<K>) {
        let mut lo = PBWVector::zero();
        let mut hi = PBWVector::zero();
        for (m, c) in &self.terms {
            if m.depth() <= max {
                lo.add_term(m.clone(), c.clone());
            } else {
                hi.add_term(m.clone(), c.clone());
            }
        }
        (lo, hi)
    }

    pub fn render_with(&self, gens: &[String], tops: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|(m, c)| format!("({})*{}", c.render(), m.render(gens, tops)))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl PBWVector<Scalar> {
    pub fn to_cyc(&self) -> PBWVector<exact_kernel::CycScalar> {
        self.map_coeffs(exact_kernel::CycScalar::from_scalar)
    }
}

impl<K: Coeff> Linear<K> for PBWVector<K> {
    fn null() -> Self {
        Self::zero()
    }
    fn is_null(&self) -> bool {
        self.is_zero()
    }
    fn add_assign(&mut self, other: &Self) {
        self.axpy(&K::one_elt(), other);
    }
    fn scaled(&self, k: &K) -> Self {
        let mut out = Self::zero();
        out.axpy(k, self);
        out
    }
    fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|(m, c)| {
                let f: String = m.modes.iter().map(|(k, g)| format!("b{g}({k})")).collect();
                format!("({})*{}v{}", c.render(), f, m.top)
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use exact_kernel::int;

    #[test]
    fn normal_order_and_depth() {
        let m = Monomial::from_factors(vec![(-2, 0), (-1, 2), (-1, 1)], 0);
        assert_eq!(m.modes, vec![(-1, 2), (-1, 1), (-2, 0)]);
        assert!(m.is_normal());
        assert_eq!(m.depth(), 4);
        assert_eq!(m.tail().depth(), 3);
    }

    #[test]
    fn cancellation() {
        let m = Monomial::from_factors(vec![(-1, 0)], 0);
        let mut v = PBWVector::<Scalar>::from_monomial(m.clone());
        v.add_term(m, int(-1));
        assert!(v.is_zero());
    }
}
