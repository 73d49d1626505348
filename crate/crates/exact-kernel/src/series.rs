//! Sparse formal series `Σ c_{e,k} x^e (log x)^k` with rational `e`,
//! natural `k`, and coefficients in a linear space.
//!
//! A series carries a denominator bound `D` (every exponent lies in
//! `Z/D`) and an optional exponent window: terms with `e` below the floor
//! or above the ceiling are dropped and the drop is recorded.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::coeff::{Coeff, Linear};
use crate::cyclotomic::CycScalar;
use crate::scalar::{binomial, int, Scalar};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("exponent {exponent} has denominator outside the bound D = {bound}")]
    DenominatorMismatch { exponent: String, bound: u64 },
    #[error("series have different denominator bounds {0} and {1}")]
    BoundMismatch(u64, u64),
    #[error("domain error: {0}")]
    DomainError(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CombineMode {
    Add,
    Sub,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LogSeries<V> {
    terms: BTreeMap<(Scalar, u32), V>,
    floor: Option<Scalar>,
    ceiling: Option<Scalar>,
    denom: u64,
    truncated: bool,
}

fn max_floor(a: &Option<Scalar>, b: &Option<Scalar>) -> Option<Scalar> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.max(y).clone()),
        (Some(x), None) | (None, Some(x)) => Some(x.clone()),
        (None, None) => None,
    }
}

fn min_ceiling(a: &Option<Scalar>, b: &Option<Scalar>) -> Option<Scalar> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y).clone()),
        (Some(x), None) | (None, Some(x)) => Some(x.clone()),
        (None, None) => None,
    }
}

impl<V> LogSeries<V> {
    /// The empty, untruncated series with denominator bound `denom`.
    pub fn zero(denom: u64) -> Self {
        assert!(denom >= 1);
        LogSeries {
            terms: BTreeMap::new(),
            floor: None,
            ceiling: None,
            denom,
            truncated: false,
        }
    }

    /// The empty series truncated below `floor`.
    pub fn with_floor(denom: u64, floor: Scalar) -> Self {
        let mut s = LogSeries::zero(denom);
        s.floor = Some(floor);
        s
    }

    /// The empty series keeping only exponents in `[floor, ceiling]`.
    pub fn with_window(denom: u64, floor: Option<Scalar>, ceiling: Option<Scalar>) -> Self {
        let mut s = LogSeries::zero(denom);
        s.floor = floor;
        s.ceiling = ceiling;
        s
    }

    pub fn ceiling(&self) -> Option<&Scalar> {
        self.ceiling.as_ref()
    }

    pub fn denom(&self) -> u64 {
        self.denom
    }

    pub fn floor(&self) -> Option<&Scalar> {
        self.floor.as_ref()
    }

    /// Whether some nonzero term was dropped by the window.
    pub fn was_truncated(&self) -> bool {
        self.truncated
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// Terms in `(e, k)` order.
    pub fn iter(&self) -> impl Iterator<Item = (&Scalar, u32, &V)> {
        self.terms.iter().map(|((e, k), v)| (e, *k, v))
    }

    pub fn get(&self, e: &Scalar, k: u32) -> Option<&V> {
        self.terms.get(&(e.clone(), k))
    }

    /// Smallest exponent present.
    pub fn min_exponent(&self) -> Option<&Scalar> {
        self.terms.keys().next().map(|(e, _)| e)
    }

    /// Largest log power present.
    pub fn max_log_power(&self) -> Option<u32> {
        self.terms.keys().map(|(_, k)| *k).max()
    }

    fn check_exponent(&self, e: &Scalar) -> Result<(), SeriesError> {
        let d = u64::try_from(e.denom().clone()).unwrap_or(u64::MAX);
        if self.denom % d != 0 {
            return Err(SeriesError::DenominatorMismatch {
                exponent: e.to_string(),
                bound: self.denom,
            });
        }
        Ok(())
    }
}

impl<V: Clone> LogSeries<V> {
    /// Same terms under a larger bound `big`, which must be a multiple.
    pub fn with_denom(&self, big: u64) -> Result<Self, SeriesError> {
        if big % self.denom != 0 {
            return Err(SeriesError::BoundMismatch(self.denom, big));
        }
        let mut s = self.clone();
        s.denom = big;
        Ok(s)
    }
}

impl<V> LogSeries<V> {
    /// Map coefficients into another space, keeping exponents.
    pub fn map<W, F: Fn(&V) -> W>(&self, f: F) -> LogSeries<W> {
        LogSeries {
            terms: self.terms.iter().map(|(k, v)| (k.clone(), f(v))).collect(),
            floor: self.floor.clone(),
            ceiling: self.ceiling.clone(),
            denom: self.denom,
            truncated: self.truncated,
        }
    }
}

impl<V> LogSeries<V> {
    /// Accumulate `v · x^e (log x)^k` into the series.
    pub fn add_term<K: Coeff>(&mut self, e: Scalar, k: u32, v: V) -> Result<(), SeriesError>
    where
        V: Linear<K>,
    {
        self.check_exponent(&e)?;
        if v.is_null() {
            return Ok(());
        }
        if let Some(f) = &self.floor {
            if &e < f {
                self.truncated = true;
                return Ok(());
            }
        }
        if let Some(c) = &self.ceiling {
            if &e > c {
                self.truncated = true;
                return Ok(());
            }
        }
        let key = (e, k);
        match self.terms.get_mut(&key) {
            Some(old) => {
                old.add_assign(&v);
                if old.is_null() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, v);
            }
        }
        Ok(())
    }

    /// Drop every term below `floor` and lower the floor to it.
    pub fn truncate(&mut self, floor: &Scalar) {
        let before = self.terms.len();
        self.terms.retain(|(e, _), _| e >= floor);
        if self.terms.len() < before {
            self.truncated = true;
        }
        self.floor = max_floor(&self.floor, &Some(floor.clone()));
    }

    /// Drop every term above `ceiling` and lower the ceiling to it.
    pub fn truncate_above(&mut self, ceiling: &Scalar) {
        let before = self.terms.len();
        self.terms.retain(|(e, _), _| e <= ceiling);
        if self.terms.len() < before {
            self.truncated = true;
        }
        self.ceiling = min_ceiling(&self.ceiling, &Some(ceiling.clone()));
    }

    /// `a ± b`; the window of the result is the intersection.
    pub fn combine<K: Coeff>(&self, other: &Self, mode: CombineMode) -> Result<Self, SeriesError>
    where
        V: Linear<K>,
    {
        if self.denom != other.denom {
            return Err(SeriesError::BoundMismatch(self.denom, other.denom));
        }
        let mut out = self.clone();
        out.floor = max_floor(&self.floor, &other.floor);
        out.ceiling = min_ceiling(&self.ceiling, &other.ceiling);
        out.truncated = self.truncated || other.truncated;
        let sign = match mode {
            CombineMode::Add => K::one_elt(),
            CombineMode::Sub => K::one_elt().negated(),
        };
        for ((e, k), v) in &other.terms {
            out.add_term(e.clone(), *k, v.scaled(&sign))?;
        }
        if let Some(f) = out.floor.clone() {
            out.truncate(&f);
        }
        if let Some(c) = out.ceiling.clone() {
            out.truncate_above(&c);
        }
        Ok(out)
    }

    /// `c · S`.
    pub fn scale<K: Coeff>(&self, c: &K) -> Self
    where
        V: Linear<K>,
    {
        let mut out = LogSeries {
            terms: BTreeMap::new(),
            floor: self.floor.clone(),
            ceiling: self.ceiling.clone(),
            denom: self.denom,
            truncated: self.truncated,
        };
        for ((e, k), v) in &self.terms {
            let w = v.scaled(c);
            if !w.is_null() {
                out.terms.insert((e.clone(), *k), w);
            }
        }
        out
    }

    /// `x^e (log x)^k · S`. The window moves up by `e`.
    pub fn shift(&self, e: &Scalar, k: u32) -> Result<Self, SeriesError>
    where
        V: Clone,
    {
        self.check_exponent(e)?;
        Ok(LogSeries {
            terms: self
                .terms
                .iter()
                .map(|((a, b), v)| ((a + e, b + k), v.clone()))
                .collect(),
            floor: self.floor.as_ref().map(|f| f + e),
            ceiling: self.ceiling.as_ref().map(|c| c + e),
            denom: self.denom,
            truncated: self.truncated,
        })
    }

    /// `d/dx`: `c x^e (log x)^k ↦ c e x^{e-1} (log x)^k + c k x^{e-1} (log x)^{k-1}`.
    pub fn derivative<K: Coeff>(&self) -> Self
    where
        V: Linear<K>,
    {
        let mut out = LogSeries::zero(self.denom);
        out.truncated = self.truncated;
        for ((e, k), v) in &self.terms {
            let e1 = e - Scalar::one();
            if !e.is_zero() {
                out.add_term(e1.clone(), *k, v.scaled(&K::from_scalar(e)))
                    .expect("exponent bound preserved");
            }
            if *k > 0 {
                out.add_term(e1, k - 1, v.scaled(&K::from_scalar(&int(*k as i64))))
                    .expect("exponent bound preserved");
            }
        }
        out.floor = self.floor.as_ref().map(|f| f - Scalar::one());
        out.ceiling = self.ceiling.as_ref().map(|c| c - Scalar::one());
        out
    }

    /// `∫_0^x`: `v y^n ↦ v x^{n+1}/(n+1)`, defined for integral `n ≠ -1`
    /// and no log terms.
    pub fn formal_integral_0_to_x<K: Coeff>(&self) -> Result<Self, SeriesError>
    where
        V: Linear<K>,
    {
        let mut out = LogSeries::zero(self.denom);
        out.truncated = self.truncated;
        for ((e, k), v) in &self.terms {
            if *k != 0 {
                return Err(SeriesError::DomainError(format!(
                    "log term (log x)^{k} at exponent {e}"
                )));
            }
            if *e == -Scalar::one() {
                return Err(SeriesError::DomainError("term with exponent -1".into()));
            }
            if !e.is_integer() {
                return Err(SeriesError::DomainError(format!("non-integral exponent {e}")));
            }
            let e1 = e + Scalar::one();
            out.add_term(e1.clone(), 0, v.scaled(&K::from_scalar(&(Scalar::one() / e1))))?;
        }
        out.floor = self.floor.as_ref().map(|f| f + Scalar::one());
        out.ceiling = self.ceiling.as_ref().map(|c| c + Scalar::one());
        Ok(out)
    }

    /// Substitute `x ↦ -x` on an integral-exponent, log-free series, with
    /// `(-x)^m = (-1)^m x^m`.
    pub fn negate_variable<K: Coeff>(&self) -> Result<Self, SeriesError>
    where
        V: Linear<K>,
    {
        let mut out = LogSeries::zero(self.denom);
        out.floor = self.floor.clone();
        out.ceiling = self.ceiling.clone();
        out.truncated = self.truncated;
        for ((e, k), v) in &self.terms {
            if *k != 0 || !e.is_integer() {
                return Err(SeriesError::DomainError(format!(
                    "x -> -x needs integral exponents without logs, found x^{e} (log x)^{k}"
                )));
            }
            let odd = e.to_integer() % 2 != num_bigint::BigInt::zero();
            let c = if odd { K::one_elt().negated() } else { K::one_elt() };
            out.add_term(e.clone(), 0, v.scaled(&c))?;
        }
        Ok(out)
    }

    /// Coefficientwise equality of the terms, ignoring floors and flags.
    pub fn same_terms(&self, other: &Self) -> bool
    where
        V: PartialEq,
    {
        self.terms == other.terms
    }
}

impl<V: Linear<CycScalar>> LogSeries<V> {
    /// Move to the branch `p + steps`: `x^e ↦ e^{2πi e·steps} x^e` and
    /// `log x ↦ log x + steps·T`.
    pub fn branch_shift(&self, steps: i64) -> Self {
        let mut out = LogSeries::zero(self.denom);
        out.floor = self.floor.clone();
        out.ceiling = self.ceiling.clone();
        out.truncated = self.truncated;
        let shift = CycScalar::from_scalar(&int(steps)).times(&CycScalar::t());
        for ((e, k), v) in &self.terms {
            let phase = CycScalar::exp_2pi_i(&(e * int(steps)));
            // (log x + s T)^k = Σ_j C(k, j) (s T)^{k-j} (log x)^j
            let mut shift_pow = CycScalar::one_elt();
            let mut pows = vec![CycScalar::one_elt()];
            for _ in 0..*k {
                shift_pow = shift_pow.times(&shift);
                pows.push(shift_pow.clone());
            }
            for j in 0..=*k {
                let c = CycScalar::from_scalar(&binomial(&int(*k as i64), j))
                    .times(&pows[(*k - j) as usize])
                    .times(&phase);
                out.add_term(e.clone(), j, v.scaled(&c))
                    .expect("exponent bound preserved");
            }
        }
        out
    }
}
