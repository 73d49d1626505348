//! Coefficient rings and the linear spaces series take values in.

use std::fmt::Debug;

use num_traits::{One, Zero};

use crate::scalar::Scalar;

/// A commutative ring of exact coefficients containing Q.
pub trait Coeff: Clone + PartialEq + Debug + Send + Sync + 'static {
    fn zero_elt() -> Self;
    fn one_elt() -> Self;
    fn is_zero_elt(&self) -> bool;
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn negated(&self) -> Self;
    fn from_scalar(x: &Scalar) -> Self;
    /// Stable text rendering used in reports.
    fn render(&self) -> String;
}

impl Coeff for Scalar {
    fn zero_elt() -> Self {
        Zero::zero()
    }
    fn one_elt() -> Self {
        One::one()
    }
    fn is_zero_elt(&self) -> bool {
        Zero::is_zero(self)
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negated(&self) -> Self {
        -self
    }
    fn from_scalar(x: &Scalar) -> Self {
        x.clone()
    }
    fn render(&self) -> String {
        self.to_string()
    }
}

/// A vector space over `K`, used as the coefficient space of a series.
pub trait Linear<K: Coeff>: Clone + PartialEq + Debug + Send + Sync {
    fn null() -> Self;
    fn is_null(&self) -> bool;
    fn add_assign(&mut self, other: &Self);
    fn scaled(&self, k: &K) -> Self;
    fn render(&self) -> String;
}

impl<K: Coeff> Linear<K> for K {
    fn null() -> Self {
        K::zero_elt()
    }
    fn is_null(&self) -> bool {
        self.is_zero_elt()
    }
    fn add_assign(&mut self, other: &Self) {
        *self = self.plus(other);
    }
    fn scaled(&self, k: &K) -> Self {
        self.times(k)
    }
    fn render(&self) -> String {
        Coeff::render(self)
    }
}
