//! Exact arithmetic kernel: rationals, cyclotomic scalars with a formal
//! `T = 2πi`, dense polynomials and matrices over Q, and sparse
//! log-Puiseux series `Σ c x^e (log x)^k`.

pub mod coeff;
pub mod cyclotomic;
pub mod matrix;
pub mod par;
pub mod poly;
pub mod scalar;
pub mod series;

pub use coeff::{Coeff, Linear};
pub use cyclotomic::CycScalar;
pub use matrix::{LinalgError, Matrix};
pub use poly::QPoly;
pub use scalar::{
    abs, binomial, denominator_lcm, factorial, format_scalar, int, is_integer, parse_scalar, rat,
    sign_power, to_i64, Scalar, ScalarParseError,
};
pub use series::{CombineMode, LogSeries, SeriesError};
