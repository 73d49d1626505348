//! Vacuum and induced modules of an untwisted affine Lie algebra, with exact
//! mode actions, Sugawara Virasoro operators, and vertex operator modes.

mod module;
mod pbw;
mod top;

pub use module::{InducedModule, ModeKey};
pub use pbw::{Monomial, PBWVector};
pub use top::TopModule;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AffineError {
    #[error("critical level: ℓ = -h∨ = {0}")]
    CriticalLevel(String),
    #[error("invalid top space: {0}")]
    InvalidTop(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Lie(#[from] lie_core::LieError),
}
