//! The operator series `Δ^{(u)}(x) = x^{-Y_0(u)} exp(-∫_0^{-x} Y^{≤-2}(u, y))`
//! on the vacuum module, applied exactly to vectors.

mod delta;
mod expand;

pub use delta::{eigen_split_capped, DeltaOperator, DeltaSign, EigenPiece};
pub use expand::{apply_to_series, taylor_shift};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DeltaError {
    #[error("u is not quasi-primary: L(1)u ≠ 0")]
    NotQuasiPrimary,
    #[error("spectrum is not rational; a field extension is required")]
    NeedsFieldExtension,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Affine(#[from] affine_fock::AffineError),
    #[error(transparent)]
    Series(#[from] exact_kernel::SeriesError),
}

impl From<lie_core::LieError> for DeltaError {
    fn from(e: lie_core::LieError) -> Self {
        match e {
            lie_core::LieError::NeedsFieldExtension => DeltaError::NeedsFieldExtension,
            other => DeltaError::Affine(other.into()),
        }
    }
}
