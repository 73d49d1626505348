//! Finite-dimensional simple Lie algebras over Q with a Chevalley basis, the
//! normalized invariant form, Jordan–Chevalley decomposition, and
//! automorphisms carried as exponent data.

mod algebra;
mod automorphism;
mod decompose;

pub use algebra::{build_simple_lie, LieAlgebra, LieElt};
pub use automorphism::{
    diagram_automorphism, inner_automorphism, is_automorphism, AlgMap, AutomorphismData,
};
pub use decompose::{ad_eigendata, jordan_chevalley, unipotent_log};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LieError {
    #[error("unsupported algebra {0}")]
    UnsupportedAlgebra(String),
    #[error("spectrum is not rational; a field extension is required")]
    NeedsFieldExtension,
    #[error("element is not semisimple")]
    NotSemisimple,
    #[error("not a diagram symmetry: {0}")]
    InvalidSymmetry(String),
    #[error("matrix is not unipotent")]
    NotUnipotent,
    #[error("unknown basis element {0:?}")]
    UnknownBasisElement(String),
    #[error("invalid automorphism data: {0}")]
    InvalidAutomorphism(String),
}

impl From<exact_kernel::LinalgError> for LieError {
    fn from(e: exact_kernel::LinalgError) -> Self {
        use exact_kernel::LinalgError as L;
        match e {
            L::NeedsFieldExtension => LieError::NeedsFieldExtension,
            L::NotUnipotent => LieError::NotUnipotent,
            other => LieError::InvalidAutomorphism(other.to_string()),
        }
    }
}
