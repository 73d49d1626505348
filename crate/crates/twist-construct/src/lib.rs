//! Twisted modules `(W, Y^{g g_u})` built from `(W, Y^g)` through `Δ^{(u)}`,
//! with regrading, transport along algebra automorphisms, closed-form mode
//! tables, and the induced functor on module maps.

mod functor;
mod grading;
mod module;
mod tables;

pub use functor::{functor_on_map, intertwines, ModuleMap};
pub use grading::{class_mod_one, Bigrade, Bigrading, GradingMode};
pub use module::{ExternalTwisted, Layer, TwistedModule};
pub use tables::{closed_form_mode, mode_table, ModeOp, ModeRow, ModeTable};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TwistError {
    #[error("u is not fixed by the twisting automorphism")]
    NotFixed,
    #[error("spectrum is not rational; a field extension is required")]
    NeedsFieldExtension,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("map does not intertwine: {0}")]
    NotIntertwining(String),
    #[error("invalid automorphism: {0}")]
    InvalidAutomorphism(String),
    #[error("not certifiable within the cutoff: {0}")]
    Uncertifiable(String),
    #[error(transparent)]
    Delta(delta_op::DeltaError),
    #[error(transparent)]
    Series(#[from] exact_kernel::SeriesError),
}

impl From<delta_op::DeltaError> for TwistError {
    fn from(e: delta_op::DeltaError) -> Self {
        match e {
            delta_op::DeltaError::NeedsFieldExtension => TwistError::NeedsFieldExtension,
            other => TwistError::Delta(other),
        }
    }
}

impl From<lie_core::LieError> for TwistError {
    fn from(e: lie_core::LieError) -> Self {
        match e {
            lie_core::LieError::NeedsFieldExtension => TwistError::NeedsFieldExtension,
            other => TwistError::InvalidAutomorphism(other.to_string()),
        }
    }
}
