//! Exact, finite-range checks of twisted-module identities, each producing
//! a structured report with a witness on failure.

mod branch;
mod delta_checks;
mod module_checks;
mod report;
mod suite;
mod twist_checks;
mod util;

pub use branch::BranchContext;
pub use delta_checks::*;
pub use module_checks::{
    check_axioms, check_commutator, check_equivariance, check_g_grading, check_grading_restriction,
    check_l0_grading, graded_dimensions,
};
pub use report::{CheckReport, Status, Witness};
pub use suite::{overall_status, run_jobs, Job};
pub use twist_checks::*;
