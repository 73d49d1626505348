use affine_fock::PBWVector;
use exact_kernel::{CycScalar, LogSeries};

/// The branch `p`: `x^n ↦ e^{n l_p(z)}`, `log x ↦ l_p(z)` with
/// `l_p(z) = log z + 2πi p`. Relative to `p = 0` this is the exact
/// `branch_shift` by `p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BranchContext {
    pub p: i64,
}

impl BranchContext {
    pub fn new(p: i64) -> Self {
        BranchContext { p }
    }

    pub fn next(self) -> Self {
        BranchContext { p: self.p + 1 }
    }

    /// Evaluate a series on this branch.
    pub fn apply(
        &self,
        s: &LogSeries<PBWVector<CycScalar>>,
    ) -> LogSeries<PBWVector<CycScalar>> {
        s.branch_shift(self.p)
    }
}
