use exact_kernel::{int, Matrix, Scalar};
use lie_core::LieAlgebra;
use num_traits::{One, Zero};

use crate::AffineError;

/// A finite-dimensional `g`-module given by exact matrices for the basis.
#[derive(Clone, Debug)]
pub struct TopModule {
    pub label: String,
    pub names: Vec<String>,
    pub matrices: Vec<Matrix<Scalar>>,
}

impl TopModule {
    pub fn trivial(alg: &LieAlgebra) -> Self {
        TopModule {
            label: "0".into(),
            names: vec!["1".into()],
            matrices: vec![Matrix::zeros(1, 1); alg.dim()],
        }
    }

    /// The irreducible `sl_2`-module of highest weight `n`, with basis
    /// `v_k = f^k v_0`.
    pub fn sl2_irreducible(alg: &LieAlgebra, n: usize) -> Result<Self, AffineError> {
        if alg.label() != "A1" {
            return Err(AffineError::InvalidTop("sl2 irreducibles need type A1".into()));
        }
        if n == 0 {
            return Ok(Self::trivial(alg));
        }
        let d = n + 1;
        let mut e = Matrix::zeros(d, d);
        let mut h = Matrix::zeros(d, d);
        let mut f = Matrix::zeros(d, d);
        for k in 0..d {
            h.set(k, k, int(n as i64 - 2 * k as i64));
            if k + 1 < d {
                f.set(k + 1, k, Scalar::one());
            }
            if k > 0 {
                e.set(k - 1, k, int((k * (n - k + 1)) as i64));
            }
        }
        let mut matrices = vec![Matrix::zeros(d, d); 3];
        matrices[alg.index_of("e")?] = e;
        matrices[alg.index_of("h")?] = h;
        matrices[alg.index_of("f")?] = f;
        Self::from_matrices(alg, n.to_string(), matrices)
    }

    /// The defining representation of `sl_{r+1}`.
    pub fn defining(alg: &LieAlgebra) -> Result<Self, AffineError> {
        Self::from_matrices(alg, "defining".into(), alg.defining_rep().to_vec())
    }

    /// Validate a representation given by matrices for each basis element.
    pub fn from_matrices(
        alg: &LieAlgebra,
        label: String,
        matrices: Vec<Matrix<Scalar>>,
    ) -> Result<Self, AffineError> {
        if matrices.len() != alg.dim() {
            return Err(AffineError::InvalidTop("one matrix per basis element".into()));
        }
        let d = matrices[0].rows();
        for i in 0..alg.dim() {
            for j in 0..alg.dim() {
                let mut rhs = Matrix::<Scalar>::zeros(d, d);
                for (k, c) in alg.bracket_basis(i, j).support() {
                    rhs = rhs.add(&matrices[k].scale(c));
                }
                if matrices[i].commutator(&matrices[j]) != rhs {
                    return Err(AffineError::InvalidTop(format!(
                        "[{}, {}] is not represented",
                        alg.name(i),
                        alg.name(j)
                    )));
                }
            }
        }
        let names = if d == 1 && matrices.iter().all(|m| m.is_zero()) {
            vec!["1".into()]
        } else {
            (0..d).map(|k| format!("v{k}")).collect()
        };
        Ok(TopModule { label, names, matrices })
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    /// `Σ G^{ij} ρ(b_i) ρ(b_j)`, which must be a scalar for an irreducible top.
    pub fn casimir(&self, alg: &LieAlgebra) -> Result<Scalar, AffineError> {
        let d = self.dim();
        let ginv = alg.inverse_form();
        let mut cas = Matrix::<Scalar>::zeros(d, d);
        for i in 0..alg.dim() {
            for j in 0..alg.dim() {
                let c = ginv.get(i, j);
                if !c.is_zero() {
                    cas = cas.add(&self.matrices[i].mul(&self.matrices[j]).scale(c));
                }
            }
        }
        let c = cas.get(0, 0).clone();
        if cas != Matrix::identity(d).scale(&c) {
            return Err(AffineError::InvalidTop("Casimir is not scalar".into()));
        }
        Ok(c)
    }
}
