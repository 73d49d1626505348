use exact_kernel::{denominator_lcm, factorial, Coeff, CycScalar, Matrix, Scalar};
use num_traits::{One, Zero};

use crate::{jordan_chevalley, LieAlgebra, LieElt, LieError};

/// A linear map of the algebra; column `j` is the image of `b_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgMap {
    pub matrix: Matrix<Scalar>,
}

impl AlgMap {
    pub fn identity(alg: &LieAlgebra) -> Self {
        AlgMap { matrix: Matrix::identity(alg.dim()) }
    }

    pub fn apply(&self, x: &LieElt) -> LieElt {
        LieElt(self.matrix.apply(&x.0))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &AlgMap) -> AlgMap {
        AlgMap { matrix: self.matrix.mul(&other.matrix) }
    }

    pub fn inverse(&self) -> Result<AlgMap, LieError> {
        let matrix = self
            .matrix
            .inverse()
            .map_err(|_| LieError::InvalidAutomorphism("map is singular".into()))?;
        Ok(AlgMap { matrix })
    }

    /// Smallest `r ≤ limit` with `self^r = 1`.
    pub fn order(&self, limit: usize) -> Option<usize> {
        let id = Matrix::identity(self.matrix.rows());
        let mut p = self.matrix.clone();
        for r in 1..=limit {
            if p == id {
                return Some(r);
            }
            p = p.mul(&self.matrix);
        }
        None
    }

    pub fn to_cyc(&self) -> Matrix<CycScalar> {
        self.matrix.map(CycScalar::from_scalar)
    }
}

fn bracket_coeffs<K: Coeff>(alg: &LieAlgebra, x: &[K], y: &[K]) -> Vec<K> {
    let mut out = vec![K::zero_elt(); alg.dim()];
    for (i, a) in x.iter().enumerate().filter(|(_, a)| !a.is_zero_elt()) {
        for (j, b) in y.iter().enumerate().filter(|(_, b)| !b.is_zero_elt()) {
            let ab = a.times(b);
            for (k, c) in alg.bracket_basis(i, j).support() {
                out[k] = out[k].plus(&ab.times(&K::from_scalar(c)));
            }
        }
    }
    out
}

fn form_coeffs<K: Coeff>(alg: &LieAlgebra, x: &[K], y: &[K]) -> K {
    let mut acc = K::zero_elt();
    for (i, a) in x.iter().enumerate() {
        for (j, b) in y.iter().enumerate() {
            let g = alg.form_basis(i, j);
            if !g.is_zero() {
                acc = acc.plus(&a.times(b).times(&K::from_scalar(g)));
            }
        }
    }
    acc
}

/// Whether `m` preserves the bracket and the form on all basis pairs.
pub fn is_automorphism<K: Coeff>(alg: &LieAlgebra, m: &Matrix<K>) -> bool {
    let d = alg.dim();
    let cols: Vec<Vec<K>> = (0..d).map(|j| m.col(j)).collect();
    for i in 0..d {
        for j in 0..d {
            let lhs = m.apply(
                &alg.bracket_basis(i, j)
                    .0
                    .iter()
                    .map(K::from_scalar)
                    .collect::<Vec<_>>(),
            );
            if lhs != bracket_coeffs(alg, &cols[i], &cols[j]) {
                return false;
            }
            if form_coeffs(alg, &cols[i], &cols[j]) != K::from_scalar(alg.form_basis(i, j)) {
                return false;
            }
        }
    }
    true
}

/// The automorphism induced by a Dynkin diagram symmetry. Simple root
/// vectors are permuted without signs; signs on the remaining root vectors
/// are found by exhaustive search against the bracket table.
pub fn diagram_automorphism(alg: &LieAlgebra, perm: &[usize]) -> Result<AlgMap, LieError> {
    let r = alg.rank();
    if perm.len() != r {
        return Err(LieError::InvalidSymmetry(format!("expected {r} entries")));
    }
    let mut seen = vec![false; r];
    for &p in perm {
        if p >= r || std::mem::replace(&mut seen[p], true) {
            return Err(LieError::InvalidSymmetry(format!("{perm:?} is not a permutation")));
        }
    }
    let cm = alg.cartan_matrix();
    for i in 0..r {
        for j in 0..r {
            if cm[perm[i]][perm[j]] != cm[i][j] {
                return Err(LieError::InvalidSymmetry(format!(
                    "{perm:?} does not preserve the Cartan matrix"
                )));
            }
        }
    }
    let d = alg.dim();
    let mut target = vec![0usize; d];
    let mut free = Vec::new();
    for (k, &h) in alg.cartan_indices().iter().enumerate() {
        target[h] = alg.cartan_indices()[perm[k]];
    }
    for i in (0..d).filter(|i| !alg.cartan_indices().contains(i)) {
        let root = alg.root(i);
        let mut image = vec![0i64; r];
        for k in 0..r {
            image[perm[k]] = root[k];
        }
        target[i] = alg.root_vector(&image).expect("diagram symmetries permute roots");
        if root.iter().map(|c| c.abs()).sum::<i64>() > 1 {
            free.push(i);
        }
    }
    for mask in 0u64..(1u64 << free.len()) {
        let mut m = Matrix::<Scalar>::zeros(d, d);
        for i in 0..d {
            m.set(target[i], i, Scalar::one());
        }
        for (bit, &i) in free.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                m.set(target[i], i, -Scalar::one());
            }
        }
        if is_automorphism(alg, &m) {
            return Ok(AlgMap { matrix: m });
        }
    }
    Err(LieError::InvalidSymmetry(format!("no sign choice makes {perm:?} an automorphism")))
}

/// `e^{2πi ad_s}` for `ad_s` semisimple with rational spectrum.
fn exp_semisimple(ad_s: &Matrix<Scalar>) -> Result<Matrix<CycScalar>, LieError> {
    let d = ad_s.rows();
    let mut out = Matrix::<CycScalar>::zeros(d, d);
    for (lam, p) in ad_s.spectral_projectors()? {
        let z = CycScalar::exp_2pi_i(&lam);
        out = out.add(&p.map(|c| CycScalar::from_scalar(c).times(&z)));
    }
    Ok(out)
}

/// `e^{T ad_n}` for nilpotent `ad_n`, with `T` the formal `2πi`.
fn exp_nilpotent_t(ad_n: &Matrix<Scalar>) -> Matrix<CycScalar> {
    let d = ad_n.rows();
    let k = ad_n.nilpotency_index().expect("ad_n nilpotent");
    let mut out = Matrix::<CycScalar>::zeros(d, d);
    let mut pw = Matrix::<Scalar>::identity(d);
    for j in 0..k {
        let c = CycScalar::t_pow(j).times(&CycScalar::from_scalar(&(Scalar::one() / factorial(j as u32))));
        out = out.add(&pw.map(|x| CycScalar::from_scalar(x).times(&c)));
        pw = pw.mul(ad_n);
    }
    out
}

/// `e^{2πi ad_a}` on the algebra, through the Jordan–Chevalley split of `a`.
pub fn inner_automorphism(alg: &LieAlgebra, a: &LieElt) -> Result<Matrix<CycScalar>, LieError> {
    let (s, n) = jordan_chevalley(alg, a)?;
    Ok(exp_semisimple(&alg.ad(&s))?.mul(&exp_nilpotent_t(&alg.ad(&n))))
}

/// `g = τ μ e^{2πi ad_h} e^{2πi ad_n} τ^{-1}` carried as exponent data.
#[derive(Clone, Debug, PartialEq)]
pub struct AutomorphismData {
    /// Permutation of simple-root indices.
    pub diagram: Vec<usize>,
    pub h: LieElt,
    pub n: LieElt,
    pub tau: Option<AlgMap>,
}

impl AutomorphismData {
    pub fn identity(alg: &LieAlgebra) -> Self {
        AutomorphismData {
            diagram: (0..alg.rank()).collect(),
            h: LieElt::zero(alg.dim()),
            n: LieElt::zero(alg.dim()),
            tau: None,
        }
    }

    pub fn is_diagram_trivial(&self) -> bool {
        self.diagram.iter().enumerate().all(|(i, &p)| i == p)
    }

    pub fn diagram_map(&self, alg: &LieAlgebra) -> Result<AlgMap, LieError> {
        diagram_automorphism(alg, &self.diagram)
    }

    /// Check the invariants: μ a diagram symmetry, `h` in the Cartan and
    /// μ-fixed, `ad_n` nilpotent, `τ` an automorphism, and the assembled map
    /// an automorphism.
    pub fn validate(&self, alg: &LieAlgebra) -> Result<(), LieError> {
        let mu = self.diagram_map(alg)?;
        if !alg.is_cartan(&self.h) {
            return Err(LieError::InvalidAutomorphism("h is not in the Cartan subalgebra".into()));
        }
        if mu.apply(&self.h) != self.h {
            return Err(LieError::InvalidAutomorphism("h is not fixed by the diagram part".into()));
        }
        if alg.ad(&self.n).nilpotency_index().is_none() {
            return Err(LieError::InvalidAutomorphism("ad_n is not nilpotent".into()));
        }
        if let Some(tau) = &self.tau {
            if !is_automorphism(alg, &tau.matrix) {
                return Err(LieError::InvalidAutomorphism("τ is not an automorphism".into()));
            }
        }
        if !is_automorphism(alg, &self.cyc_matrix(alg)?) {
            return Err(LieError::InvalidAutomorphism("assembled map is not an automorphism".into()));
        }
        Ok(())
    }

    /// The action on the algebra over `Q(ζ_D)[T]`.
    pub fn cyc_matrix(&self, alg: &LieAlgebra) -> Result<Matrix<CycScalar>, LieError> {
        let mu = self.diagram_map(alg)?.to_cyc();
        let core = mu
            .mul(&exp_semisimple(&alg.ad(&self.h))?)
            .mul(&exp_nilpotent_t(&alg.ad(&self.n)));
        Ok(match &self.tau {
            None => core,
            Some(tau) => tau.to_cyc().mul(&core).mul(&tau.inverse()?.to_cyc()),
        })
    }

    /// Common denominator of the `ad_h` eigenvalues.
    pub fn exponent_denominator(&self, alg: &LieAlgebra) -> u64 {
        let vals: Vec<Scalar> = (0..alg.dim()).map(|i| alg.root_value(&self.h, i)).collect();
        denominator_lcm(vals.iter())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::build_simple_lie;
    use exact_kernel::{int, rat};

    #[test]
    fn diagram_examples() {
        let g1 = build_simple_lie("A", 1).unwrap();
        assert_eq!(diagram_automorphism(&g1, &[0]).unwrap(), AlgMap::identity(&g1));
        let g2 = build_simple_lie("A", 2).unwrap();
        let mu = diagram_automorphism(&g2, &[1, 0]).unwrap();
        let img = |n: &str| mu.apply(&g2.named(n).unwrap());
        assert_eq!(img("e1"), g2.named("e2").unwrap());
        assert_eq!(img("f2"), g2.named("f1").unwrap());
        assert_eq!(img("h1"), g2.named("h2").unwrap());
        assert_eq!(img("e12"), g2.named("e12").unwrap().neg());
        assert_eq!(mu.compose(&mu), AlgMap::identity(&g2));
        assert_eq!(mu.order(6), Some(2));
        assert!(matches!(
            diagram_automorphism(&g2, &[0, 0]),
            Err(LieError::InvalidSymmetry(_))
        ));
        let g3 = build_simple_lie("A", 3).unwrap();
        assert!(diagram_automorphism(&g3, &[2, 1, 0]).is_ok());
        assert!(matches!(
            diagram_automorphism(&g3, &[1, 0, 2]),
            Err(LieError::InvalidSymmetry(_))
        ));
    }

    #[test]
    fn inner_automorphisms() {
        let g = build_simple_lie("A", 1).unwrap();
        let s = g.element(&[("h", rat(1, 3))]).unwrap();
        let m = inner_automorphism(&g, &s).unwrap();
        assert!(is_automorphism(&g, &m));
        assert_eq!(m.get(0, 0), &CycScalar::zeta(3, 2));
        let e = g.named("e").unwrap();
        let m = inner_automorphism(&g, &e).unwrap();
        assert!(is_automorphism(&g, &m));
        // e^{T ad_e} f = f + T h - T^2 e
        let col = m.col(2);
        assert_eq!(col[1], CycScalar::t());
        assert_eq!(col[0], CycScalar::t_pow(2).negated());
    }

    #[test]
    fn data_validation() {
        let g = build_simple_lie("A", 2).unwrap();
        let mut data = AutomorphismData::identity(&g);
        data.diagram = vec![1, 0];
        data.h = g.element(&[("h1", rat(1, 2)), ("h2", rat(1, 2))]).unwrap();
        assert!(data.validate(&g).is_ok());
        assert_eq!(data.exponent_denominator(&g), 2);
        data.h = g.element(&[("h1", int(1))]).unwrap();
        assert!(matches!(data.validate(&g), Err(LieError::InvalidAutomorphism(_))));
    }
}
