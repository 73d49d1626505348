use std::fmt;

use exact_kernel::{int, Matrix, Scalar};
use num_traits::{One, Zero};

use crate::LieError;

/// Coordinates in the Chevalley basis of a fixed algebra.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LieElt(pub Vec<Scalar>);

impl LieElt {
    pub fn zero(dim: usize) -> Self {
        LieElt(vec![Scalar::zero(); dim])
    }

    pub fn basis(dim: usize, i: usize) -> Self {
        let mut v = LieElt::zero(dim);
        v.0[i] = Scalar::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coeff(&self, i: usize) -> &Scalar {
        &self.0[i]
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, other: &LieElt) -> LieElt {
        LieElt(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &LieElt) -> LieElt {
        LieElt(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, k: &Scalar) -> LieElt {
        LieElt(self.0.iter().map(|a| a * k).collect())
    }

    pub fn neg(&self) -> LieElt {
        self.scale(&-Scalar::one())
    }

    /// Nonzero coordinates.
    pub fn support(&self) -> impl Iterator<Item = (usize, &Scalar)> {
        self.0.iter().enumerate().filter(|(_, c)| !c.is_zero())
    }
}

/// A simple Lie algebra with Chevalley basis ordered as positive root
/// vectors, then the Cartan generators, then negative root vectors.
#[derive(Clone, Debug)]
pub struct LieAlgebra {
    label: String,
    rank: usize,
    names: Vec<String>,
    /// `brackets[i][j] = [b_i, b_j]`.
    brackets: Vec<Vec<LieElt>>,
    form: Vec<Vec<Scalar>>,
    dual_coxeter: Scalar,
    cartan: Vec<usize>,
    /// Root of each basis vector in simple-root coordinates (zero on the Cartan).
    roots: Vec<Vec<i64>>,
    cartan_matrix: Vec<Vec<i64>>,
    /// Matrices of the defining representation.
    defining: Vec<Matrix<Scalar>>,
    /// `G^{-1}` of the form, used for dual bases.
    inverse_form: Matrix<Scalar>,
}

/// Build the algebra of the given Cartan type and rank. Type A is
/// supported; other types report `UnsupportedAlgebra`.
pub fn build_simple_lie(type_label: &str, rank: usize) -> Result<LieAlgebra, LieError> {
    let label = format!("{type_label}{rank}");
    if type_label != "A" || rank == 0 || rank > 8 {
        return Err(LieError::UnsupportedAlgebra(label));
    }
    let n = rank + 1;
    // Positive roots eps_i - eps_j, i < j, ordered by height then start.
    let mut pos: Vec<(usize, usize)> = Vec::new();
    for height in 1..n {
        for i in 0..n - height {
            pos.push((i, i + height));
        }
    }
    let root_name = |i: usize, j: usize| -> String {
        if rank == 1 {
            String::new()
        } else {
            (i + 1..=j).map(|k| k.to_string()).collect()
        }
    };
    let unit = |i: usize, j: usize| {
        let mut m = Matrix::<Scalar>::zeros(n, n);
        m.set(i, j, Scalar::one());
        m
    };
    let mut names = Vec::new();
    let mut defining = Vec::new();
    let mut roots = Vec::new();
    let coords = |i: usize, j: usize| -> Vec<i64> { (0..rank).map(|k| (i <= k && k < j) as i64).collect() };
    for &(i, j) in &pos {
        names.push(format!("e{}", root_name(i, j)));
        defining.push(unit(i, j));
        roots.push(coords(i, j));
    }
    let mut cartan = Vec::new();
    for k in 0..rank {
        cartan.push(names.len());
        names.push(if rank == 1 { "h".into() } else { format!("h{}", k + 1) });
        defining.push(unit(k, k).sub(&unit(k + 1, k + 1)));
        roots.push(vec![0; rank]);
    }
    for &(i, j) in &pos {
        names.push(format!("f{}", root_name(i, j)));
        defining.push(unit(j, i));
        roots.push(coords(i, j).iter().map(|c| -c).collect());
    }
    let dim = names.len();
    let npos = pos.len();

    // Coordinates of a traceless matrix in the basis.
    let decompose = |m: &Matrix<Scalar>| -> LieElt {
        let mut v = LieElt::zero(dim);
        for (idx, &(i, j)) in pos.iter().enumerate() {
            v.0[idx] = m.get(i, j).clone();
            v.0[npos + rank + idx] = m.get(j, i).clone();
        }
        let mut acc = Scalar::zero();
        for k in 0..rank {
            acc += m.get(k, k);
            v.0[npos + k] = acc.clone();
        }
        v
    };
    let brackets: Vec<Vec<LieElt>> = (0..dim)
        .map(|a| {
            (0..dim)
                .map(|b| decompose(&defining[a].commutator(&defining[b])))
                .collect()
        })
        .collect();
    let form: Vec<Vec<Scalar>> = (0..dim)
        .map(|a| {
            (0..dim)
                .map(|b| {
                    let p = defining[a].mul(&defining[b]);
                    (0..n).map(|k| p.get(k, k).clone()).sum()
                })
                .collect()
        })
        .collect();
    let cartan_matrix: Vec<Vec<i64>> = (0..rank)
        .map(|i| {
            (0..rank)
                .map(|j| match i.abs_diff(j) {
                    0 => 2,
                    1 => -1,
                    _ => 0,
                })
                .collect()
        })
        .collect();
    let inverse_form = Matrix::from_rows(form.clone())
        .inverse()
        .expect("invariant form is nondegenerate");
    let mut alg = LieAlgebra {
        label,
        rank,
        names,
        brackets,
        form,
        dual_coxeter: Scalar::zero(),
        cartan,
        roots,
        cartan_matrix,
        defining,
        inverse_form,
    };
    alg.dual_coxeter = alg.dual_coxeter_from_roots();
    alg.self_check();
    Ok(alg)
}

impl LieAlgebra {
    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Result<usize, LieError> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| LieError::UnknownBasisElement(name.to_string()))
    }

    pub fn basis(&self, i: usize) -> LieElt {
        LieElt::basis(self.dim(), i)
    }

    /// The basis element with the given name.
    pub fn named(&self, name: &str) -> Result<LieElt, LieError> {
        Ok(self.basis(self.index_of(name)?))
    }

    /// `Σ c_i b_i` from `(name, c_i)` pairs.
    pub fn element(&self, terms: &[(&str, Scalar)]) -> Result<LieElt, LieError> {
        let mut v = LieElt::zero(self.dim());
        for (name, c) in terms {
            let i = self.index_of(name)?;
            v.0[i] += c;
        }
        Ok(v)
    }

    pub fn cartan_indices(&self) -> &[usize] {
        &self.cartan
    }

    pub fn cartan_matrix(&self) -> &[Vec<i64>] {
        &self.cartan_matrix
    }

    /// Simple-root coordinates of the root of basis vector `i`.
    pub fn root(&self, i: usize) -> &[i64] {
        &self.roots[i]
    }

    /// Index of the root vector for the given root, if any.
    pub fn root_vector(&self, root: &[i64]) -> Option<usize> {
        (0..self.dim()).find(|&i| !self.cartan.contains(&i) && self.roots[i] == root)
    }

    /// Index of `e_{α_k}`.
    pub fn simple_e(&self, k: usize) -> usize {
        let mut r = vec![0; self.rank];
        r[k] = 1;
        self.root_vector(&r).expect("simple root vector")
    }

    /// Index of `f_{α_k}`.
    pub fn simple_f(&self, k: usize) -> usize {
        let mut r = vec![0; self.rank];
        r[k] = -1;
        self.root_vector(&r).expect("simple root vector")
    }

    pub fn bracket_basis(&self, i: usize, j: usize) -> &LieElt {
        &self.brackets[i][j]
    }

    pub fn bracket(&self, x: &LieElt, y: &LieElt) -> LieElt {
        let mut out = LieElt::zero(self.dim());
        for (i, a) in x.support() {
            for (j, b) in y.support() {
                let ab = a * b;
                for (k, c) in self.brackets[i][j].support() {
                    out.0[k] += &ab * c;
                }
            }
        }
        out
    }

    pub fn form_basis(&self, i: usize, j: usize) -> &Scalar {
        &self.form[i][j]
    }

    pub fn form(&self, x: &LieElt, y: &LieElt) -> Scalar {
        let mut acc = Scalar::zero();
        for (i, a) in x.support() {
            for (j, b) in y.support() {
                acc += a * b * &self.form[i][j];
            }
        }
        acc
    }

    /// Matrix of `ad_x`; column `j` holds `[x, b_j]`.
    pub fn ad(&self, x: &LieElt) -> Matrix<Scalar> {
        Matrix::from_cols((0..self.dim()).map(|j| self.bracket(x, &self.basis(j)).0).collect())
    }

    /// The element whose `ad` is `m`, if one exists.
    pub fn ad_preimage(&self, m: &Matrix<Scalar>) -> Option<LieElt> {
        let d = self.dim();
        let ads: Vec<Matrix<Scalar>> = (0..d).map(|k| self.ad(&self.basis(k))).collect();
        let mut sys = Matrix::<Scalar>::zeros(d * d, d);
        let mut rhs = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                for (k, a) in ads.iter().enumerate() {
                    sys.set(i * d + j, k, a.get(i, j).clone());
                }
                rhs.push(m.get(i, j).clone());
            }
        }
        sys.solve(&rhs).ok().map(LieElt)
    }

    pub fn is_cartan(&self, x: &LieElt) -> bool {
        x.support().all(|(i, _)| self.cartan.contains(&i))
    }

    /// For Cartan `s`, the eigenvalue of `ad_s` on basis vector `i`.
    pub fn root_value(&self, s: &LieElt, i: usize) -> Scalar {
        debug_assert!(self.is_cartan(s));
        let mut acc = Scalar::zero();
        for (k, c) in s.support() {
            let slot = self.cartan.iter().position(|&x| x == k).unwrap();
            let pairing: i64 = (0..self.rank)
                .map(|a| self.roots[i][a] * self.cartan_matrix[a][slot])
                .sum();
            acc += c * int(pairing);
        }
        acc
    }

    pub fn dual_coxeter(&self) -> &Scalar {
        &self.dual_coxeter
    }

    /// Inverse Gram matrix of the form; `Σ_{ij} G^{ij} b_i ⊗ b_j` is the
    /// Casimir tensor.
    pub fn inverse_form(&self) -> &Matrix<Scalar> {
        &self.inverse_form
    }

    /// Matrices of the defining representation.
    pub fn defining_rep(&self) -> &[Matrix<Scalar>] {
        &self.defining
    }

    /// `1 + <ρ, θ^∨>` computed from the highest root; type A is simply laced
    /// so `θ^∨` has the coordinates of `θ`.
    fn dual_coxeter_from_roots(&self) -> Scalar {
        let theta = (0..self.dim())
            .filter(|i| !self.cartan.contains(i))
            .max_by_key(|&i| self.roots[i].iter().sum::<i64>())
            .unwrap();
        int(1 + self.roots[theta].iter().sum::<i64>())
    }

    /// Antisymmetry, Jacobi, invariance and normalization on all basis
    /// triples. Panics on failure: these are construction invariants.
    fn self_check(&self) {
        let d = self.dim();
        for i in 0..d {
            for j in 0..d {
                assert_eq!(self.brackets[i][j], self.brackets[j][i].neg(), "antisymmetry");
                assert_eq!(self.form[i][j], self.form[j][i], "form symmetry");
                for k in 0..d {
                    let (x, y, z) = (self.basis(i), self.basis(j), self.basis(k));
                    let jac = self
                        .bracket(&x, &self.bracket(&y, &z))
                        .add(&self.bracket(&y, &self.bracket(&z, &x)))
                        .add(&self.bracket(&z, &self.bracket(&x, &y)));
                    assert!(jac.is_zero(), "Jacobi identity");
                    let inv = self.form(&self.bracket(&x, &y), &z) + self.form(&y, &self.bracket(&x, &z));
                    assert!(inv.is_zero(), "form invariance");
                }
            }
        }
        for &h in &self.cartan {
            assert_eq!(self.form[h][h], int(2), "long roots have squared length 2");
        }
    }
}

impl fmt::Display for LieAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label)
    }
}

impl LieAlgebra {
    /// Render an element as `c*name + ...` in basis order.
    pub fn render(&self, x: &LieElt) -> String {
        let parts: Vec<String> = x
            .support()
            .map(|(i, c)| {
                if c.is_one() {
                    self.names[i].clone()
                } else if *c == -Scalar::one() {
                    format!("-{}", self.names[i])
                } else {
                    format!("{}*{}", c, self.names[i])
                }
            })
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ").replace("+ -", "- ")
        }
    }
}
