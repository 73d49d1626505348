//! Dense matrices over exact coefficient rings, with the rational-only
//! algorithms (kernels, characteristic polynomials, Jordan–Chevalley,
//! nilpotent exponential and unipotent logarithm).

use num_traits::{One, Zero};
use thiserror::Error;

use crate::coeff::Coeff;
use crate::poly::QPoly;
use crate::scalar::{int, Scalar};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("spectrum is not contained in Q; a field extension is required")]
    NeedsFieldExtension,
    #[error("matrix is not unipotent")]
    NotUnipotent,
    #[error("matrix is not nilpotent")]
    NotNilpotent,
    #[error("matrix is singular")]
    Singular,
    #[error("linear system has no solution")]
    Inconsistent,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<K> {
    rows: usize,
    cols: usize,
    data: Vec<K>,
}

impl<K: Coeff> Matrix<K> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![K::zero_elt(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, K::one_elt());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<K>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// Build from columns, the usual way to write down a linear map.
    pub fn from_cols(cols: Vec<Vec<K>>) -> Self {
        Matrix::from_rows(cols).transpose()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &K {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: K) {
        self.data[i * self.cols + j] = v;
    }

    pub fn col(&self, j: usize) -> Vec<K> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn row(&self, i: usize) -> Vec<K> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(j, i, self.get(i, j).clone());
            }
        }
        m
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero_elt())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.plus(b)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.minus(b)).collect(),
        }
    }

    pub fn scale(&self, k: &K) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a.times(k)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut m = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero_elt() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero_elt() {
                        continue;
                    }
                    let v = m.get(i, j).plus(&a.times(b));
                    m.set(i, j, v);
                }
            }
        }
        m
    }

    pub fn apply(&self, v: &[K]) -> Vec<K> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = K::zero_elt();
                for (j, x) in v.iter().enumerate() {
                    let a = self.get(i, j);
                    if !a.is_zero_elt() && !x.is_zero_elt() {
                        acc = acc.plus(&a.times(x));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn pow(&self, n: usize) -> Self {
        let mut acc = Self::identity(self.rows);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Commutator `AB - BA`.
    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    /// Entrywise map into another coefficient ring.
    pub fn map<L: Coeff>(&self, f: impl Fn(&K) -> L) -> Matrix<L> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    /// Smallest `k` with `self^k = 0`, if at most `self.rows`.
    pub fn nilpotency_index(&self) -> Option<usize> {
        let mut p = Self::identity(self.rows);
        for k in 0..=self.rows {
            if p.is_zero() {
                return Some(k);
            }
            p = p.mul(self);
        }
        None
    }

    /// `exp(N)` for nilpotent `N`, as a finite sum.
    pub fn exp_nilpotent(&self) -> Result<Self, LinalgError> {
        let k = self.nilpotency_index().ok_or(LinalgError::NotNilpotent)?;
        let mut acc = Self::identity(self.rows);
        let mut term = Self::identity(self.rows);
        for j in 1..k {
            term = term
                .mul(self)
                .scale(&K::from_scalar(&(Scalar::one() / int(j as i64))));
            acc = acc.add(&term);
        }
        Ok(acc)
    }
}

impl Matrix<Scalar> {
    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, r * m.cols + j);
                }
            }
            let inv = Scalar::one() / m.get(r, c).clone();
            for j in 0..m.cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i != r && !m.get(i, c).is_zero() {
                    let f = m.get(i, c).clone();
                    for j in 0..m.cols {
                        let v = m.get(i, j) - &f * m.get(r, j);
                        m.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the null space.
    pub fn kernel(&self) -> Vec<Vec<Scalar>> {
        let (m, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Scalar::zero(); self.cols];
                v[f] = Scalar::one();
                for (r, &p) in pivots.iter().enumerate() {
                    v[p] = -m.get(r, f).clone();
                }
                v
            })
            .collect()
    }

    /// One solution of `self * x = b`.
    pub fn solve(&self, b: &[Scalar]) -> Result<Vec<Scalar>, LinalgError> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Matrix::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let (m, pivots) = aug.rref();
        if pivots.contains(&self.cols) {
            return Err(LinalgError::Inconsistent);
        }
        let mut x = vec![Scalar::zero(); self.cols];
        for (r, &p) in pivots.iter().enumerate() {
            x[p] = m.get(r, self.cols).clone();
        }
        Ok(x)
    }

    pub fn inverse(&self) -> Result<Self, LinalgError> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, Scalar::one());
        }
        let (m, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(LinalgError::Singular);
        }
        let mut inv = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, m.get(i, n + j).clone());
            }
        }
        Ok(inv)
    }

    /// Characteristic polynomial `det(t I - A)` by Faddeev–LeVerrier.
    pub fn charpoly(&self) -> QPoly {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut coeffs = vec![Scalar::zero(); n + 1];
        coeffs[n] = Scalar::one();
        let mut m = Matrix::<Scalar>::zeros(n, n);
        let ident = Matrix::<Scalar>::identity(n);
        for k in 1..=n {
            m = self.mul(&m).add(&ident.scale(&coeffs[n - k + 1]));
            let am = self.mul(&m);
            let tr: Scalar = (0..n).map(|i| am.get(i, i).clone()).sum();
            coeffs[n - k] = -tr / int(k as i64);
        }
        QPoly::new(coeffs)
    }

    /// Evaluate a polynomial at this matrix.
    pub fn eval_poly(&self, p: &QPoly) -> Self {
        let n = self.rows;
        let mut acc = Matrix::<Scalar>::zeros(n, n);
        for c in p.coeffs().iter().rev() {
            acc = acc.mul(self).add(&Matrix::identity(n).scale(c));
        }
        acc
    }

    /// Rational spectrum with algebraic multiplicities, or an error when the
    /// characteristic polynomial does not split over Q.
    pub fn rational_spectrum(&self) -> Result<Vec<(Scalar, usize)>, LinalgError> {
        let (roots, rest) = self.charpoly().rational_roots();
        if rest.degree().unwrap_or(0) > 0 {
            return Err(LinalgError::NeedsFieldExtension);
        }
        Ok(roots)
    }

    /// Projections onto the generalized eigenspaces, paired with eigenvalues.
    pub fn spectral_projectors(&self) -> Result<Vec<(Scalar, Matrix<Scalar>)>, LinalgError> {
        let spectrum = self.rational_spectrum()?;
        let chi = self.charpoly();
        let mut out = Vec::new();
        for (lam, mult) in &spectrum {
            let q = QPoly::linear_root(lam).pow(*mult);
            let r = chi.div_rem(&q).0;
            let inv = r.inverse_mod(&q).expect("coprime factors");
            out.push((lam.clone(), self.eval_poly(&r.mul(&inv))));
        }
        Ok(out)
    }

    /// Additive Jordan–Chevalley decomposition `A = S + N` with `S`
    /// diagonalizable over Q, `N` nilpotent and `[S, N] = 0`.
    pub fn jordan_chevalley(&self) -> Result<(Self, Self), LinalgError> {
        let n = self.rows;
        let mut s = Matrix::<Scalar>::zeros(n, n);
        for (lam, p) in self.spectral_projectors()? {
            s = s.add(&p.scale(&lam));
        }
        let nil = self.sub(&s);
        Ok((s, nil))
    }

    /// `log U` for unipotent `U`, using `Σ_{j≥1} (-1)^{j+1} (U-1)^j / j`.
    pub fn log_unipotent(&self) -> Result<Self, LinalgError> {
        let n = self.rows;
        let e = self.sub(&Matrix::identity(n));
        let k = e.nilpotency_index().ok_or(LinalgError::NotUnipotent)?;
        let mut acc = Matrix::<Scalar>::zeros(n, n);
        let mut pw = Matrix::<Scalar>::identity(n);
        for j in 1..k {
            pw = pw.mul(&e);
            let sign = if j % 2 == 1 { int(1) } else { int(-1) };
            acc = acc.add(&pw.scale(&(sign / int(j as i64))));
        }
        Ok(acc)
    }
}
