use std::collections::HashMap;
use std::ops::Range;
use std::sync::Arc;

use dashmap::DashMap;
use exact_kernel::{binomial, int, Coeff, LogSeries, Matrix, Scalar};
use lie_core::{LieAlgebra, LieElt};
use num_traits::{One, Zero};

use crate::{AffineError, Monomial, PBWVector, TopModule};

/// Cache key for a single mode action: `(generator, mode, monomial)`.
pub type ModeKey = (usize, i64, Monomial);

/// `Ind(L(λ))` at level `ℓ`, with the PBW basis enumerated up to a depth
/// cutoff. Mode actions themselves are exact and unbounded; the cutoff
/// only limits the enumerated basis.
pub struct InducedModule {
    alg: Arc<LieAlgebra>,
    level: Scalar,
    top: TopModule,
    top_weight: Scalar,
    cutoff: i64,
    basis: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    pieces: Vec<Range<usize>>,
    /// Nonzero entries of the inverse Gram matrix.
    pairs: Vec<(usize, usize, Scalar)>,
    sugawara_scale: Scalar,
    gen_names: Vec<String>,
    mode_cache: DashMap<ModeKey, PBWVector<Scalar>>,
    sugawara_cache: DashMap<(i64, Monomial), PBWVector<Scalar>>,
    vertex_cache: DashMap<(Monomial, i64, Monomial), PBWVector<Scalar>>,
}

impl std::fmt::Debug for InducedModule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("InducedModule")
            .field("algebra", &self.alg.label())
            .field("level", &self.level)
            .field("top", &self.top.label)
            .field("cutoff", &self.cutoff)
            .finish()
    }
}

impl InducedModule {
    /// Build `Ind(top)` at level `level`, enumerating the basis up to
    /// depth `⌊cutoff⌋` above the top space.
    pub fn build(
        alg: Arc<LieAlgebra>,
        level: Scalar,
        top: TopModule,
        cutoff: &Scalar,
    ) -> Result<Self, AffineError> {
        let hv = alg.dual_coxeter().clone();
        if level == -hv.clone() {
            return Err(AffineError::CriticalLevel(level.to_string()));
        }
        let sugawara_scale = Scalar::one() / (int(2) * (&level + &hv));
        let top_weight = top.casimir(&alg)? * &sugawara_scale;
        let cutoff = cutoff.floor().to_integer().try_into().unwrap_or(i64::MAX).max(0);
        let d = alg.dim();
        let ginv = alg.inverse_form();
        let mut pairs = Vec::new();
        for i in 0..d {
            for j in 0..d {
                if !ginv.get(i, j).is_zero() {
                    pairs.push((i, j, ginv.get(i, j).clone()));
                }
            }
        }
        let mut basis = Vec::new();
        let mut pieces = Vec::new();
        for depth in 0..=cutoff {
            let start = basis.len();
            let mut factors = Vec::new();
            enumerate(depth, (-1, d - 1), d, &mut factors, &mut |modes| {
                for t in 0..top.dim() {
                    basis.push(Monomial { modes: modes.to_vec(), top: t });
                }
            });
            basis[start..].sort();
            pieces.push(start..basis.len());
        }
        let index = basis.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let gen_names = alg.names().to_vec();
        Ok(InducedModule {
            alg,
            level,
            top,
            top_weight,
            cutoff,
            basis,
            index,
            pieces,
            pairs,
            sugawara_scale,
            gen_names,
            mode_cache: DashMap::new(),
            sugawara_cache: DashMap::new(),
            vertex_cache: DashMap::new(),
        })
    }

    /// The vacuum module `M(ℓ, 0)`.
    pub fn vacuum(alg: Arc<LieAlgebra>, level: Scalar, cutoff: &Scalar) -> Result<Self, AffineError> {
        let top = TopModule::trivial(&alg);
        Self::build(alg, level, top, cutoff)
    }

    pub fn algebra(&self) -> &Arc<LieAlgebra> {
        &self.alg
    }

    pub fn level(&self) -> &Scalar {
        &self.level
    }

    pub fn top(&self) -> &TopModule {
        &self.top
    }

    /// `L(0)` eigenvalue on the top space.
    pub fn top_weight(&self) -> &Scalar {
        &self.top_weight
    }

    /// Depth cutoff of the enumerated basis.
    pub fn cutoff(&self) -> i64 {
        self.cutoff
    }

    pub fn basis(&self) -> &[Monomial] {
        &self.basis
    }

    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// Basis monomials of the given depth.
    pub fn piece(&self, depth: i64) -> &[Monomial] {
        match usize::try_from(depth).ok().and_then(|d| self.pieces.get(d)) {
            Some(r) => &self.basis[r.clone()],
            None => &[],
        }
    }

    /// Basis monomials up to the given depth.
    pub fn basis_to(&self, depth: i64) -> &[Monomial] {
        let end = match usize::try_from(depth) {
            Ok(d) => self.pieces.get(d).map_or(self.basis.len(), |r| r.end),
            Err(_) => 0,
        };
        &self.basis[..end]
    }

    /// Dimensions of the graded pieces, by depth.
    pub fn graded_dims(&self) -> Vec<usize> {
        self.pieces.iter().map(|r| r.len()).collect()
    }

    /// Conformal weight of a monomial.
    pub fn weight(&self, m: &Monomial) -> Scalar {
        &self.top_weight + int(m.depth())
    }

    pub fn gen_names(&self) -> &[String] {
        &self.gen_names
    }

    pub fn render<K: Coeff>(&self, v: &PBWVector<K>) -> String {
        v.render_with(&self.gen_names, &self.top.names)
    }

    pub fn render_monomial(&self, m: &Monomial) -> String {
        m.render(&self.gen_names, &self.top.names)
    }

    /// `c = ℓ dim g / (ℓ + h∨)`.
    pub fn central_charge(&self) -> Scalar {
        &self.level * int(self.alg.dim() as i64) / (&self.level + self.alg.dual_coxeter())
    }

    /// `b(-1)1` for a basis generator, as a vacuum-module vector.
    pub fn generator_state(&self, i: usize) -> PBWVector<Scalar> {
        PBWVector::from_monomial(Monomial::from_factors(vec![(-1, i)], 0))
    }

    /// `a(-1)1` for an algebra element.
    pub fn current_state(&self, a: &LieElt) -> PBWVector<Scalar> {
        let mut v = PBWVector::zero();
        for (i, c) in a.support() {
            v.add_term(Monomial::from_factors(vec![(-1, i)], 0), c.clone());
        }
        v
    }

    /// The Sugawara conformal vector `(1/2(ℓ+h∨)) Σ G^{ij} b_i(-1) b_j(-1) 1`,
    /// normal ordered. Only negative modes occur, so the top space is never
    /// touched and the result is read as a vacuum-module vector.
    pub fn omega(&self) -> PBWVector<Scalar> {
        let mut v = PBWVector::zero();
        for (i, j, g) in &self.pairs {
            let bj = self.generator_state(*j);
            v.axpy(&(g * &self.sugawara_scale), &self.apply_mode(*i, -1, &bj));
        }
        v
    }

    /// `b_i(m) · v`.
    pub fn apply_mode<K: Coeff>(&self, i: usize, m: i64, v: &PBWVector<K>) -> PBWVector<K> {
        let mut out = PBWVector::zero();
        for (mono, c) in v.iter() {
            let r = self.act(i, m, mono);
            for (mm, d) in r.iter() {
                out.add_term(mm.clone(), K::from_scalar(d).times(c));
            }
        }
        out
    }

    /// `a(m) · v` for an algebra element `a`.
    pub fn apply_elt<K: Coeff>(&self, a: &LieElt, m: i64, v: &PBWVector<K>) -> PBWVector<K> {
        let mut out = PBWVector::zero();
        for (i, c) in a.support() {
            out.axpy(&K::from_scalar(c), &self.apply_mode(i, m, v));
        }
        out
    }

    fn act(&self, i: usize, m: i64, mono: &Monomial) -> PBWVector<Scalar> {
        let key = (i, m, mono.clone());
        if let Some(r) = self.mode_cache.get(&key) {
            return r.clone();
        }
        let res = self.act_uncached(i, m, mono);
        self.mode_cache.insert(key, res.clone());
        res
    }

    fn act_uncached(&self, i: usize, m: i64, mono: &Monomial) -> PBWVector<Scalar> {
        let Some(&(m1, j)) = mono.modes.first() else {
            let mut out = PBWVector::zero();
            match m.cmp(&0) {
                std::cmp::Ordering::Greater => {}
                std::cmp::Ordering::Equal => {
                    let rho = &self.top.matrices[i];
                    for t in 0..self.top.dim() {
                        out.add_term(Monomial::top(t), rho.get(t, mono.top).clone());
                    }
                }
                std::cmp::Ordering::Less => {
                    out.add_term(Monomial { modes: vec![(m, i)], top: mono.top }, Scalar::one());
                }
            }
            return out;
        };
        if m < 0 && (m, i) >= (m1, j) {
            let mut modes = Vec::with_capacity(mono.modes.len() + 1);
            modes.push((m, i));
            modes.extend_from_slice(&mono.modes);
            return PBWVector::from_monomial(Monomial { modes, top: mono.top });
        }
        // a(m) b(m1) rest = b(m1) a(m) rest + [a,b](m+m1) rest + m (a,b) ℓ δ rest
        let rest = mono.tail();
        let inner = self.act(i, m, &rest);
        let mut out = self.apply_mode(j, m1, &inner);
        let rest_v = PBWVector::from_monomial(rest);
        for (k, c) in self.alg.bracket_basis(i, j).support() {
            out.axpy(c, &self.apply_mode(k, m + m1, &rest_v));
        }
        if m + m1 == 0 {
            let c = int(m) * self.alg.form_basis(i, j) * &self.level;
            out.axpy(&c, &rest_v);
        }
        out
    }

    /// Sugawara `L(n) · v`.
    pub fn sugawara<K: Coeff>(&self, n: i64, v: &PBWVector<K>) -> PBWVector<K> {
        let mut out = PBWVector::zero();
        for (mono, c) in v.iter() {
            let r = self.sugawara_mono(n, mono);
            for (mm, d) in r.iter() {
                out.add_term(mm.clone(), K::from_scalar(d).times(c));
            }
        }
        out
    }

    fn sugawara_mono(&self, n: i64, mono: &Monomial) -> PBWVector<Scalar> {
        let key = (n, mono.clone());
        if let Some(r) = self.sugawara_cache.get(&key) {
            return r.clone();
        }
        let d = mono.depth();
        let w = PBWVector::from_monomial(mono.clone());
        let mut out = PBWVector::zero();
        for (i, j, g) in &self.pairs {
            for k in (n - d)..=d {
                // :b_i(k) b_j(n-k): puts the annihilation mode on the right.
                let t = if k < 0 {
                    self.apply_mode(*i, k, &self.apply_mode(*j, n - k, &w))
                } else {
                    self.apply_mode(*j, n - k, &self.apply_mode(*i, k, &w))
                };
                out.axpy(g, &t);
            }
        }
        let out = {
            let mut s = PBWVector::zero();
            s.axpy(&self.sugawara_scale, &out);
            s
        };
        self.sugawara_cache.insert(key, out.clone());
        out
    }

    /// `Y_k(v) w` for `v` in the vacuum module `M(ℓ, 0)` and `w` here, so
    /// that `Y(v, x) w = Σ_k Y_k(v) w x^{-k-1}`.
    pub fn vertex_mode<K: Coeff>(&self, v: &PBWVector<K>, k: i64, w: &PBWVector<K>) -> PBWVector<K> {
        let mut out = PBWVector::zero();
        for (vm, a) in v.iter() {
            for (wm, b) in w.iter() {
                let ab = a.times(b);
                for (mm, d) in self.vertex_mono(vm, k, wm).iter() {
                    out.add_term(mm.clone(), K::from_scalar(d).times(&ab));
                }
            }
        }
        out
    }

    /// Largest `k` with `Y_k(v) w` possibly nonzero.
    pub fn max_vertex_mode<K: Coeff>(&self, v: &PBWVector<K>, w: &PBWVector<K>) -> Option<i64> {
        Some(v.max_depth()? + w.max_depth()? - 1)
    }

    fn vertex_mono(&self, vm: &Monomial, k: i64, wm: &Monomial) -> PBWVector<Scalar> {
        let Some(&(mm, a)) = vm.modes.first() else {
            return if k == -1 {
                PBWVector::from_monomial(wm.clone())
            } else {
                PBWVector::zero()
            };
        };
        let key = (vm.clone(), k, wm.clone());
        if let Some(r) = self.vertex_cache.get(&key) {
            return r.clone();
        }
        // Borcherds recursion for v = a(-n-1) v':
        // Y_k(v) = Σ_{i≥0} C(n+i,i) a(-n-1-i) Y_{k+i}(v')
        //        + (-1)^n Σ_{j≥0} C(n+j,j) Y_{k-n-1-j}(v') a(j)
        let n = -mm - 1;
        let rest = vm.tail();
        let r = rest.depth();
        let d = wm.depth();
        let w = PBWVector::from_monomial(wm.clone());
        let mut out = PBWVector::zero();
        let mut i = 0;
        while k + i <= r + d - 1 {
            let y = self.vertex_mono(&rest, k + i, wm);
            if !y.is_zero() {
                let c = binomial(&int(n + i), i as u32);
                out.axpy(&c, &self.apply_mode(a, -n - 1 - i, &y));
            }
            i += 1;
        }
        let sign = if n % 2 == 0 { Scalar::one() } else { -Scalar::one() };
        for j in 0..=d {
            let aw = self.apply_mode(a, j, &w);
            if aw.is_zero() {
                continue;
            }
            let c = &sign * binomial(&int(n + j), j as u32);
            let q = k - n - 1 - j;
            let mut y = PBWVector::zero();
            for (m2, e) in aw.iter() {
                y.axpy(e, &self.vertex_mono(&rest, q, m2));
            }
            out.axpy(&c, &y);
        }
        self.vertex_cache.insert(key, out.clone());
        out
    }

    /// `Y(v, x) w` keeping exponents up to `ceiling`. Lower truncation
    /// makes the series finite below; the ceiling bounds it above.
    pub fn vertex_series<K: Coeff>(
        &self,
        v: &PBWVector<K>,
        w: &PBWVector<K>,
        ceiling: &Scalar,
    ) -> LogSeries<PBWVector<K>> {
        let mut s = LogSeries::with_window(1, None, Some(ceiling.clone()));
        let Some(kmax) = self.max_vertex_mode(v, w) else {
            return s;
        };
        let kmin = (-ceiling - Scalar::one()).ceil().to_integer();
        let kmin: i64 = kmin.try_into().expect("ceiling in range");
        for k in kmin..=kmax {
            let y = self.vertex_mode(v, k, w);
            s.add_term::<K>(int(-k - 1), 0, y).expect("integral exponent");
        }
        s
    }

    /// Lift an algebra map `g` (column `j` is `g b_j`) factorwise:
    /// `g(b_1(m_1) ... b_k(m_k) v) = (g b_1)(m_1) ... (g b_k)(m_k) v`. The top
    /// space must be trivial, as for the vacuum module.
    pub fn lift_map<K: Coeff>(&self, g: &Matrix<K>, v: &PBWVector<K>) -> PBWVector<K> {
        assert!(
            self.top.dim() == 1 && self.top.matrices.iter().all(Matrix::is_zero),
            "factorwise lift needs a trivial top space"
        );
        let mut out = PBWVector::zero();
        for (mono, c) in v.iter() {
            let mut acc = PBWVector::term(Monomial::top(mono.top), c.clone());
            for &(m, b) in mono.modes.iter().rev() {
                let mut next = PBWVector::zero();
                for i in 0..self.alg.dim() {
                    let gi = g.get(i, b);
                    if !gi.is_zero_elt() {
                        next.axpy(gi, &self.apply_mode(i, m, &acc));
                    }
                }
                acc = next;
            }
            out.axpy(&K::one_elt(), &acc);
        }
        out
    }

    /// Coordinates of a vector supported on the depth-`depth` piece.
    pub fn coords(&self, v: &PBWVector<Scalar>, depth: i64) -> Vec<Scalar> {
        let piece = self.piece(depth);
        let start = self.pieces[depth as usize].start;
        let mut out = vec![Scalar::zero(); piece.len()];
        for (m, c) in v.iter() {
            let idx = self
                .index_of(m)
                .filter(|&i| m.depth() == depth && i >= start)
                .unwrap_or_else(|| panic!("{} is not in piece {depth}", self.render_monomial(m)));
            out[idx - start] = c.clone();
        }
        out
    }

    pub fn from_coords(&self, c: &[Scalar], depth: i64) -> PBWVector<Scalar> {
        let mut v = PBWVector::zero();
        for (m, x) in self.piece(depth).iter().zip(c) {
            v.add_term(m.clone(), x.clone());
        }
        v
    }

    /// Matrix of a depth-preserving operator on one graded piece.
    pub fn piece_matrix(
        &self,
        depth: i64,
        op: impl Fn(&PBWVector<Scalar>) -> PBWVector<Scalar>,
    ) -> Matrix<Scalar> {
        let cols = self
            .piece(depth)
            .iter()
            .map(|m| self.coords(&op(&PBWVector::from_monomial(m.clone())), depth))
            .collect();
        Matrix::from_cols(cols)
    }

    /// Entries held by the memo caches.
    pub fn cache_sizes(&self) -> (usize, usize, usize) {
        (self.mode_cache.len(), self.sugawara_cache.len(), self.vertex_cache.len())
    }
}

/// Multisets of factors `(mode, gen)` summing to `depth`, each at most
/// `bound` in the normal order, emitted in normal order.
fn enumerate(
    depth: i64,
    bound: (i64, usize),
    ngen: usize,
    acc: &mut Vec<(i64, usize)>,
    emit: &mut dyn FnMut(&[(i64, usize)]),
) {
    if depth == 0 {
        emit(acc);
        return;
    }
    for m in (-depth..=-1).rev() {
        for g in (0..ngen).rev() {
            if (m, g) > bound {
                continue;
            }
            acc.push((m, g));
            enumerate(depth + m, (m, g), ngen, acc, emit);
            acc.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use lie_core::build_simple_lie;

    fn sl2(level: i64, cutoff: i64) -> InducedModule {
        let g = Arc::new(build_simple_lie("A", 1).unwrap());
        InducedModule::vacuum(g, int(level), &int(cutoff)).unwrap()
    }

    #[test]
    fn graded_dims_sl2() {
        let m = sl2(2, 2);
        assert_eq!(m.graded_dims(), vec![1, 3, 9]);
        let g = Arc::new(build_simple_lie("A", 1).unwrap());
        assert_eq!(
            InducedModule::vacuum(g, int(-2), &int(2)).unwrap_err(),
            AffineError::CriticalLevel("-2".into())
        );
    }

    #[test]
    fn mode_examples() {
        let m = sl2(2, 3);
        let (e, h, f) = (0, 1, 2);
        let fv = m.generator_state(f);
        assert_eq!(m.apply_mode(e, 1, &fv), PBWVector::vacuum().scaled_by(&int(2)));
        let vac = PBWVector::<Scalar>::vacuum();
        for g in 0..3 {
            for k in 0..3 {
                assert!(m.apply_mode(g, k, &vac).is_zero());
            }
        }
        assert_eq!(m.apply_mode(h, -1, &vac), m.generator_state(h));
    }

    #[test]
    fn sugawara_examples() {
        let m = sl2(2, 3);
        let vac = PBWVector::<Scalar>::vacuum();
        assert!(m.sugawara(0, &vac).is_zero());
        assert!(m.sugawara(-1, &vac).is_zero());
        for g in 0..3 {
            let v = m.generator_state(g);
            assert_eq!(m.sugawara(0, &v), v);
        }
        assert_eq!(m.central_charge(), exact_kernel::rat(3, 2));
    }

    #[test]
    fn vertex_examples() {
        let m = sl2(2, 3);
        let vac = PBWVector::<Scalar>::vacuum();
        for w in m.basis_to(2) {
            let w = PBWVector::from_monomial(w.clone());
            for k in -3..3 {
                let expect = if k == -1 { w.clone() } else { PBWVector::zero() };
                assert_eq!(m.vertex_mode(&vac, k, &w), expect);
                for g in 0..3 {
                    assert_eq!(m.vertex_mode(&m.generator_state(g), k, &w), m.apply_mode(g, k, &w));
                }
                assert_eq!(m.vertex_mode(&m.omega(), k + 1, &w), m.sugawara(k, &w));
            }
        }
    }
}

#[cfg(test)]
impl PBWVector<Scalar> {
    fn scaled_by(&self, c: &Scalar) -> Self {
        let mut out = PBWVector::zero();
        out.axpy(c, self);
        out
    }
}
