use std::collections::BTreeMap;
use std::sync::Arc;

use affine_fock::{InducedModule, Monomial, PBWVector};
use exact_kernel::{denominator_lcm, factorial, int, Coeff, LinalgError, LogSeries, Matrix, QPoly, Scalar};
use lie_core::LieElt;
use num_traits::{One, Zero};

use crate::DeltaError;

/// Which sign convention to use for `Δ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DeltaSign {
    /// `x^{-Y_0(u)} exp(-∫_0^{-x} Y^{≤-2}(u, y))`.
    Corrected,
    /// `x^{Y_0(u)} exp(∫_0^{x} Y^{≤-2}(u, y))`, kept as a regression oracle.
    Flipped,
}

/// One generalized eigencomponent of a vector under `Y_0(u)`: the
/// eigenvalue and `N^k v_λ` for `k = 0, 1, ...` until it vanishes.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenPiece {
    pub lambda: Scalar,
    pub nil_powers: Vec<PBWVector<Scalar>>,
}

/// `Δ^{(u)}(x)` for `u = a(-1)1` in the vacuum module.
#[derive(Clone, Debug)]
pub struct DeltaOperator {
    vacuum: Arc<InducedModule>,
    a: LieElt,
    u: PBWVector<Scalar>,
    sign: DeltaSign,
    denom: u64,
}

impl DeltaOperator {
    /// Build `Δ^{(u)}` on the vacuum module. `u` must lie in `V_(1)` and
    /// satisfy `L(1)u = 0`; `ad` of the underlying element must have a
    /// rational spectrum.
    pub fn new(vacuum: Arc<InducedModule>, u: &PBWVector<Scalar>) -> Result<Self, DeltaError> {
        Self::with_sign(vacuum, u, DeltaSign::Corrected)
    }

    pub fn with_sign(
        vacuum: Arc<InducedModule>,
        u: &PBWVector<Scalar>,
        sign: DeltaSign,
    ) -> Result<Self, DeltaError> {
        if vacuum.top().dim() != 1 || !vacuum.top().matrices.iter().all(Matrix::is_zero) {
            return Err(DeltaError::Unsupported("Δ acts on the vacuum module".into()));
        }
        let alg = vacuum.algebra().clone();
        let mut a = LieElt::zero(alg.dim());
        for (m, c) in u.iter() {
            match m.modes.as_slice() {
                [(-1, g)] => a.0[*g] += c,
                _ => {
                    return Err(DeltaError::Unsupported(format!(
                        "u must lie in V_(1); found {}",
                        vacuum.render_monomial(m)
                    )))
                }
            }
        }
        if !vacuum.sugawara(1, u).is_zero() {
            return Err(DeltaError::NotQuasiPrimary);
        }
        let spectrum = alg.ad(&a).rational_spectrum().map_err(|e| match e {
            LinalgError::NeedsFieldExtension => DeltaError::NeedsFieldExtension,
            other => DeltaError::Unsupported(other.to_string()),
        })?;
        let denom = denominator_lcm(spectrum.iter().map(|(l, _)| l));
        Ok(DeltaOperator {
            vacuum,
            a,
            u: u.clone(),
            sign,
            denom,
        })
    }

    /// `Δ^{(a(-1)1)}` for an algebra element `a`.
    pub fn for_element(vacuum: Arc<InducedModule>, a: &LieElt) -> Result<Self, DeltaError> {
        let u = vacuum.current_state(a);
        Self::new(vacuum, &u)
    }

    pub fn vacuum(&self) -> &Arc<InducedModule> {
        &self.vacuum
    }

    pub fn element(&self) -> &LieElt {
        &self.a
    }

    pub fn u(&self) -> &PBWVector<Scalar> {
        &self.u
    }

    pub fn sign(&self) -> DeltaSign {
        self.sign
    }

    /// Every exponent of `Δ(x)v` lies in `Z/D`.
    pub fn denom(&self) -> u64 {
        self.denom
    }

    pub fn is_identity(&self) -> bool {
        self.a.is_zero()
    }

    /// `Y_k(u) v = a(k) v`.
    pub fn u_mode(&self, k: i64, v: &PBWVector<Scalar>) -> PBWVector<Scalar> {
        self.vacuum.apply_elt(&self.a, k, v)
    }

    /// `κ` with `Y_1(u) u = κ 1`, that is `(a, a) ℓ`.
    pub fn kappa(&self) -> Scalar {
        let y = self.u_mode(1, &self.u);
        let k = y.coeff(&Monomial::vacuum());
        debug_assert_eq!(y, PBWVector::term(Monomial::vacuum(), k.clone()));
        k
    }

    /// Generalized eigencomponents of `v` under `Y_0(u)`, through the
    /// minimal polynomial of `Y_0(u)` on the cyclic subspace of `v`.
    pub fn eigen_split(&self, v: &PBWVector<Scalar>) -> Result<Vec<EigenPiece>, DeltaError> {
        eigen_split(v, |z| self.u_mode(0, z))
    }

    /// The exponential factor applied to `v`: a finite series in `x^{-1}`.
    pub fn exp_part(&self, v: &PBWVector<Scalar>) -> Result<LogSeries<PBWVector<Scalar>>, DeltaError> {
        let mut acc = LogSeries::zero(1);
        acc.add_term::<Scalar>(int(0), 0, v.clone())?;
        let mut term = acc.clone();
        let mut j = 1u32;
        while !term.is_empty() {
            let mut next = LogSeries::zero(1);
            for (e, _, z) in term.iter() {
                let xz = self.exponent_on(z)?.shift(e, 0)?;
                next = next.combine::<Scalar>(&xz, exact_kernel::CombineMode::Add)?;
            }
            term = next.scale(&(Scalar::one() / int(j as i64)));
            acc = acc.combine::<Scalar>(&term, exact_kernel::CombineMode::Add)?;
            j += 1;
        }
        Ok(acc)
    }

    /// The exponent operator applied to `z`: `-∫_0^{-x} Y^{≤-2}(u, y) z` in
    /// the corrected convention, `∫_0^x Y^{≤-2}(u, y) z` in the flipped one.
    fn exponent_on(&self, z: &PBWVector<Scalar>) -> Result<LogSeries<PBWVector<Scalar>>, DeltaError> {
        let mut f = LogSeries::zero(1);
        let depth = z.max_depth().unwrap_or(0);
        for k in 1..=depth {
            f.add_term::<Scalar>(int(-k - 1), 0, self.u_mode(k, z))?;
        }
        let integral = f.formal_integral_0_to_x::<Scalar>()?;
        Ok(match self.sign {
            DeltaSign::Corrected => integral.negate_variable::<Scalar>()?.scale(&-Scalar::one()),
            DeltaSign::Flipped => integral,
        })
    }

    /// `Δ(x) v`, a finite series.
    pub fn apply(&self, v: &PBWVector<Scalar>) -> Result<LogSeries<PBWVector<Scalar>>, DeltaError> {
        let mut out = LogSeries::zero(self.denom);
        if self.is_identity() {
            out.add_term::<Scalar>(int(0), 0, v.clone())?;
            return Ok(out);
        }
        let s = match self.sign {
            DeltaSign::Corrected => -Scalar::one(),
            DeltaSign::Flipped => Scalar::one(),
        };
        for (e, _, z) in self.exp_part(v)?.iter() {
            for piece in self.eigen_split(z)? {
                // x^{sA} = x^{sλ} Σ_k (s log x)^k N^k / k!
                for (k, nk) in piece.nil_powers.iter().enumerate() {
                    let c = s.clone().pow(k as i32) / factorial(k as u32);
                    out.add_term::<Scalar>(e + &s * &piece.lambda, k as u32, nk.scaled_by(&c))?;
                }
            }
        }
        Ok(out)
    }

    /// `Δ(x) v` for `v` with coefficients in any ring containing Q, by
    /// linearity over monomials.
    pub fn apply_linear<K: Coeff>(&self, v: &PBWVector<K>) -> Result<LogSeries<PBWVector<K>>, DeltaError> {
        let mut out = LogSeries::zero(self.denom);
        for (m, c) in v.iter() {
            for (e, k, z) in self.apply(&PBWVector::from_monomial(m.clone()))?.iter() {
                out.add_term::<K>(e.clone(), k, z.map_coeffs(|x| K::from_scalar(x).times(c)))?;
            }
        }
        Ok(out)
    }
}

trait ScaledBy {
    fn scaled_by(&self, c: &Scalar) -> Self;
}

impl ScaledBy for PBWVector<Scalar> {
    fn scaled_by(&self, c: &Scalar) -> Self {
        let mut out = PBWVector::zero();
        out.axpy(c, self);
        out
    }
}

/// Generalized eigencomponents of `v` under a linear operator `op`.
pub(crate) fn eigen_split(
    v: &PBWVector<Scalar>,
    op: impl Fn(&PBWVector<Scalar>) -> PBWVector<Scalar>,
) -> Result<Vec<EigenPiece>, DeltaError> {
    Ok(eigen_split_capped(v, op, usize::MAX)?.expect("uncapped split terminates"))
}

/// As the generalized eigensplitting of `v` under `op`, giving up with
/// `None` when the cyclic subspace of `v` has dimension above `cap`.
pub fn eigen_split_capped(
    v: &PBWVector<Scalar>,
    op: impl Fn(&PBWVector<Scalar>) -> PBWVector<Scalar>,
    cap: usize,
) -> Result<Option<Vec<EigenPiece>>, DeltaError> {
    if v.is_zero() {
        return Ok(Some(Vec::new()));
    }
    // Krylov sequence until the next vector is dependent.
    let mut krylov = vec![v.clone()];
    let minpoly = loop {
        let next = op(krylov.last().unwrap());
        if let Some(c) = solve_in_span(&krylov, &next) {
            let mut coeffs: Vec<Scalar> = c.into_iter().map(|x| -x).collect();
            coeffs.push(Scalar::one());
            break QPoly::new(coeffs);
        }
        if krylov.len() >= cap {
            return Ok(None);
        }
        krylov.push(next);
    };
    let (roots, rest) = minpoly.rational_roots();
    if rest.degree().unwrap_or(0) > 0 {
        return Err(DeltaError::NeedsFieldExtension);
    }
    let eval = |p: &QPoly| -> PBWVector<Scalar> {
        // Horner on the vector.
        let mut acc = PBWVector::zero();
        for c in p.coeffs().iter().rev() {
            acc = op(&acc);
            acc.axpy(c, v);
        }
        acc
    };
    let mut pieces = Vec::new();
    for (lam, mult) in roots {
        let q = QPoly::linear_root(&lam).pow(mult);
        let r = minpoly.div_rem(&q).0;
        let idem = if r.degree() == Some(0) {
            QPoly::one()
        } else {
            r.mul(&r.inverse_mod(&q).expect("coprime factors")).rem(&minpoly)
        };
        let mut cur = eval(&idem);
        let mut nil_powers = Vec::new();
        while !cur.is_zero() {
            nil_powers.push(cur.clone());
            let mut n = op(&cur);
            n.axpy(&-lam.clone(), &cur);
            cur = n;
            assert!(nil_powers.len() <= mult, "nilpotent part exceeds multiplicity");
        }
        pieces.push(EigenPiece { lambda: lam, nil_powers });
    }
    Ok(Some(pieces))
}

/// Coefficients `c` with `target = Σ c_j vs[j]`, if any.
fn solve_in_span(vs: &[PBWVector<Scalar>], target: &PBWVector<Scalar>) -> Option<Vec<Scalar>> {
    let mut index: BTreeMap<&Monomial, usize> = BTreeMap::new();
    for v in vs.iter().chain(std::iter::once(target)) {
        for (m, _) in v.iter() {
            let n = index.len();
            index.entry(m).or_insert(n);
        }
    }
    let mut a = Matrix::<Scalar>::zeros(index.len(), vs.len());
    for (j, v) in vs.iter().enumerate() {
        for (m, c) in v.iter() {
            a.set(index[m], j, c.clone());
        }
    }
    let mut b = vec![Scalar::zero(); index.len()];
    for (m, c) in target.iter() {
        b[index[m]] = c.clone();
    }
    a.solve(&b).ok()
}
