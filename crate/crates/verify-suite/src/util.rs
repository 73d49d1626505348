use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, Mutex};

use affine_fock::{InducedModule, Monomial, PBWVector};
use exact_kernel::{Coeff, Linear, LogSeries, Scalar};
use num_traits::{One, Zero};
use twist_construct::{TwistError, TwistedModule};

use crate::report::Witness;

pub(crate) type Series = LogSeries<PBWVector<Scalar>>;

/// The first `(e, k)` where two series differ, with both coefficients
/// rendered. Exponent windows and denominators are ignored.
pub(crate) fn first_diff<K: Coeff>(
    module: &InducedModule,
    found: &LogSeries<PBWVector<K>>,
    expected: &LogSeries<PBWVector<K>>,
) -> Option<(Scalar, u32, String, String)> {
    let mut keys = BTreeSet::new();
    for (e, k, _) in found.iter().chain(expected.iter()) {
        keys.insert((e.clone(), k));
    }
    for (e, k) in keys {
        let a = found.get(&e, k).cloned().unwrap_or_else(PBWVector::null);
        let b = expected.get(&e, k).cloned().unwrap_or_else(PBWVector::null);
        if a != b {
            return Some((e, k, module.render(&b), module.render(&a)));
        }
    }
    None
}

pub(crate) fn series_witness<K: Coeff>(
    vac: &InducedModule,
    module: &InducedModule,
    v: &PBWVector<K>,
    w: &PBWVector<K>,
    found: &LogSeries<PBWVector<K>>,
    expected: &LogSeries<PBWVector<K>>,
) -> Option<Witness> {
    first_diff(module, found, expected).map(|(e, k, expected, found)| Witness {
        v: vac.render(v),
        w: module.render(w),
        exponent: exact_kernel::format_scalar(&e),
        log_power: k,
        expected,
        found,
    })
}

pub(crate) fn vector_witness<K: Coeff>(
    vac: &InducedModule,
    module: &InducedModule,
    v: &PBWVector<K>,
    w: &PBWVector<K>,
    label: &str,
    found: &PBWVector<K>,
    expected: &PBWVector<K>,
) -> Witness {
    Witness {
        v: vac.render(v),
        w: module.render(w),
        exponent: label.to_string(),
        log_power: 0,
        expected: module.render(expected),
        found: module.render(found),
    }
}

pub(crate) fn basis(module: &InducedModule, depth: i64) -> Vec<PBWVector<Scalar>> {
    module
        .basis_to(depth.min(module.cutoff()))
        .iter()
        .map(|m| PBWVector::from_monomial(m.clone()))
        .collect()
}

/// Apply `f` to every coefficient of a series.
pub(crate) fn map_series<K: Coeff>(
    s: &LogSeries<PBWVector<K>>,
    f: impl Fn(&PBWVector<K>) -> PBWVector<K>,
) -> LogSeries<PBWVector<K>> {
    let mut out = LogSeries::with_window(s.denom(), s.floor().cloned(), s.ceiling().cloned());
    for (e, k, v) in s.iter() {
        out.add_term::<K>(e.clone(), k, f(v)).expect("same exponents");
    }
    out
}

/// Twisted vertex operator series `Y(v, x) m` for monomials, cached at one
/// ceiling so mode operators can be applied to arbitrary vectors.
pub(crate) struct ModeCache<'a> {
    tm: &'a TwistedModule,
    ceiling: Scalar,
    cache: Mutex<HashMap<(usize, Monomial), Arc<Series>>>,
    states: Vec<PBWVector<Scalar>>,
}

impl<'a> ModeCache<'a> {
    pub(crate) fn new(tm: &'a TwistedModule, states: Vec<PBWVector<Scalar>>, ceiling: Scalar) -> Self {
        ModeCache {
            tm,
            ceiling,
            cache: Mutex::new(HashMap::new()),
            states,
        }
    }

    fn series(&self, state: usize, m: &Monomial) -> Result<Arc<Series>, TwistError> {
        if let Some(s) = self.cache.lock().unwrap().get(&(state, m.clone())) {
            return Ok(s.clone());
        }
        let s = Arc::new(self.tm.vertex_op(
            &self.states[state],
            &PBWVector::from_monomial(m.clone()),
            &self.ceiling,
        )?);
        self.cache.lock().unwrap().insert((state, m.clone()), s.clone());
        Ok(s)
    }

    /// The coefficient of `x^{-m-1} (log x)^l` in `Y(states[state], x) w`.
    pub(crate) fn mode(&self, state: usize, m: &Scalar, l: u32, w: &PBWVector<Scalar>) -> Result<PBWVector<Scalar>, TwistError> {
        let e = -m - Scalar::from_integer(1.into());
        assert!(e <= self.ceiling, "mode outside the cached window");
        let mut out = PBWVector::zero();
        for (mono, c) in w.iter() {
            if let Some(v) = self.series(state, mono)?.get(&e, l) {
                out.axpy(c, v);
            }
        }
        Ok(out)
    }
}

/// Coordinates of `v` in the basis of `module` up to `depth`.
pub(crate) fn flat_coords(module: &InducedModule, depth: i64, v: &PBWVector<Scalar>) -> Vec<Scalar> {
    let b = module.basis_to(depth);
    let mut out = vec![Scalar::from_integer(0.into()); b.len()];
    for (m, c) in v.iter() {
        if let Some(i) = module.index_of(m) {
            if i < b.len() {
                out[i] = c.clone();
            }
        }
    }
    out
}

/// A subspace kept in reduced echelon form, grown one vector at a time.
#[derive(Default)]
pub(crate) struct Echelon {
    rows: Vec<(usize, Vec<Scalar>)>,
}

impl Echelon {
    /// Add `v` to the span; returns whether the dimension grew.
    pub(crate) fn insert(&mut self, mut v: Vec<Scalar>) -> bool {
        for (p, row) in &self.rows {
            if !v[*p].is_zero() {
                let c = v[*p].clone();
                for (x, r) in v.iter_mut().zip(row) {
                    *x -= &c * r;
                }
            }
        }
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = Scalar::one() / &v[p];
        for x in v.iter_mut() {
            *x *= &inv;
        }
        for (_, row) in self.rows.iter_mut() {
            if !row[p].is_zero() {
                let c = row[p].clone();
                for (x, y) in row.iter_mut().zip(&v) {
                    *x -= &c * y;
                }
            }
        }
        self.rows.push((p, v));
        true
    }

    pub(crate) fn dim(&self) -> usize {
        self.rows.len()
    }

    pub(crate) fn contains(&self, v: &[Scalar]) -> bool {
        let mut probe = Echelon {
            rows: self.rows.clone(),
        };
        !probe.insert(v.to_vec())
    }

    pub(crate) fn basis(&self) -> impl Iterator<Item = &Vec<Scalar>> {
        self.rows.iter().map(|(_, r)| r)
    }
}

/// `g` applied to a vector with cyclotomic coefficients, by linearity.
pub(crate) fn g_on_cyc(
    tm: &TwistedModule,
    w: &PBWVector<exact_kernel::CycScalar>,
) -> Result<PBWVector<exact_kernel::CycScalar>, TwistError> {
    let mut out = PBWVector::zero();
    for (m, c) in w.iter() {
        out.axpy(c, &tm.g_on_w(&PBWVector::from_monomial(m.clone()))?);
    }
    Ok(out)
}

