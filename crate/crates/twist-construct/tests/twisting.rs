use std::sync::Arc;

use affine_fock::{InducedModule, Monomial, PBWVector, TopModule};
use exact_kernel::{int, rat, Scalar};
use lie_core::{build_simple_lie, AlgMap, LieElt};
use proptest::prelude::*;
use twist_construct::{
    closed_form_mode, functor_on_map, mode_table, ExternalTwisted, ModuleMap, TwistError, TwistedModule,
};

fn vacuum(rank: usize, level: Scalar, cutoff: i64) -> Arc<InducedModule> {
    let g = Arc::new(build_simple_lie("A", rank).unwrap());
    Arc::new(InducedModule::vacuum(g, level, &int(cutoff)).unwrap())
}

fn untwisted(v: &Arc<InducedModule>) -> Arc<TwistedModule> {
    Arc::new(TwistedModule::untwisted(v.clone(), v.clone()).unwrap())
}

fn step(base: &Arc<TwistedModule>, a: &LieElt) -> Arc<TwistedModule> {
    let u = base.vacuum().current_state(a);
    Arc::new(TwistedModule::make_twisted(base, &u).unwrap())
}

fn basis_vectors(t: &TwistedModule, depth: i64) -> Vec<PBWVector<Scalar>> {
    t.module().basis_to(depth).iter().map(|m| PBWVector::from_monomial(m.clone())).collect()
}

/// Closed-form rows against coefficients read off the twisted series.
fn assert_tables_match(t: &TwistedModule, depth: i64, range: i64) {
    let alg = t.vacuum().algebra().clone();
    for i in 0..alg.dim() {
        let b = alg.basis(i);
        let table = mode_table(t, &b, alg.name(i), range).unwrap();
        assert!(!table.rows.is_empty());
        let state = t.vacuum().generator_state(i);
        for w in basis_vectors(t, depth) {
            for row in &table.rows {
                let series = t.mode_coeff(&state, &row.m, row.l, &w).unwrap();
                assert_eq!(row.op.apply(t.module(), &w), series, "{} at ({}, {})", alg.name(i), row.m, row.l);
            }
            // Rows absent from the table vanish in the series too.
            let s = t.vertex_op(&state, &w, &int(range - 1)).unwrap();
            for (e, l, c) in s.iter() {
                let m = -e - Scalar::from_integer(1.into());
                if exact_kernel::abs(&m) <= int(range) {
                    assert!(
                        table.rows.iter().any(|r| r.m == m && r.l == l) || c.is_zero(),
                        "missing row ({m}, {l})"
                    );
                }
            }
        }
    }
}

#[test]
fn mode_tables_match_series_sl2() {
    let v = vacuum(1, int(2), 3);
    let alg = v.algebra().clone();
    let m = untwisted(&v);
    let s = step(&m, &alg.element(&[("h", rat(1, 2))]).unwrap());
    assert_tables_match(&s, 2, 2);
    let n = step(&s, &alg.named("e").unwrap());
    assert_tables_match(&n, 2, 2);
    let third = step(&m, &alg.element(&[("h", rat(1, 3))]).unwrap());
    assert_tables_match(&third, 2, 2);
}

#[test]
fn mode_tables_match_series_sl3() {
    let v = vacuum(2, int(1), 2);
    let alg = v.algebra().clone();
    let a = alg
        .element(&[("h1", rat(1, 9)), ("h2", rat(-1, 9)), ("e12", int(1))])
        .unwrap();
    let t = step(&untwisted(&v), &a);
    assert_eq!(t.denom(), 3);
    assert_tables_match(&t, 1, 2);
}

#[test]
fn l0_shift() {
    let v = vacuum(1, int(2), 3);
    let alg = v.algebra().clone();
    let omega = v.omega();
    let m = untwisted(&v);
    let s = step(&m, &alg.element(&[("h", rat(1, 2))]).unwrap());
    for (base, a) in [
        (m.clone(), alg.element(&[("h", rat(1, 2))]).unwrap()),
        (s.clone(), alg.named("e").unwrap()),
        (m.clone(), alg.element(&[("h", rat(2, 3))]).unwrap()),
    ] {
        let t = step(&base, &a);
        let u = v.current_state(&a);
        let kappa = alg.form(&a, &a) * v.level();
        for w in basis_vectors(&t, 2) {
            let lhs = t.mode_coeff(&omega, &int(1), 0, &w).unwrap();
            let mut rhs = base.mode_coeff(&omega, &int(1), 0, &w).unwrap();
            rhs.axpy(&int(-1), &base.zero_mode(&u, &w).unwrap());
            rhs.axpy(&(kappa.clone() * rat(1, 2)), &w);
            assert_eq!(lhs, rhs);
        }
    }
}

#[test]
fn twisting_back_is_identity() {
    let v = vacuum(1, int(1), 3);
    let alg = v.algebra().clone();
    let m = untwisted(&v);
    for a in [
        alg.element(&[("h", rat(1, 2))]).unwrap(),
        alg.named("f").unwrap(),
        alg.element(&[("h", rat(1, 3))]).unwrap(),
    ] {
        let there = step(&m, &a);
        let back = step(&there, &a.neg());
        for w in basis_vectors(&m, 2) {
            for i in 0..3 {
                let x = v.generator_state(i);
                let lhs = back.vertex_op(&x, &w, &int(1)).unwrap();
                let rhs = m.vertex_op(&x, &w, &int(1)).unwrap().with_denom(back.denom()).unwrap();
                assert!(lhs.same_terms(&rhs));
            }
        }
        // Weights come back; classes move by the constant κ, since
        // g_u g_{-u} acts on W as the scalar e^{2πiκ}.
        let kappa = alg.form(&a, &a) * v.level();
        for (x, y) in back.bigrading().entries.iter().zip(&m.bigrading().entries) {
            assert_eq!(x.weight, y.weight);
            assert_eq!(&x.class - &y.class, kappa);
        }
    }
}

fn weyl_flip(v: &InducedModule) -> AlgMap {
    // e ↦ f, h ↦ -h, f ↦ e
    let alg = v.algebra();
    let cols = vec![alg.named("f").unwrap().0, alg.named("h").unwrap().neg().0, alg.named("e").unwrap().0];
    AlgMap { matrix: exact_kernel::Matrix::from_cols(cols) }
}

#[test]
fn transport_conjugates() {
    let v = vacuum(1, int(2), 3);
    let alg = v.algebra().clone();
    let s = step(&untwisted(&v), &alg.element(&[("h", rat(1, 3))]).unwrap());
    let tau = weyl_flip(&v);
    let t = Arc::new(TwistedModule::transport_tau(&s, &tau).unwrap());
    let expect = tau.to_cyc().mul(s.g_matrix()).mul(&tau.inverse().unwrap().to_cyc());
    assert_eq!(t.g_matrix(), &expect);
    assert_tables_match(&t, 2, 2);
    // Twisting the transported module continues to work.
    let next = step(&t, &alg.element(&[("h", rat(1, 3))]).unwrap());
    assert_tables_match(&next, 1, 1);

    let bad = AlgMap { matrix: exact_kernel::Matrix::identity(3).scale(&int(2)) };
    assert!(matches!(
        TwistedModule::transport_tau(&s, &bad),
        Err(TwistError::InvalidAutomorphism(_))
    ));
}

#[test]
fn functor_on_maps() {
    let v = vacuum(1, int(1), 2);
    let alg = v.algebra().clone();
    let top = TopModule::sl2_irreducible(&alg, 1).unwrap();
    let w = Arc::new(InducedModule::build(alg.clone(), int(1), top, &int(2)).unwrap());
    let src = Arc::new(TwistedModule::untwisted(v.clone(), w.clone()).unwrap());
    let probes: Vec<_> = (0..3).map(|i| v.generator_state(i)).collect();
    let u = v.current_state(&alg.element(&[("h", rat(1, 2))]).unwrap());
    for f in [ModuleMap::identity(), ModuleMap::scalar(rat(-3, 2)), ModuleMap::zero()] {
        let (a, b, g) = functor_on_map(&f, &src, &src, &u, &probes, 1, &int(1)).unwrap();
        assert_eq!(g.label, f.label);
        assert_eq!(a.bigrading(), b.bigrading());
    }
    let top0 = Monomial::top(0);
    let top1 = Monomial::top(1);
    let swap = ModuleMap::new("swap", move |x| {
        let mut out = PBWVector::zero();
        for (m, c) in x.iter() {
            let m2 = if *m == top0 { top1.clone() } else if *m == top1 { top0.clone() } else { m.clone() };
            out.add_term(m2, c.clone());
        }
        out
    });
    assert!(matches!(
        functor_on_map(&swap, &src, &src, &u, &probes, 1, &int(1)),
        Err(TwistError::NotIntertwining(_))
    ));
}

/// An external twisted module that forwards to a built one.
struct Forward(Arc<TwistedModule>);

impl ExternalTwisted for Forward {
    fn label(&self) -> String {
        format!("ext({})", self.0.label())
    }
    fn g_matrix(&self) -> exact_kernel::Matrix<exact_kernel::CycScalar> {
        self.0.g_matrix().clone()
    }
    fn denom(&self) -> u64 {
        self.0.denom()
    }
    fn vertex_op(
        &self,
        v: &PBWVector<Scalar>,
        w: &PBWVector<Scalar>,
        ceiling: &Scalar,
    ) -> Result<exact_kernel::LogSeries<PBWVector<Scalar>>, TwistError> {
        self.0.vertex_op(v, w, ceiling)
    }
    fn bigrade(&self, m: &Monomial) -> Result<twist_construct::Bigrade, TwistError> {
        self.0.bigrade_of(m)
    }
    fn g_on_w(&self, w: &PBWVector<Scalar>) -> Result<PBWVector<exact_kernel::CycScalar>, TwistError> {
        self.0.g_on_w(w)
    }
}

#[test]
fn external_bases() {
    let v = vacuum(1, int(2), 2);
    let alg = v.algebra().clone();
    let s = step(&untwisted(&v), &alg.element(&[("h", rat(1, 2))]).unwrap());
    let ext = Arc::new(TwistedModule::external(v.clone(), v.clone(), Arc::new(Forward(s.clone()))).unwrap());
    let a = alg.element(&[("h", rat(1, 4))]).unwrap();
    let via_ext = step(&ext, &a);
    let direct = step(&s, &a);
    for w in basis_vectors(&direct, 1) {
        let x = v.generator_state(0);
        assert_eq!(via_ext.vertex_op(&x, &w, &int(1)).unwrap(), direct.vertex_op(&x, &w, &int(1)).unwrap());
    }
    assert_eq!(via_ext.bigrading(), direct.bigrading());
    assert!(matches!(
        closed_form_mode(&via_ext, &a, &int(0), 0),
        Err(TwistError::Unsupported(_))
    ));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    /// Twisting the vacuum by `(p/q) h` moves `e(-1)^k 1` to weight
    /// `k - 2k p/q + ℓ (p/q)^2` and class `2k p/q`, with `(h, h) = 2`.
    #[test]
    fn cartan_regrading(p in -3i64..=3, q in 1i64..=4, level in 1i64..=3) {
        let v = vacuum(1, int(level), 3);
        let alg = v.algebra().clone();
        let c = rat(p, q);
        let t = step(&untwisted(&v), &alg.element(&[("h", c.clone())]).unwrap());
        for k in 0..=3usize {
            let mono = Monomial::from_factors(vec![(-1, 0); k], 0);
            let b = t.bigrade_of(&mono).unwrap();
            let kk = int(k as i64);
            prop_assert_eq!(b.weight, kk.clone() - int(2) * &kk * &c + int(level) * &c * &c);
            prop_assert_eq!(b.class, int(2) * kk * c.clone());
        }
    }
}
