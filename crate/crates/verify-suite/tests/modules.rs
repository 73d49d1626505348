use std::sync::Arc;

use affine_fock::{InducedModule, Monomial, PBWVector};
use exact_kernel::{int, rat, CycScalar, LogSeries, Matrix, Scalar};
use lie_core::build_simple_lie;
use twist_construct::{Bigrade, ExternalTwisted, GradingMode, TwistError, TwistedModule};
use verify_suite::*;

struct Fixture {
    v: Arc<InducedModule>,
    untwisted: Arc<TwistedModule>,
    half: Arc<TwistedModule>,
    nilpotent: Arc<TwistedModule>,
}

fn fixture() -> Fixture {
    let g = Arc::new(build_simple_lie("A", 1).unwrap());
    let v = Arc::new(InducedModule::vacuum(g.clone(), int(2), &int(4)).unwrap());
    let untwisted = Arc::new(TwistedModule::untwisted(v.clone(), v.clone()).unwrap());
    let s = v.current_state(&g.element(&[("h", rat(1, 2))]).unwrap());
    let half = Arc::new(TwistedModule::make_twisted(&untwisted, &s).unwrap());
    let e = v.current_state(&g.named("e").unwrap());
    let nilpotent = Arc::new(TwistedModule::make_twisted(&half, &e).unwrap());
    Fixture {
        v,
        untwisted,
        half,
        nilpotent,
    }
}

fn currents(v: &InducedModule) -> Vec<PBWVector<Scalar>> {
    (0..3).map(|i| v.generator_state(i)).collect()
}

fn find<'a>(rs: &'a [CheckReport], name: &str) -> &'a CheckReport {
    rs.iter().find(|r| r.name == name).unwrap()
}

#[test]
fn untwisted_module_passes_everything() {
    let f = fixture();
    let tm = &f.untwisted;
    assert!(check_equivariance(tm, &currents(&f.v), 2, &int(2), 0).passed());
    assert!(check_commutator(tm, &[(0, 1), (0, 2), (1, 2)], 2, 2).unwrap().passed());
    for r in check_axioms(tm, &currents(&f.v), 2, &int(2)) {
        assert!(r.passed(), "{}: {:?}", r.name, r.witness);
    }
    let gr = check_grading_restriction(tm, 6);
    assert!(gr.passed());
    assert!(check_grading_restriction(&tm.as_ref().clone().with_mode(GradingMode::StronglyC), 6).passed());
}

#[test]
fn half_h_twist() {
    let f = fixture();
    let tm = &f.half;
    assert!(check_equivariance(tm, &currents(&f.v), 2, &int(2), 1).passed());
    // [e(m), f(n)] = h(m+n) + 2m δ
    let c = check_commutator(tm, &[(0, 2), (0, 1), (1, 2)], 3, 2).unwrap();
    assert!(c.passed(), "{:?}", c.witness);
    for r in check_axioms(tm, &currents(&f.v), 2, &int(2)) {
        assert!(r.passed(), "{}: {:?}", r.name, r.witness);
    }
    for r in [
        check_l0_shift(tm, 2),
        check_mode_tables(tm, 2, 2),
        check_involution(tm, 2, &int(1)),
        check_bigrading_compat(tm, 2, &int(1)),
        check_stable_subspaces(tm, 3),
        check_functor(tm, 1, &int(1)),
    ] {
        assert!(r.passed(), "{}: {:?} {:?}", r.name, r.witness, r.notes);
    }
    // e(-1)^k 1 all sit at weight 1/2 with integral class.
    let gr = check_grading_restriction(tm, 6);
    assert_eq!(gr.status, Status::Fail);
    let w = gr.witness.unwrap();
    assert_eq!(w.v, "e(-1)^k 1");
    assert_eq!(w.exponent, "weight 1/2");
    // With exact classes the family separates.
    let exact = tm.as_ref().clone().with_mode(GradingMode::C);
    assert!(check_grading_restriction(&exact, 6).passed());
    // Exact classes keep growing with the depth, so Q never settles.
    let strong = tm.as_ref().clone().with_mode(GradingMode::StronglyC);
    assert_eq!(check_grading_restriction(&strong, 6).status, Status::Uncertifiable);
}

#[test]
fn third_h_twist_is_strongly_uncertifiable() {
    let f = fixture();
    let g = f.v.algebra();
    let s = f.v.current_state(&g.element(&[("h", rat(1, 3))]).unwrap());
    let tm = TwistedModule::make_twisted(&f.untwisted, &s).unwrap();
    assert_eq!(tm.denom(), 3);
    assert!(check_equivariance(&tm, &currents(&f.v), 1, &int(1), 2).passed());
    assert!(check_grading_restriction(&tm, 6).passed());
    let strong = tm.with_mode(GradingMode::StronglyC);
    let r = check_grading_restriction(&strong, 6);
    assert_eq!(r.status, Status::Uncertifiable);
    assert!(r.notes.iter().any(|n| n.starts_with("StronglyGradedUncertifiable")));
}

#[test]
fn nilpotent_twist() {
    let f = fixture();
    let tm = &f.nilpotent;
    assert!(check_equivariance(tm, &currents(&f.v), 2, &int(1), 0).passed());
    assert!(matches!(
        check_commutator(tm, &[(0, 2)], 2, 2),
        Err(TwistError::Unsupported(_))
    ));
    let axioms = check_axioms(tm, &currents(&f.v), 2, &int(2));
    for name in ["axioms.identity", "axioms.truncation", "axioms.derivative"] {
        assert!(find(&axioms, name).passed(), "{name}");
    }
    // Y_0(e(-1)1) = e(-1) on W is not locally nilpotent.
    assert_eq!(find(&axioms, "axioms.L0grading").status, Status::Uncertifiable);
    assert_eq!(find(&axioms, "axioms.gGrading").status, Status::Uncertifiable);
    let table = check_mode_tables(tm, 2, 2);
    assert!(table.passed(), "{:?}", table.witness);
    assert_eq!(table.notes[0], "largest log power: 2");
    for r in [
        check_l0_shift(tm, 2),
        check_involution(tm, 2, &int(1)),
        check_bigrading_compat(tm, 2, &int(1)),
        check_stable_subspaces(tm, 2),
        check_functor(tm, 1, &int(1)),
    ] {
        assert!(r.passed(), "{}: {:?} {:?}", r.name, r.witness, r.notes);
    }
}

#[test]
fn jordan_chevalley_steps_compose() {
    let f = fixture();
    let g = f.v.algebra();
    let a = g.element(&[("h", rat(1, 2)), ("e", int(1))]).unwrap();
    assert!(check_jc_additivity(&f.untwisted, &a, 2, &int(1)).passed());
    let n = g.named("f").unwrap();
    assert!(check_jc_additivity(&f.untwisted, &n, 2, &int(1)).passed());
}

/// The ⅓h-twisted module presented from outside, claiming the identity as
/// its automorphism: equivariance must catch the lie.
struct WrongG(Arc<TwistedModule>);

impl ExternalTwisted for WrongG {
    fn label(&self) -> String {
        "wrong g".into()
    }
    fn g_matrix(&self) -> Matrix<CycScalar> {
        Matrix::identity(3)
    }
    fn denom(&self) -> u64 {
        self.0.denom()
    }
    fn vertex_op(
        &self,
        v: &PBWVector<Scalar>,
        w: &PBWVector<Scalar>,
        ceiling: &Scalar,
    ) -> Result<LogSeries<PBWVector<Scalar>>, TwistError> {
        self.0.vertex_op(v, w, ceiling)
    }
    fn bigrade(&self, m: &Monomial) -> Result<Bigrade, TwistError> {
        self.0.bigrade_of(m)
    }
    fn g_on_w(&self, w: &PBWVector<Scalar>) -> Result<PBWVector<CycScalar>, TwistError> {
        Ok(w.to_cyc())
    }
}

#[test]
fn equivariance_detects_a_wrong_automorphism() {
    let f = fixture();
    let s = f.v.current_state(&f.v.algebra().element(&[("h", rat(1, 3))]).unwrap());
    let third = Arc::new(TwistedModule::make_twisted(&f.untwisted, &s).unwrap());
    let ext = TwistedModule::external(f.v.clone(), f.v.clone(), Arc::new(WrongG(third))).unwrap();
    let r = check_equivariance(&ext, &currents(&f.v), 1, &int(1), 0);
    assert_eq!(r.status, Status::Fail);
    let w = r.witness.unwrap();
    assert!(!w.v.is_empty() && w.expected != w.found);
    assert!(matches!(check_commutator(&ext, &[(0, 2)], 1, 1), Err(TwistError::Unsupported(_))));
}
