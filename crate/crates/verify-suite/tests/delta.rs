use std::sync::Arc;

use affine_fock::InducedModule;
use exact_kernel::par::Exec;
use exact_kernel::{int, rat};
use lie_core::build_simple_lie;
use verify_suite::{check_delta_identities, DeltaScope, Status};

fn vacuum(rank: usize, level: i64, cutoff: i64) -> Arc<InducedModule> {
    let g = Arc::new(build_simple_lie("A", rank).unwrap());
    Arc::new(InducedModule::vacuum(g, int(level), &int(cutoff)).unwrap())
}

fn assert_all_pass(reports: &[verify_suite::CheckReport]) {
    for r in reports {
        assert_eq!(r.status, Status::Pass, "{}: {:?} {:?}", r.name, r.witness, r.notes);
        assert!(r.cases > 0, "{} made no comparisons", r.name);
    }
}

#[test]
fn semisimple_half_h() {
    let v = vacuum(1, 2, 3);
    let a = v.algebra().element(&[("h", rat(1, 2))]).unwrap();
    let reports = check_delta_identities(&v, &a, DeltaScope::default(), &[]);
    assert_eq!(reports.len(), 9);
    assert_all_pass(&reports);
}

#[test]
fn nilpotent_e() {
    let v = vacuum(1, 2, 3);
    let a = v.algebra().named("e").unwrap();
    let reports = check_delta_identities(&v, &a, DeltaScope::default(), &[]);
    assert_all_pass(&reports);
    let regression = reports.iter().find(|r| r.name == "delta.D2.signRegression").unwrap();
    assert!(regression.notes[0].starts_with("flipped sign fails D2"));
}

#[test]
fn mixed_element_with_fractional_exponents() {
    let v = vacuum(1, 1, 2);
    let a = v.algebra().element(&[("h", rat(1, 3)), ("e", int(0))]).unwrap();
    let scope = DeltaScope {
        v_depth: 1,
        w_depth: 2,
        inverse_depth: 2,
        p_min: -2,
        exec: Exec::Parallel,
    };
    let reports = check_delta_identities(&v, &a, scope, &[]);
    assert_all_pass(&reports);
    let d1 = reports.iter().find(|r| r.name == "delta.D1").unwrap();
    assert_eq!(d1.params["D"], "3");
}

#[test]
fn sl3_jordan_chevalley_pair() {
    let v = vacuum(2, 1, 2);
    let alg = v.algebra();
    // s = (h1 - h2)/3 commutes with e12 (the highest root vector) and is orthogonal to it.
    let a = alg
        .element(&[("h1", rat(1, 3)), ("h2", rat(-1, 3)), ("e12", int(1))])
        .unwrap();
    let scope = DeltaScope {
        v_depth: 1,
        w_depth: 1,
        inverse_depth: 1,
        p_min: -1,
        exec: Exec::Parallel,
    };
    assert_all_pass(&check_delta_identities(&v, &a, scope, &[]));
}

#[test]
fn parallel_and_sequential_agree() {
    let v = vacuum(1, 2, 2);
    let a = v.algebra().element(&[("h", rat(1, 2)), ("e", int(1))]).unwrap();
    let mut scope = DeltaScope {
        v_depth: 1,
        w_depth: 2,
        inverse_depth: 2,
        p_min: -2,
        exec: Exec::Parallel,
    };
    let par = check_delta_identities(&v, &a, scope, &[]);
    scope.exec = Exec::Sequential;
    let seq = check_delta_identities(&v, &a, scope, &[]);
    assert_eq!(par, seq);
}
