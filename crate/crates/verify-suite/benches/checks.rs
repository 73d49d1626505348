use std::sync::Arc;

use affine_fock::InducedModule;
use criterion::{criterion_group, criterion_main, Criterion};
use exact_kernel::par::Exec;
use exact_kernel::{int, rat};
use lie_core::build_simple_lie;
use twist_construct::TwistedModule;
use verify_suite::{check_delta_identities, check_mode_tables, run_jobs, DeltaScope, Job};

fn delta_identities(c: &mut Criterion) {
    let g = Arc::new(build_simple_lie("A", 1).unwrap());
    let v = Arc::new(InducedModule::vacuum(g.clone(), int(2), &int(2)).unwrap());
    let a = g.element(&[("h", rat(1, 2))]).unwrap();
    let mut group = c.benchmark_group("delta_identities");
    group.sample_size(10);
    for (label, exec) in [("parallel", Exec::Parallel), ("sequential", Exec::Sequential)] {
        let scope = DeltaScope {
            v_depth: 1,
            w_depth: 2,
            inverse_depth: 2,
            p_min: -2,
            exec,
        };
        group.bench_function(label, |b| b.iter(|| check_delta_identities(&v, &a, scope, &[])));
    }
    group.finish();
}

fn mode_tables(c: &mut Criterion) {
    let g = Arc::new(build_simple_lie("A", 1).unwrap());
    let v = Arc::new(InducedModule::vacuum(g.clone(), int(2), &int(3)).unwrap());
    let m = Arc::new(TwistedModule::untwisted(v.clone(), v.clone()).unwrap());
    let s = Arc::new(TwistedModule::make_twisted(&m, &v.current_state(&g.element(&[("h", rat(1, 2))]).unwrap())).unwrap());
    let n = Arc::new(TwistedModule::make_twisted(&s, &v.current_state(&g.named("e").unwrap())).unwrap());
    let modules = [m, s, n];
    let jobs: Vec<Job> = modules
        .iter()
        .map(|tm| -> Job { Box::new(move || vec![check_mode_tables(tm, 2, 2)]) })
        .collect();
    let mut group = c.benchmark_group("mode_tables");
    group.sample_size(10);
    group.bench_function("parallel", |b| b.iter(|| run_jobs(&jobs, Exec::Parallel)));
    group.bench_function("sequential", |b| b.iter(|| run_jobs(&jobs, Exec::Sequential)));
    group.finish();
}

criterion_group!(benches, delta_identities, mode_tables);
criterion_main!(benches);
