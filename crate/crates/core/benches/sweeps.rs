use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use kbgeo_core::algebra::{Model, Signature, VarSet};
use kbgeo_core::category::verify_cl_functoriality;
use kbgeo_core::equivalence::check_informational_equivalence;
use kbgeo_core::fixtures;
use kbgeo_core::lattice::generate_definable_algebra;
use kbgeo_core::{Bounds, Exec};

fn cyclic3() -> Model {
    let sig = Signature::from_strs(&[("succ", 1)], &[("P", 1)], true).unwrap();
    let mut b = Model::builder(sig, &["0", "1", "2"]);
    for (a, s) in [("0", "1"), ("1", "2"), ("2", "0")] {
        b.op_row("succ", &[a], s).unwrap();
    }
    b.rel_row("P", &["0"]).unwrap();
    b.build().unwrap()
}

fn modes() -> [(&'static str, Bounds); 2] {
    [
        ("sequential", Bounds::default().with_exec(Exec::Sequential)),
        ("parallel", Bounds::default().with_exec(Exec::Parallel)),
    ]
}

fn functoriality(c: &mut Criterion) {
    let m = Arc::new(fixtures::m_neg());
    let mut g = c.benchmark_group("cl_functoriality_m_neg_depth2");
    g.sample_size(10);
    for (name, b) in modes() {
        g.bench_with_input(BenchmarkId::from_parameter(name), &b, |bench, b| {
            bench.iter(|| verify_cl_functoriality(&m, 2, 2, b).unwrap())
        });
    }
    g.finish();
}

fn generation(c: &mut Criterion) {
    let m = Arc::new(cyclic3());
    let vars = VarSet::canonical(3);
    let mut g = c.benchmark_group("definable_algebra_cyclic3_x3");
    g.sample_size(10);
    for (name, b) in modes() {
        g.bench_with_input(BenchmarkId::from_parameter(name), &b, |bench, b| {
            bench.iter(|| generate_definable_algebra(&m, &vars, b).unwrap())
        });
    }
    g.finish();
}

fn equivalence(c: &mut Criterion) {
    let (m1, m2) = (Arc::new(fixtures::m_pq1()), Arc::new(fixtures::m_pq2()));
    let mut g = c.benchmark_group("informational_equivalence_pq");
    g.sample_size(10);
    for (name, b) in modes() {
        g.bench_with_input(BenchmarkId::from_parameter(name), &b, |bench, b| {
            bench.iter(|| check_informational_equivalence(&m1, &m2, 2, 1, b).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, functoriality, generation, equivalence);
criterion_main!(benches);
