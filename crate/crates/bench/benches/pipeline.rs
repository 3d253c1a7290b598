use akhodge_bench::{fixture, FOUR_DIMENSIONAL};
use akhodge_core::{builtin, identity_suite, HodgeReport, ReportOptions};
use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

fn build_operators(c: &mut Criterion) {
    let mut g = c.benchmark_group("build");
    for name in FOUR_DIMENSIONAL {
        g.bench_function(name, |b| b.iter(|| builtin(black_box(name)).unwrap()));
    }
    g.finish();
}

fn identities(c: &mut Criterion) {
    let mut g = c.benchmark_group("identity_suite");
    for name in FOUR_DIMENSIONAL {
        let m = fixture(name);
        g.bench_function(name, |b| b.iter(|| identity_suite(black_box(&m), 0)));
    }
    g.finish();
}

fn report(c: &mut Criterion) {
    let mut g = c.benchmark_group("report");
    g.sample_size(20);
    let opts = ReportOptions::default();
    for name in FOUR_DIMENSIONAL {
        let m = fixture(name);
        g.bench_function(name, |b| b.iter(|| HodgeReport::build(black_box(&m), &opts).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, build_operators, identities, report);
criterion_main!(benches);
