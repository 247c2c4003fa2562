use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use num_complex::Complex64;
use pcf_core::grid::{self, Function};
use pcf_core::EvalConfig;

fn grid_evaluation(c: &mut Criterion) {
    let cfg = EvalConfig::default();
    let a = Complex64::new(0.3, -0.2);
    let args = grid::linspace(Complex64::new(-4.0, 0.5), Complex64::new(4.0, -0.5), 64);
    let mut group = c.benchmark_group("grid64");
    group.sample_size(20);
    for f in [Function::U, Function::V, Function::EPlus] {
        group.bench_with_input(BenchmarkId::new("parallel", f.name()), &f, |b, &f| {
            b.iter(|| grid::evaluate(f, black_box(a), &args, &cfg))
        });
        group.bench_with_input(BenchmarkId::new("sequential", f.name()), &f, |b, &f| {
            b.iter(|| grid::evaluate_sequential(f, black_box(a), &args, &cfg))
        });
    }
    group.finish();
}

criterion_group!(benches, grid_evaluation);
criterion_main!(benches);
