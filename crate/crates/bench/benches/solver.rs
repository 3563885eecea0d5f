use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use spheregap_bench::off_axis;
use spheregap_core::eigensolver::{assemble, solve_smallest, SolverConfig};

fn assembly(c: &mut Criterion) {
    let mut group = c.benchmark_group("assemble");
    for n in [48, 96] {
        let config = SolverConfig::with_grid(n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &config, |b, config| {
            b.iter(|| assemble(&off_axis(black_box(0.1)), config).unwrap())
        });
    }
    group.finish();
}

fn eigensolve(c: &mut Criterion) {
    let mut group = c.benchmark_group("solve 3 modes");
    group.sample_size(10);
    for n in [48, 96] {
        let config = SolverConfig::with_grid(n);
        let problem = assemble(&off_axis(0.1), &config).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &problem, |b, problem| {
            b.iter(|| solve_smallest(problem, 3, &config).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, assembly, eigensolve);
criterion_main!(benches);
