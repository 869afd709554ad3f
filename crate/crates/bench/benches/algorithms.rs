use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use testsched_core::algorithms::{beta_sort, sidle};
use testsched_core::analysis::optimize::theorem1_grid_check;
use testsched_core::analysis::{charging, sidle_ratio_bound, AnalysisParams};
use testsched_core::delay::{decompose, optimal_objective};
use testsched_core::instances::{random_instance, Distribution, Family};

fn simulation(c: &mut Criterion) {
    let mut group = c.benchmark_group("simulation");
    for n in [1_000usize, 10_000] {
        let inst = random_instance(
            n,
            1,
            Distribution::Uniform {
                t_max: 1.0,
                p_max: 1.0,
            },
        )
        .unwrap();
        group.bench_with_input(BenchmarkId::new("beta_sort", n), &inst, |b, i| {
            b.iter(|| beta_sort(black_box(i), 1.0).unwrap().objective())
        });
        group.bench_with_input(BenchmarkId::new("optimal_objective", n), &inst, |b, i| {
            b.iter(|| optimal_objective(black_box(i)))
        });
        let unit = random_instance(n, 1, Distribution::UnitTests { p_max: 3.0 }).unwrap();
        group.bench_with_input(BenchmarkId::new("sidle", n), &unit, |b, i| {
            b.iter(|| sidle(black_box(i), 1.35542).unwrap().objective())
        });
    }
    let lb = Family::BetaLowerSmall {
        n: 10_000,
        beta: 1.0,
        gamma: 0.381966,
        m: 1.0,
        eps: 1e-6,
    }
    .generate()
    .unwrap();
    group.bench_function("beta_lb_small_10k", |b| {
        b.iter(|| beta_sort(black_box(&lb), 1.0).unwrap())
    });
    group.finish();
}

fn analysis(c: &mut Criterion) {
    let params = AnalysisParams::corollary();
    let mut group = c.benchmark_group("analysis");
    for n in [12usize, 50] {
        let inst = random_instance(n, 3, Distribution::analysis_stress()).unwrap();
        group.bench_with_input(BenchmarkId::new("decompose", n), &inst, |b, i| {
            b.iter(|| decompose(&beta_sort(i, 1.0).unwrap(), black_box(i)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("charging", n), &inst, |b, i| {
            b.iter(|| charging(black_box(i), params).unwrap())
        });
    }
    group.sample_size(10);
    group.bench_function("theorem1_grid_check", |b| b.iter(theorem1_grid_check));
    group.bench_function("sidle_ratio_bound", |b| {
        b.iter(|| sidle_ratio_bound(black_box(1.35542)).unwrap())
    });
    group.finish();
}

criterion_group!(benches, simulation, analysis);
criterion_main!(benches);
