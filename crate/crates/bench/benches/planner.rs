use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use mintplan_bench::{instance, synthetic_history, synthetic_window};
use mintplan_core::bnb::solve_mip;
use mintplan_core::heuristics::plan;
use mintplan_core::lpsolve::solve_lp;
use mintplan_core::mip::build;
use mintplan_core::oracle::{exhaustive, InstanceShape};
use mintplan_core::rolling::run_simulation;
use mintplan_core::PlannerOptions;

fn relaxation(c: &mut Criterion) {
    let (s, cfg) = synthetic_window(42);
    let lp = build(&s, &cfg, &[]).unwrap().relaxation();
    c.bench_function("lp/synthetic_window_root", |b| b.iter(|| solve_lp(black_box(&lp)).unwrap()));
}

fn branch_and_bound(c: &mut Criterion) {
    let mut group = c.benchmark_group("mip");
    let shape = InstanceShape::default();
    let problems: Vec<_> = (0..8)
        .map(|seed| {
            let (s, cfg) = instance(&shape, seed);
            build(&s, &cfg, &[]).unwrap()
        })
        .collect();
    group.bench_function("bnb/oracle_shape_x8", |b| {
        b.iter(|| problems.iter().map(|p| solve_mip(black_box(p)).unwrap().objective).sum::<f64>())
    });
    group.bench_function("exhaustive/oracle_shape_x8", |b| {
        b.iter(|| problems.iter().map(|p| exhaustive(black_box(p)).unwrap().objective).sum::<f64>())
    });
    let (s, cfg) = synthetic_window(42);
    let p = build(&s, &cfg, &[]).unwrap();
    group.bench_function("bnb/synthetic_window", |b| b.iter(|| solve_mip(black_box(&p)).unwrap()));
    group.finish();
}

fn planner(c: &mut Criterion) {
    let mut group = c.benchmark_group("plan");
    let (s, cfg) = synthetic_window(42);
    for (name, proc1, proc2) in [("bare", false, false), ("proc1", true, false), ("both", true, true)] {
        let opts = PlannerOptions {
            proc1,
            proc2,
            ..PlannerOptions::default()
        };
        group.bench_with_input(BenchmarkId::new("synthetic_window", name), &opts, |b, opts| {
            b.iter(|| plan(black_box(&s), &cfg, opts).unwrap())
        });
    }
    group.finish();
}

fn simulation(c: &mut Criterion) {
    let history = synthetic_history(42);
    let mut group = c.benchmark_group("rolling");
    group.sample_size(10);
    group.bench_function("synthetic_21_quarters", |b| {
        b.iter(|| run_simulation(black_box(&history), &PlannerOptions::default()).unwrap())
    });
    group.finish();
}

criterion_group!(benches, relaxation, branch_and_bound, planner, simulation);
criterion_main!(benches);
