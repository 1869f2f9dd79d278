use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use incflow::heur::{run_heuristic, Method};
use incflow::instgen::Family;
use incflow::{brute_force_permutations, exact_subset_dp, max_flow};
use incflow_bench::{family, general, layered, small_general};

fn maxflow(c: &mut Criterion) {
    let mut group = c.benchmark_group("max_flow");
    for n in [20, 50, 100] {
        let inst = general(n, 10, 1);
        let all = inst.network.all_arcs();
        group.bench_with_input(BenchmarkId::from_parameter(n), &inst, |b, inst| {
            b.iter(|| max_flow(black_box(&inst.network), &all))
        });
    }
    group.finish();
}

fn heuristics(c: &mut Criterion) {
    let mut group = c.benchmark_group("heuristics");
    group.sample_size(10);
    let cells = [("general-20", general(20, 10, 3)), ("layered-5x5", layered(5, 5, 10, 3))];
    for (name, inst) in &cells {
        for m in [Method::Qi, Method::QiPoly, Method::Qtu, Method::Qtt] {
            group.bench_with_input(BenchmarkId::new(m.name(), name), inst, |b, inst| {
                b.iter(|| run_heuristic(black_box(inst), m).unwrap())
            });
        }
    }
    group.finish();
}

fn exact(c: &mut Criterion) {
    let mut group = c.benchmark_group("exact");
    group.sample_size(10);
    let inst = small_general(7, 0);
    group.bench_function("subset-dp", |b| b.iter(|| exact_subset_dp(black_box(&inst)).unwrap()));
    group.bench_function("permutations", |b| b.iter(|| brute_force_permutations(black_box(&inst)).unwrap()));
    for k in [10, 30] {
        let f5 = family(Family::F5, k);
        group.bench_with_input(BenchmarkId::new("subset-dp-f5", k), &f5, |b, inst| {
            b.iter(|| exact_subset_dp(black_box(inst)).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, maxflow, heuristics, exact);
criterion_main!(benches);
