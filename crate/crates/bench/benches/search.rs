use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use mvrp::neighborhood::{candidates, enumerate_neighborhood, NeighborhoodConfig, TabuState};
use mvrp::search::{cw_improve, multi_start, tabu_search};
use mvrp::{brute_force_opt, export_milp};
use mvrp_bench::{derived, params, start, tiny};

fn neighborhood(c: &mut Criterion) {
    let inst = derived(30, 3);
    let sol = cw_improve(&start(&inst), &inst);
    let tabu = TabuState::new(10);
    c.bench_function("candidates/30", |b| b.iter(|| candidates(black_box(&sol), &inst, NeighborhoodConfig::default())));
    c.bench_function("best_move/30", |b| {
        b.iter(|| enumerate_neighborhood(black_box(&sol), &inst, &tabu, sol.cost(), NeighborhoodConfig::default()))
    });
}

fn search(c: &mut Criterion) {
    let mut g = c.benchmark_group("search");
    g.sample_size(10);
    let inst = derived(30, 3);
    let init = cw_improve(&start(&inst), &inst);
    g.bench_function("cw_improve/30", |b| b.iter(|| cw_improve(black_box(&start(&inst)), &inst)));
    g.bench_function("tabu_100/30", |b| b.iter(|| tabu_search(&inst, black_box(&init), &params(100), 1)));
    let big = derived(67, 4);
    g.bench_function("multi_start_1x100/67", |b| b.iter(|| multi_start(black_box(&big), &params(100))));
    g.finish();
}

fn oracle(c: &mut Criterion) {
    let mut g = c.benchmark_group("oracle");
    g.sample_size(10);
    for n in [4, 6] {
        let inst = tiny(n);
        g.bench_function(format!("brute/{n}"), |b| b.iter(|| brute_force_opt(black_box(&inst))));
    }
    let inst = tiny(6);
    g.bench_function("export_lp/6", |b| b.iter(|| export_milp(black_box(&inst))));
    g.finish();
}

criterion_group!(benches, neighborhood, search, oracle);
criterion_main!(benches);
