//! Benchmark fixtures shared by the criterion benches.

use mvrp::instance::{generate_augerat_like, generate_tiny, AugeratSet};
use mvrp::search::{sample_sparse_solution, SearchParams};
use mvrp::{derive_instance, DeriveParams, Eta, Instance, Metric, Solution};

pub fn eta() -> Eta {
    Eta::new(1, 10).unwrap()
}

/// Exhaustively solvable instance with `customers` customers and a fleet of 3.
pub fn tiny(customers: usize) -> Instance {
    (0..).find_map(|seed| {
        let inst = generate_tiny(seed, customers, 3, 3, eta()).ok()?;
        mvrp::brute_force_opt(&inst).ok().map(|_| inst)
    })
    .unwrap()
}

/// Augerat-A-like instance with `nodes` nodes, Q = 100, Manhattan distances.
pub fn derived(nodes: usize, max_platoon: usize) -> Instance {
    let base = generate_augerat_like(AugeratSet::A, nodes, 1).unwrap();
    let keep: Vec<usize> = (1..nodes).collect();
    let params = DeriveParams {
        name: format!("bench-{nodes}"),
        capacity: 100,
        max_platoon,
        eta: eta(),
        fleet_size: None,
        metric: Metric::Manhattan,
    };
    derive_instance(&base, &keep, &params).unwrap()
}

/// Sparse starting solution of `inst` as the search would draw it.
pub fn start(inst: &Instance) -> Solution {
    sample_sparse_solution(inst, 7, 1.0).unwrap()
}

/// Single-start parameters with a fixed iteration budget.
pub fn params(iterations: usize) -> SearchParams {
    SearchParams {
        starts: 1,
        max_iterations: iterations,
        ..SearchParams::default()
    }
}
