//! Initial solutions: sparse random routes improved by savings-style merging.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::instance::{Instance, NodeId};
use crate::neighborhood::{apply, best_merge};
use crate::solution::Solution;

/// Random VRP solution whose routes carry at most `floor(ratio * Q)` each.
///
/// Customers are shuffled and packed first-fit; each route visits its
/// customers in packing order. If the packing needs more routes than vehicles
/// it is retried at full capacity, then first-fit decreasing.
pub fn sample_sparse_solution(inst: &Instance, seed: u64, ratio: f64) -> Result<Solution> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let limit = ((ratio.clamp(0.0, 1.0) * inst.capacity() as f64).floor() as u32).min(inst.capacity());
    let max_q = (1..inst.dimension()).map(|c| inst.demand(c)).max().unwrap_or(0);
    if limit < max_q || limit == 0 {
        return Err(Error::InfeasibleSparse);
    }
    let mut order: Vec<NodeId> = (1..inst.dimension()).collect();
    order.shuffle(&mut rng);
    let mut bins = first_fit(inst, &order, limit);
    if bins.len() > inst.fleet_size() {
        bins = first_fit(inst, &order, inst.capacity());
    }
    if bins.len() > inst.fleet_size() {
        let mut decreasing = order.clone();
        decreasing.sort_by_key(|&c| std::cmp::Reverse(inst.demand(c)));
        bins = first_fit(inst, &decreasing, inst.capacity());
    }
    if bins.len() > inst.fleet_size() {
        return Err(Error::InfeasibleSparse);
    }
    let routes: Vec<Vec<(NodeId, bool)>> = bins
        .into_iter()
        .map(|b| b.into_iter().map(|c| (c, true)).collect())
        .collect();
    Solution::from_mv_routes(inst, &routes)
}

fn first_fit(inst: &Instance, order: &[NodeId], limit: u32) -> Vec<Vec<NodeId>> {
    let mut bins: Vec<(u32, Vec<NodeId>)> = Vec::new();
    for &c in order {
        let q = inst.demand(c);
        match bins.iter_mut().find(|b| b.0 + q <= limit) {
            Some(b) => {
                b.0 += q;
                b.1.push(c);
            }
            None => bins.push((q, vec![c])),
        }
    }
    bins.into_iter().map(|b| b.1).collect()
}

/// Applies the most saving serial or parallel merge until none saves.
pub fn cw_improve(sol: &Solution, inst: &Instance) -> Solution {
    let mut cur = sol.clone();
    while let Some(mv) = best_merge(&cur, inst) {
        if mv.delta >= crate::cost::Cost::ZERO {
            break;
        }
        cur = apply(&cur, &mv);
    }
    cur
}
