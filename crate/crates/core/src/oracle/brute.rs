//! Exhaustive optimizers for tiny instances.
//!
//! Every feasible solution visits the nodes in one global order (each node
//! is reached once, by all vehicles that pass it), so the search walks that
//! order: each step picks the next node, the vehicles that move there and the
//! vehicle that serves it. Vehicles are identical, so a state keeps only the
//! sorted multiset of (last node, load) pairs.

use std::collections::HashMap;

use crate::cost::Cost;
use crate::error::{Error, Result};
use crate::instance::{Instance, NodeId, DEPOT};
use crate::solution::Solution;

pub const MAX_CUSTOMERS: usize = 8;
pub const MAX_FLEET: usize = 3;

type Slot = (u8, u32);

#[derive(Clone, Copy)]
struct Step {
    node: u8,
    movers: u8,
    server: u8,
}

struct Search<'a> {
    inst: &'a Instance,
    full: u16,
    memo: HashMap<(u16, Vec<Slot>), Option<(Cost, Option<Step>)>>,
}

fn check_size(inst: &Instance) -> Result<()> {
    if inst.customers() > MAX_CUSTOMERS || inst.fleet_size() > MAX_FLEET {
        return Err(Error::InstanceTooLarge(format!(
            "{} customers and {} vehicles (limits {} and {})",
            inst.customers(),
            inst.fleet_size(),
            MAX_CUSTOMERS,
            MAX_FLEET
        )));
    }
    Ok(())
}

/// Cost of the arcs into `to` when the vehicles at `from` move together,
/// grouped by origin; `None` if some group exceeds the platoon limit.
fn grouped_cost(inst: &Instance, from: impl Iterator<Item = NodeId>, to: NodeId) -> Option<Cost> {
    let mut groups: Vec<(NodeId, usize)> = Vec::new();
    for f in from {
        match groups.iter_mut().find(|g| g.0 == f) {
            Some(g) => g.1 += 1,
            None => groups.push((f, 1)),
        }
    }
    let mut total = Cost::ZERO;
    for (f, n) in groups {
        if n > inst.max_platoon() {
            return None;
        }
        total += inst.costs().raw(inst.dist(f, to), n);
    }
    Some(total)
}

impl Search<'_> {
    fn go(&mut self, mask: u16, slots: Vec<Slot>) -> Option<Cost> {
        if let Some(hit) = self.memo.get(&(mask, slots.clone())) {
            return hit.map(|h| h.0);
        }
        let res = if mask == self.full {
            grouped_cost(self.inst, slots.iter().filter(|s| s.0 != 0).map(|s| s.0 as NodeId), DEPOT).map(|c| (c, None))
        } else {
            self.expand(mask, &slots)
        };
        self.memo.insert((mask, slots), res);
        res.map(|r| r.0)
    }

    fn expand(&mut self, mask: u16, slots: &[Slot]) -> Option<(Cost, Option<Step>)> {
        let inst = self.inst;
        let k = slots.len();
        let mut best: Option<(Cost, Option<Step>)> = None;
        for v in 1..inst.dimension() {
            if mask & (1 << (v - 1)) != 0 {
                continue;
            }
            let q = inst.demand(v);
            for movers in 1u8..(1 << k) {
                // among identical slots only the leading ones may move
                let canonical = (1..k).all(|i| !(slots[i] == slots[i - 1] && movers & (1 << i) != 0 && movers & (1 << (i - 1)) == 0));
                if !canonical {
                    continue;
                }
                let Some(arcs) = grouped_cost(inst, (0..k).filter(|&i| movers & (1 << i) != 0).map(|i| slots[i].0 as NodeId), v) else {
                    continue;
                };
                for server in 0..k {
                    if movers & (1 << server) == 0 || slots[server].1 + q > inst.capacity() {
                        continue;
                    }
                    if (0..server).any(|i| movers & (1 << i) != 0 && slots[i] == slots[server]) {
                        continue;
                    }
                    let mut next = slots.to_vec();
                    for (i, s) in next.iter_mut().enumerate() {
                        if movers & (1 << i) != 0 {
                            s.0 = v as u8;
                        }
                    }
                    next[server].1 += q;
                    next.sort_unstable();
                    if let Some(rest) = self.go(mask | (1 << (v - 1)), next) {
                        let total = arcs + rest;
                        if best.is_none_or(|b| total < b.0) {
                            best = Some((
                                total,
                                Some(Step {
                                    node: v as u8,
                                    movers,
                                    server: server as u8,
                                }),
                            ));
                        }
                    }
                }
            }
        }
        best
    }
}

/// Minimum-cost solution by exhaustive search over service assignments, visit
/// orders (pass-through visits included) and platoon groupings.
pub fn brute_force_opt(inst: &Instance) -> Result<(Solution, Cost)> {
    check_size(inst)?;
    let k = inst.fleet_size();
    let full = ((1u32 << inst.customers()) - 1) as u16;
    let mut search = Search {
        inst,
        full,
        memo: HashMap::new(),
    };
    let start = vec![(0u8, 0u32); k];
    let Some(cost) = search.go(0, start.clone()) else {
        return Err(Error::Infeasible("no feasible solution".into()));
    };

    // replay the recorded choices on concrete vehicles
    let mut mvs: Vec<(Slot, Vec<(NodeId, bool)>)> = start.iter().map(|&s| (s, Vec::new())).collect();
    let mut mask = 0u16;
    loop {
        let mut order: Vec<usize> = (0..k).collect();
        order.sort_by_key(|&i| (mvs[i].0, i));
        let key: Vec<Slot> = order.iter().map(|&i| mvs[i].0).collect();
        let Some(Some((_, Some(step)))) = search.memo.get(&(mask, key)) else { break };
        let v = step.node as NodeId;
        for (p, &i) in order.iter().enumerate() {
            if step.movers & (1 << p) != 0 {
                let serves = p == step.server as usize;
                mvs[i].0 .0 = step.node;
                if serves {
                    mvs[i].0 .1 += inst.demand(v);
                }
                mvs[i].1.push((v, serves));
            }
        }
        mask |= 1 << (v - 1);
    }
    let routes: Vec<Vec<(NodeId, bool)>> = mvs.into_iter().map(|m| m.1).collect();
    let sol = Solution::from_mv_routes(inst, &routes)?;
    if sol.cost() != cost {
        return Err(Error::InvariantViolation(format!(
            "rebuilt solution costs {} but the search found {}",
            inst.fmt_cost(sol.cost()),
            inst.fmt_cost(cost)
        )));
    }
    Ok((sol, cost))
}

/// Optimal classical VRP cost: every customer on exactly one route, at most
/// one route per vehicle, no platoons.
pub fn brute_force_vrp(inst: &Instance) -> Result<Cost> {
    check_size(inst)?;
    let n = inst.customers();
    let subsets = 1usize << n;
    let load = |m: usize| (0..n).filter(|i| m & (1 << i) != 0).map(|i| inst.demand(i + 1)).sum::<u32>();

    // path[m][j]: shortest depot-start path covering m, ending at customer j
    const INF: i64 = i64::MAX / 4;
    let mut path = vec![vec![INF; n]; subsets];
    for j in 0..n {
        path[1 << j][j] = inst.dist(DEPOT, j + 1);
    }
    for m in 1..subsets {
        for j in 0..n {
            let here = path[m][j];
            if here == INF {
                continue;
            }
            for t in 0..n {
                if m & (1 << t) == 0 {
                    let next = &mut path[m | (1 << t)][t];
                    *next = (*next).min(here + inst.dist(j + 1, t + 1));
                }
            }
        }
    }
    let mut tour = vec![INF; subsets];
    tour[0] = 0;
    for (m, t) in tour.iter_mut().enumerate().skip(1) {
        if load(m) <= inst.capacity() {
            *t = (0..n).filter(|j| m & (1 << j) != 0).map(|j| path[m][j] + inst.dist(j + 1, DEPOT)).min().unwrap();
        }
    }

    // best[m]: cheapest cover of m by up to r routes, growing r per round
    let mut best = tour.clone();
    for _ in 1..inst.fleet_size() {
        let prev = best.clone();
        for m in 1..subsets {
            // the route holding the lowest customer of m
            let low = m & m.wrapping_neg();
            let rest = m ^ low;
            let mut sub = rest;
            loop {
                let r = sub | low;
                if tour[r] < INF && prev[m ^ r] < INF {
                    best[m] = best[m].min(tour[r] + prev[m ^ r]);
                }
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & rest;
            }
        }
    }
    match best[subsets - 1] {
        INF => Err(Error::Infeasible("customers do not fit the fleet".into())),
        d => Ok(inst.costs().raw(d, 1)),
    }
}
