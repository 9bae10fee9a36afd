//! Per-vehicle routes and their reduction to plain VRP routes.

use std::collections::BTreeMap;

use super::{MvId, Solution};
use crate::instance::{Instance, NodeId, DEPOT};

/// Plain single-vehicle routes (no platoons), keyed by vehicle.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VrpRoutes {
    pub routes: BTreeMap<MvId, Vec<NodeId>>,
}

impl VrpRoutes {
    /// Sum of single-vehicle route lengths.
    pub fn distance(&self, inst: &Instance) -> i64 {
        self.routes.values().map(|r| route_length(r, inst)).sum()
    }
}

pub fn route_length(route: &[NodeId], inst: &Instance) -> i64 {
    let mut prev = DEPOT;
    let mut d = 0;
    for &v in route {
        d += inst.dist(prev, v);
        prev = v;
    }
    d + inst.dist(prev, DEPOT)
}

impl Solution {
    /// Serving vehicle per node (index 0 is the depot and always `None`).
    pub fn serving(&self, inst: &Instance) -> Vec<Option<MvId>> {
        let mut out = vec![None; inst.dimension()];
        for s in &self.segments {
            for v in &s.visits {
                if v.server.is_some() {
                    out[v.node] = v.server;
                }
            }
        }
        out
    }
}

/// Full visit sequence of every used vehicle, pass-through customers
/// included, depot ends omitted.
pub fn mv_routes(sol: &Solution) -> BTreeMap<MvId, Vec<NodeId>> {
    sol.used_mvs()
        .map(|k| {
            let mut route: Vec<NodeId> = Vec::new();
            for &s in &sol.paths()[k] {
                for v in &sol.segments()[s].visits {
                    if route.last() != Some(&v.node) {
                        route.push(v.node);
                    }
                }
            }
            (k, route)
        })
        .collect()
}

/// Keeps only the customers each vehicle serves.
pub fn drop_repeats(routes: &BTreeMap<MvId, Vec<NodeId>>, serving: &[Option<MvId>]) -> VrpRoutes {
    VrpRoutes {
        routes: routes
            .iter()
            .map(|(&k, r)| {
                let mut kept: Vec<NodeId> = r.iter().copied().filter(|&v| serving[v] == Some(k)).collect();
                kept.dedup();
                (k, kept)
            })
            .filter(|(_, r)| !r.is_empty())
            .collect(),
    }
}

/// Checks that the routes serve every customer exactly once within capacity
/// and fleet limits.
pub fn validate_vrp_routes(routes: &VrpRoutes, inst: &Instance) -> Result<(), String> {
    if routes.routes.len() > inst.fleet_size() {
        return Err(format!("{} routes for a fleet of {}", routes.routes.len(), inst.fleet_size()));
    }
    let mut seen = vec![0usize; inst.dimension()];
    for (k, r) in &routes.routes {
        let load: u64 = r.iter().map(|&v| inst.demand(v) as u64).sum();
        if load > inst.capacity() as u64 {
            return Err(format!("route {k} load {load} exceeds {}", inst.capacity()));
        }
        for &v in r {
            if v == DEPOT || v >= inst.dimension() {
                return Err(format!("route {k} visits non-customer {v}"));
            }
            seen[v] += 1;
        }
    }
    match seen.iter().enumerate().skip(1).find(|(_, &c)| c != 1) {
        Some((v, c)) => Err(format!("customer {v} visited {c} times")),
        None => Ok(()),
    }
}
