//! Moving one customer's service to another position.
//!
//! Removal is evaluated by rebuilding the solution without the served visit
//! (dropping a segment that becomes empty and a vehicle that no longer serves
//! anything); insertion is priced in closed form against that intermediate.

use super::{Candidate, MoveKind, MoveParams};
use crate::cost::Cost;
use crate::error::{Error, Result};
use crate::instance::{Instance, NodeId, DEPOT};
use crate::solution::{entry_node, exit_node, raw_cost, recompute_platoons, MvId, Segment, Solution, Topology, Visit};

/// Where a relocated customer goes. Segment indices and positions refer to
/// the solution with the customer already removed (indices are unchanged by
/// removal; positions in the source segment shift down past the customer).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RelocateTarget {
    /// `None` opens a new route on the lowest idle vehicle.
    pub segment: Option<usize>,
    pub position: usize,
    pub server: MvId,
}

/// The solution with one customer's served visit taken out.
pub(crate) struct Removal {
    pub customer: NodeId,
    pub from_segment: usize,
    pub from_index: usize,
    pub server: MvId,
    pub segments: Vec<Segment>,
    pub paths: Vec<Vec<usize>>,
    pub topo: Topology,
    pub loads: Vec<u32>,
    pub cost: Cost,
}

impl Removal {
    pub fn new(sol: &Solution, inst: &Instance, customer: NodeId) -> Result<Self> {
        let (s, i, m) = locate(sol, customer).ok_or(Error::UnknownCustomer(customer))?;
        let mut segments = sol.segments().to_vec();
        let mut paths = sol.paths().to_vec();
        segments[s].visits.remove(i);
        if segments[s].visits.is_empty() {
            for p in paths.iter_mut() {
                p.retain(|&x| x != s);
            }
        }
        if !segments.iter().any(|seg| seg.visits.iter().any(|v| v.server == Some(m))) {
            paths[m].clear();
        }
        recompute_platoons(&mut segments, &paths);
        for seg in segments.iter_mut() {
            if seg.mvs.is_empty() {
                seg.visits.clear();
            }
        }
        let topo = Topology::build(&segments, &paths)?;
        let cost = raw_cost(&segments, &topo, inst);
        let mut loads = sol.loads(inst);
        loads[m] -= inst.demand(customer);
        Ok(Self {
            customer,
            from_segment: s,
            from_index: i,
            server: m,
            segments,
            paths,
            topo,
            loads,
            cost,
        })
    }

    fn idle_mv(&self) -> Option<MvId> {
        self.paths.iter().position(|p| p.is_empty())
    }

    fn kind(&self, target: &RelocateTarget) -> MoveKind {
        match target.segment {
            Some(t) if t == self.from_segment && target.server == self.server => MoveKind::RelocateIntraSegment,
            Some(_) if target.server == self.server => MoveKind::RelocateIntraMv,
            _ => MoveKind::RelocateInterMv,
        }
    }

    /// Cost change of inserting the customer back, relative to the
    /// intermediate. Checks feasibility.
    pub fn insertion_delta(&self, inst: &Instance, target: &RelocateTarget) -> Result<Cost> {
        let c = self.customer;
        let costs = inst.costs();
        let Some(t) = target.segment else {
            if self.idle_mv() != Some(target.server) {
                return Err(Error::Infeasible("new routes use the lowest idle vehicle".into()));
            }
            return Ok(costs.raw(2 * inst.dist(DEPOT, c), 1));
        };
        let seg = self.segments.get(t).ok_or_else(|| Error::Infeasible(format!("no segment {t}")))?;
        if seg.visits.is_empty() || self.topo.pos[t] == usize::MAX {
            return Err(Error::Infeasible(format!("segment {t} is not in use")));
        }
        if !seg.mvs.contains(target.server) {
            return Err(Error::Infeasible(format!("mv {} does not travel segment {t}", target.server)));
        }
        if self.loads[target.server] + inst.demand(c) > inst.capacity() {
            return Err(Error::Infeasible(format!("mv {} lacks capacity", target.server)));
        }
        let p = target.position;
        let len = seg.visits.len();
        if p > len {
            return Err(Error::Infeasible(format!("position {p} beyond segment end")));
        }
        Ok(self.insertion_cost(inst, t, p))
    }

    fn insertion_cost(&self, inst: &Instance, t: usize, p: usize) -> Cost {
        let c = self.customer;
        let costs = inst.costs();
        let seg = &self.segments[t];
        let f = |d: i64| costs.raw(d, seg.mvs.len());
        let len = seg.visits.len();
        if p > 0 && p < len {
            let (a, b) = (seg.visits[p - 1].node, seg.visits[p].node);
            return f(inst.dist(a, c) + inst.dist(c, b) - inst.dist(a, b));
        }
        if p == 0 {
            let b = seg.entry();
            let mut delta = f(inst.dist(c, b));
            for &(x, w) in &self.topo.ins[t] {
                let e = exit_node(&self.segments, x);
                delta += costs.raw(inst.dist(e, c) - inst.dist(e, b), w);
            }
            delta
        } else {
            let a = seg.exit();
            let mut delta = f(inst.dist(a, c));
            for &(y, w) in &self.topo.outs[t] {
                let e = entry_node(&self.segments, y);
                delta += costs.raw(inst.dist(c, e) - inst.dist(a, e), w);
            }
            delta
        }
    }

    pub fn candidates(&self, sol: &Solution, inst: &Instance, out: &mut Vec<Candidate>) {
        let c = self.customer;
        let removal = self.cost - sol.cost();
        let q = inst.demand(c);
        for &t in &self.topo.order {
            let seg = &self.segments[t];
            let servers: Vec<MvId> = seg.mvs.iter().filter(|&k| self.loads[k] + q <= inst.capacity()).collect();
            if servers.is_empty() {
                continue;
            }
            for p in 0..=seg.visits.len() {
                let delta = removal + self.insertion_cost(inst, t, p);
                for &k in &servers {
                    if t == self.from_segment && p == self.from_index && k == self.server {
                        continue;
                    }
                    let target = RelocateTarget {
                        segment: Some(t),
                        position: p,
                        server: k,
                    };
                    out.push(Candidate {
                        kind: self.kind(&target),
                        params: params(c, &target),
                        delta,
                    });
                }
            }
        }
        if let Some(k) = self.idle_mv() {
            let target = RelocateTarget {
                segment: None,
                position: 0,
                server: k,
            };
            out.push(Candidate {
                kind: MoveKind::RelocateInterMv,
                params: params(c, &target),
                delta: removal + inst.costs().raw(2 * inst.dist(DEPOT, c), 1),
            });
        }
    }

    pub fn build(self, inst: &Instance, target: &RelocateTarget) -> Result<Solution> {
        let Removal {
            customer,
            mut segments,
            mut paths,
            ..
        } = self;
        let visit = Visit::served(customer, target.server);
        match target.segment {
            Some(t) => segments[t].visits.insert(target.position, visit),
            None => {
                segments.push(Segment {
                    mvs: Default::default(),
                    visits: vec![visit],
                });
                paths[target.server] = vec![segments.len() - 1];
            }
        }
        Solution::from_parts(segments, paths, inst)
    }
}

fn params(customer: NodeId, t: &RelocateTarget) -> MoveParams {
    MoveParams::Relocate {
        customer,
        segment: t.segment,
        position: t.position,
        server: t.server,
    }
}

/// Segment, visit index and serving vehicle of a customer.
pub(crate) fn locate(sol: &Solution, customer: NodeId) -> Option<(usize, usize, MvId)> {
    sol.segments().iter().enumerate().find_map(|(s, seg)| {
        seg.visits
            .iter()
            .position(|v| v.node == customer && v.server.is_some())
            .map(|i| (s, i, seg.visits[i].server.unwrap()))
    })
}

/// Evaluates relocating `customer` to `target`: returns the kind, the exact
/// cost change and the resulting solution.
pub(crate) fn evaluate(sol: &Solution, inst: &Instance, customer: NodeId, target: &RelocateTarget) -> Result<(MoveKind, Cost, Solution)> {
    let removal = Removal::new(sol, inst, customer)?;
    let delta = removal.cost - sol.cost() + removal.insertion_delta(inst, target)?;
    let kind = removal.kind(target);
    let next = removal.build(inst, target)?;
    Ok((kind, delta, next))
}
