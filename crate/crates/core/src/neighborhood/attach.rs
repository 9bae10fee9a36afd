//! Cheapest ways to route extra vehicles through the segment DAG.
//!
//! A group of `g` vehicles travelling from the source to a target segment may
//! ride along existing segments (growing their platoons) and use existing
//! arcs or open new ones between segments that respect the topological order.
//! Costs are exact marginals of the platoon cost function.

use std::cmp::Ordering;

use crate::cost::Cost;
use crate::error::{Error, Result};
use crate::instance::{Instance, NodeId};
use crate::solution::{entry_node, exit_node, SegRef, Solution, Topology};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    FromSource,
    ToSink,
}

/// A group route: segments in travel order and its added cost.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttachPath {
    pub cost: Cost,
    pub segments: Vec<usize>,
}

impl AttachPath {
    fn key_cmp(&self, other: &Self) -> Ordering {
        self.cost
            .cmp(&other.cost)
            .then(self.segments.len().cmp(&other.segments.len()))
            .then_with(|| self.segments.cmp(&other.segments))
    }

    fn better(candidate: &AttachPath, current: &Option<AttachPath>) -> bool {
        match current {
            None => true,
            Some(c) => candidate.key_cmp(c) == Ordering::Less,
        }
    }
}

/// Number of vehicles on the arc `from -> to`, zero if absent.
pub(crate) fn arc_count(topo: &Topology, from: SegRef, to: SegRef) -> usize {
    match (from, to) {
        (_, SegRef::Seg(j)) => topo.ins[j].iter().find(|x| x.0 == from).map_or(0, |x| x.1),
        (SegRef::Seg(i), _) => topo.outs[i].iter().find(|x| x.0 == to).map_or(0, |x| x.1),
        _ => 0,
    }
}

/// Best group routes from the source to every segment, or from every segment
/// to the sink, for a fixed group size.
pub(crate) struct AttachTable {
    g: usize,
    dir: Direction,
    best: Vec<Option<AttachPath>>,
}

impl AttachTable {
    pub fn build(sol: &Solution, topo: &Topology, inst: &Instance, g: usize, dir: Direction, exclude: Option<usize>) -> Self {
        let segs = sol.segments();
        let costs = inst.costs();
        let max = inst.max_platoon();
        let mut best: Vec<Option<AttachPath>> = vec![None; segs.len()];
        let usable = |x: usize| Some(x) != exclude && segs[x].mvs.len() + g <= max;
        let edge = |from: SegRef, to: SegRef| {
            let d = inst.dist(exit_node(segs, from), entry_node(segs, to));
            let w = arc_count(topo, from, to);
            costs.raw_grow(d, w, g)
        };
        let join = |x: usize| costs.raw_grow(segs[x].internal_length(inst), segs[x].mvs.len(), g);
        match dir {
            Direction::FromSource => {
                for (p, &x) in topo.order.iter().enumerate() {
                    if !usable(x) {
                        continue;
                    }
                    let mut cur = Some(AttachPath {
                        cost: edge(SegRef::Source, SegRef::Seg(x)),
                        segments: vec![x],
                    });
                    for &w in &topo.order[..p] {
                        if let Some(prev) = &best[w] {
                            let mut segments = prev.segments.clone();
                            segments.push(x);
                            let cand = AttachPath {
                                cost: prev.cost + edge(SegRef::Seg(w), SegRef::Seg(x)),
                                segments,
                            };
                            if AttachPath::better(&cand, &cur) {
                                cur = Some(cand);
                            }
                        }
                    }
                    let mut cur = cur.unwrap();
                    cur.cost += join(x);
                    best[x] = Some(cur);
                }
            }
            Direction::ToSink => {
                for (p, &x) in topo.order.iter().enumerate().rev() {
                    if !usable(x) {
                        continue;
                    }
                    let mut cur = Some(AttachPath {
                        cost: edge(SegRef::Seg(x), SegRef::Sink),
                        segments: vec![x],
                    });
                    for &z in &topo.order[p + 1..] {
                        if let Some(next) = &best[z] {
                            let mut segments = vec![x];
                            segments.extend_from_slice(&next.segments);
                            let cand = AttachPath {
                                cost: next.cost + edge(SegRef::Seg(x), SegRef::Seg(z)),
                                segments,
                            };
                            if AttachPath::better(&cand, &cur) {
                                cur = Some(cand);
                            }
                        }
                    }
                    let mut cur = cur.unwrap();
                    cur.cost += join(x);
                    best[x] = Some(cur);
                }
            }
        }
        Self { g, dir, best }
    }

    /// Cheapest group route to (or from) `target`, entering it at node
    /// `node` (or leaving it from `node`). The target's own platoon growth is
    /// not included; the returned segments exclude the target.
    pub fn finish(&self, sol: &Solution, topo: &Topology, inst: &Instance, target: usize, node: NodeId) -> AttachPath {
        let segs = sol.segments();
        let costs = inst.costs();
        let g = self.g;
        let tpos = topo.pos[target];
        let target_ref = SegRef::Seg(target);
        match self.dir {
            Direction::FromSource => {
                let edge = |from: SegRef| {
                    let d = inst.dist(exit_node(segs, from), node);
                    costs.raw_grow(d, arc_count(topo, from, target_ref), g)
                };
                let mut cur = AttachPath {
                    cost: edge(SegRef::Source),
                    segments: Vec::new(),
                };
                for &w in &topo.order[..tpos] {
                    if let Some(prev) = &self.best[w] {
                        let cand = AttachPath {
                            cost: prev.cost + edge(SegRef::Seg(w)),
                            segments: prev.segments.clone(),
                        };
                        if cand.key_cmp(&cur) == Ordering::Less {
                            cur = cand;
                        }
                    }
                }
                cur
            }
            Direction::ToSink => {
                let edge = |to: SegRef| {
                    let d = inst.dist(node, entry_node(segs, to));
                    costs.raw_grow(d, arc_count(topo, target_ref, to), g)
                };
                let mut cur = AttachPath {
                    cost: edge(SegRef::Sink),
                    segments: Vec::new(),
                };
                for &z in &topo.order[tpos + 1..] {
                    if let Some(next) = &self.best[z] {
                        let cand = AttachPath {
                            cost: next.cost + edge(SegRef::Seg(z)),
                            segments: next.segments.clone(),
                        };
                        if cand.key_cmp(&cur) == Ordering::Less {
                            cur = cand;
                        }
                    }
                }
                cur
            }
        }
    }
}

/// Cheapest way to add one vehicle to `target`'s platoon, arriving from the
/// source or leaving to the sink. The returned path includes the target and
/// the cost includes its platoon growth.
pub fn cheapest_attach_path(sol: &Solution, target: usize, direction: Direction, inst: &Instance) -> Result<AttachPath> {
    let segs = sol.segments();
    if target >= segs.len() {
        return Err(Error::InvariantViolation(format!("no segment {target}")));
    }
    if segs[target].mvs.len() + 1 > inst.max_platoon() {
        return Err(Error::NoFeasiblePath);
    }
    let topo = sol.topology();
    let table = AttachTable::build(sol, &topo, inst, 1, direction, None);
    let s = &segs[target];
    let node = match direction {
        Direction::FromSource => s.entry(),
        Direction::ToSink => s.exit(),
    };
    let mut path = table.finish(sol, &topo, inst, target, node);
    path.cost += inst.costs().raw_grow(s.internal_length(inst), s.mvs.len(), 1);
    match direction {
        Direction::FromSource => path.segments.push(target),
        Direction::ToSink => path.segments.insert(0, target),
    }
    Ok(path)
}
