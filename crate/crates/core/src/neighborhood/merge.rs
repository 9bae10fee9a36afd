//! Serial and parallel merging of a single-brunch route into a segment.
//!
//! Serial: the route's customers are spliced into the segment at a position;
//! route vehicles paired with segment vehicles hand their customers over,
//! unpaired ones join the platoon and are attached through the DAG.
//!
//! Parallel: the route's vehicles ride in the segment's platoon up to a split
//! customer, serve their own customers on a new branch, and dock again at a
//! later customer; either end may instead be the depot.

use std::collections::HashMap;

use super::attach::{AttachPath, AttachTable, Direction};
use super::pairing::pair_mvs;
use super::{Candidate, MoveKind, MoveParams};
use crate::cost::Cost;
use crate::error::{Error, Result};
use crate::instance::{Instance, DEPOT};
use crate::solution::{entry_node, exit_node, MvId, Segment, Solution, Topology, Visit};

/// Shared evaluation state for all merges out of one solution.
pub(crate) struct MergeCtx<'a> {
    pub sol: &'a Solution,
    pub inst: &'a Instance,
    pub topo: Topology,
    pub loads: Vec<u32>,
    tables: HashMap<(usize, usize, bool), AttachTable>,
}

impl<'a> MergeCtx<'a> {
    pub fn new(sol: &'a Solution, inst: &'a Instance) -> Self {
        Self {
            sol,
            inst,
            topo: sol.topology(),
            loads: sol.loads(inst),
            tables: HashMap::new(),
        }
    }

    fn attach(&mut self, route: usize, g: usize, dir: Direction, target: usize, node: usize) -> AttachPath {
        let key = (route, g, dir == Direction::FromSource);
        let (sol, inst, topo) = (self.sol, self.inst, &self.topo);
        let table = self
            .tables
            .entry(key)
            .or_insert_with(|| AttachTable::build(sol, topo, inst, g, dir, Some(route)));
        table.finish(sol, topo, inst, target, node)
    }

    fn route_cost(&self, r: usize) -> Cost {
        let seg = &self.sol.segments()[r];
        let d = self.inst.dist(DEPOT, seg.entry()) + seg.internal_length(self.inst) + self.inst.dist(seg.exit(), DEPOT);
        self.inst.costs().raw(d, seg.mvs.len())
    }

    fn pairing(&self, r: usize, s: usize) -> (Vec<(MvId, MvId)>, Vec<MvId>) {
        let segs = self.sol.segments();
        let kr: Vec<MvId> = segs[r].mvs.iter().collect();
        let ks: Vec<MvId> = segs[s].mvs.iter().collect();
        let lr: Vec<u32> = kr.iter().map(|&k| self.loads[k]).collect();
        let ls: Vec<u32> = ks.iter().map(|&k| self.loads[k]).collect();
        let p = pair_mvs(&lr, &ls, self.inst.capacity());
        let pairs = p.pairs.iter().map(|&(i, j)| (kr[i], ks[j])).collect();
        let unpaired = p.unpaired_route.iter().map(|&i| kr[i]).collect();
        (pairs, unpaired)
    }

    /// Cumulative internal length: `cum[j]` covers links between visits
    /// `0..=j`.
    fn cumulative(&self, s: usize) -> Vec<i64> {
        let v = &self.sol.segments()[s].visits;
        let mut cum = vec![0i64; v.len()];
        for j in 1..v.len() {
            cum[j] = cum[j - 1] + self.inst.dist(v[j - 1].node, v[j].node);
        }
        cum
    }

    /// All serial merge candidates of route `r` into segment `s`.
    pub fn serial(&mut self, r: usize, s: usize, out: &mut Vec<Candidate>) {
        let (_, unpaired) = self.pairing(r, s);
        let u = unpaired.len();
        let sol = self.sol;
        let segs = sol.segments();
        let l = segs[s].mvs.len();
        if l + u > self.inst.max_platoon() {
            return;
        }
        let (rs, ss) = (&segs[r], &segs[s]);
        let inst = self.inst;
        let costs = inst.costs();
        let cum = self.cumulative(s);
        let len = ss.visits.len();
        let base = -self.route_cost(r) - costs.raw(cum[len - 1], l);
        let r_int = rs.internal_length(inst);
        let (r0, rl) = (rs.entry(), rs.exit());
        let front: Cost = self.topo.ins[s]
            .iter()
            .map(|&(x, w)| {
                let e = exit_node(segs, x);
                costs.raw(inst.dist(e, r0) - inst.dist(e, ss.entry()), w)
            })
            .sum();
        let back: Cost = self.topo.outs[s]
            .iter()
            .map(|&(y, w)| {
                let e = entry_node(segs, y);
                costs.raw(inst.dist(rl, e) - inst.dist(ss.exit(), e), w)
            })
            .sum();
        let (s0, sl) = (ss.entry(), ss.exit());
        for n in 0..=len {
            let mut newlen = r_int;
            if n > 0 {
                newlen += cum[n - 1] + inst.dist(ss.visits[n - 1].node, r0);
            }
            if n < len {
                newlen += inst.dist(rl, ss.visits[n].node) + cum[len - 1] - cum[n];
            }
            let mut delta = base + costs.raw(newlen, l + u);
            if n == 0 {
                delta += front;
            }
            if n == len {
                delta += back;
            }
            if u > 0 {
                let e = if n == 0 { r0 } else { s0 };
                let x = if n == len { rl } else { sl };
                delta += self.attach(r, u, Direction::FromSource, s, e).cost;
                delta += self.attach(r, u, Direction::ToSink, s, x).cost;
            }
            out.push(Candidate {
                kind: MoveKind::SerialMerge,
                params: MoveParams::Serial {
                    route: r,
                    segment: s,
                    position: n,
                },
                delta,
            });
        }
    }

    /// All parallel merge candidates of route `r` alongside segment `s`.
    pub fn parallel(&mut self, r: usize, s: usize, out: &mut Vec<Candidate>) {
        let sol = self.sol;
        let segs = sol.segments();
        let m = segs[r].mvs.len();
        let l = segs[s].mvs.len();
        if l + m > self.inst.max_platoon() {
            return;
        }
        let inst = self.inst;
        let costs = inst.costs();
        let cum = self.cumulative(s);
        let len = segs[s].visits.len();
        let (r0, rl, r_int) = (segs[r].entry(), segs[r].exit(), segs[r].internal_length(inst));
        let (s0, sl) = (segs[s].entry(), segs[s].exit());
        let base = -self.route_cost(r);
        let attach_in = self.attach(r, m, Direction::FromSource, s, s0).cost;
        let attach_out = self.attach(r, m, Direction::ToSink, s, sl).cost;
        let node = |i: usize| segs[s].visits[i].node;
        for a in 0..=len {
            for b in a + 1..=len + 1 {
                if a == 0 && b == len + 1 {
                    continue;
                }
                let mut shared = 0;
                let mut delta = base;
                let start = if a >= 1 {
                    shared += cum[a - 1];
                    delta += attach_in;
                    node(a - 1)
                } else {
                    DEPOT
                };
                let end = if b <= len {
                    shared += cum[len - 1] - cum[b - 1];
                    delta += attach_out;
                    node(b - 1)
                } else {
                    DEPOT
                };
                delta += costs.raw_grow(shared, l, m);
                delta += costs.raw(inst.dist(start, r0) + r_int + inst.dist(rl, end), m);
                out.push(Candidate {
                    kind: MoveKind::ParallelMerge,
                    params: MoveParams::Parallel {
                        route: r,
                        segment: s,
                        split: a,
                        dock: b,
                    },
                    delta,
                });
            }
        }
    }

    /// Builds the solution produced by a merge candidate.
    pub fn build(&mut self, params: MoveParams) -> Result<Solution> {
        let inst = self.inst;
        let mut segs: Vec<Segment> = self.sol.segments().to_vec();
        let mut paths: Vec<Vec<usize>> = self.sol.paths().to_vec();
        match params {
            MoveParams::Serial {
                route: r,
                segment: s,
                position: n,
            } => {
                self.check(r, s)?;
                let (pairs, unpaired) = self.pairing(r, s);
                let u = unpaired.len();
                if segs[s].mvs.len() + u > inst.max_platoon() {
                    return Err(Error::Infeasible("platoon would exceed the limit".into()));
                }
                let len = segs[s].visits.len();
                if n > len {
                    return Err(Error::Infeasible(format!("position {n} beyond segment end")));
                }
                let partner: HashMap<MvId, MvId> = pairs.iter().copied().collect();
                let moved: Vec<Visit> = segs[r]
                    .visits
                    .iter()
                    .map(|v| Visit {
                        node: v.node,
                        server: v.server.map(|k| partner.get(&k).copied().unwrap_or(k)),
                    })
                    .collect();
                let (r0, rl) = (segs[r].entry(), segs[r].exit());
                let (s0, sl) = (segs[s].entry(), segs[s].exit());
                segs[s].visits.splice(n..n, moved);
                segs[r].visits.clear();
                for &(k, _) in &pairs {
                    paths[k].clear();
                }
                if u > 0 {
                    let e = if n == 0 { r0 } else { s0 };
                    let x = if n == len { rl } else { sl };
                    let before = self.attach(r, u, Direction::FromSource, s, e).segments;
                    let after = self.attach(r, u, Direction::ToSink, s, x).segments;
                    let mut p = before;
                    p.push(s);
                    p.extend(after);
                    for &k in &unpaired {
                        paths[k] = p.clone();
                    }
                }
            }
            MoveParams::Parallel {
                route: r,
                segment: s,
                split: a,
                dock: b,
            } => {
                self.check(r, s)?;
                let m = segs[r].mvs.len();
                let len = segs[s].visits.len();
                if !(a < b && b <= len + 1) || (a == 0 && b == len + 1) {
                    return Err(Error::Infeasible("bad split or dock position".into()));
                }
                if segs[s].mvs.len() + m > inst.max_platoon() {
                    return Err(Error::Infeasible("platoon would exceed the limit".into()));
                }
                let (s0, sl) = (segs[s].entry(), segs[s].exit());
                let visits = std::mem::take(&mut segs[s].visits);
                let mut part = |v: &[Visit]| {
                    if v.is_empty() {
                        None
                    } else {
                        segs.push(Segment {
                            mvs: Default::default(),
                            visits: v.to_vec(),
                        });
                        Some(segs.len() - 1)
                    }
                };
                let s1 = part(&visits[..a]);
                let s2 = part(&visits[a..b - 1]);
                let s3 = part(&visits[b - 1..]);
                let pieces: Vec<usize> = [s1, s2, s3].into_iter().flatten().collect();
                for p in paths.iter_mut() {
                    if let Some(at) = p.iter().position(|&x| x == s) {
                        p.splice(at..=at, pieces.iter().copied());
                    }
                }
                let mut p = Vec::new();
                if let Some(s1) = s1 {
                    p.extend(self.attach(r, m, Direction::FromSource, s, s0).segments);
                    p.push(s1);
                }
                p.push(r);
                if let Some(s3) = s3 {
                    p.push(s3);
                    p.extend(self.attach(r, m, Direction::ToSink, s, sl).segments);
                }
                for k in self.sol.segments()[r].mvs.iter() {
                    paths[k] = p.clone();
                }
            }
            MoveParams::Relocate { .. } => unreachable!("relocates are built elsewhere"),
        }
        Solution::from_parts(segs, paths, inst)
    }

    fn check(&self, r: usize, s: usize) -> Result<()> {
        let n = self.sol.segments().len();
        if r >= n || s >= n || r == s || !self.sol.is_single_brunch(r) {
            return Err(Error::Infeasible("route must be a single-brunch route distinct from the segment".into()));
        }
        if self.topo.pos[s] == usize::MAX {
            return Err(Error::Infeasible("segment is not in use".into()));
        }
        Ok(())
    }
}

/// Candidate merges of every single-brunch route into every other segment.
pub(crate) fn merge_candidates(ctx: &mut MergeCtx<'_>, out: &mut Vec<Candidate>) {
    let routes = ctx.sol.single_brunch_routes();
    for &r in &routes {
        for &s in &ctx.topo.order.clone() {
            if s == r {
                continue;
            }
            ctx.serial(r, s, out);
            ctx.parallel(r, s, out);
        }
    }
}
