//! Solution representation: segments linked in a source-to-sink DAG, plus a
//! per-vehicle row of segments (the Gantt view).
//!
//! A segment is a customer sequence traversed by one platoon between two
//! docking/splitting events. The Gantt rows (one ordered list of segments per
//! modular vehicle) are the ground truth; DAG arcs and platoon membership are
//! derived from them, so the two views can never disagree in memory.
//!
//! Solutions are kept in canonical form: empty segments are dropped, chains of
//! segments with identical platoons are merged, and segments and vehicles are
//! renumbered in a deterministic order.

mod doc;
mod routes;
mod validate;

pub use doc::{doc_cost, SegmentDoc, SolutionDoc, VisitDoc};
pub use routes::{drop_repeats, mv_routes, validate_vrp_routes, VrpRoutes};
pub use validate::{validate, validate_doc, ValidationReport, Violation, ViolationCode};

use std::collections::BTreeMap;

use crate::cost::Cost;
use crate::error::{Error, Result};
use crate::instance::{Instance, NodeId, DEPOT, MAX_FLEET};

pub type MvId = usize;

/// Set of modular vehicles, as a bitset over ids below [`MAX_FLEET`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MvSet(u128);

impl MvSet {
    pub const EMPTY: MvSet = MvSet(0);

    pub fn single(mv: MvId) -> Self {
        debug_assert!(mv < MAX_FLEET);
        MvSet(1u128 << mv)
    }

    pub fn bits(self) -> u128 {
        self.0
    }

    #[inline]
    pub fn contains(self, mv: MvId) -> bool {
        mv < MAX_FLEET && self.0 >> mv & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, mv: MvId) {
        self.0 |= 1u128 << mv;
    }

    #[inline]
    pub fn remove(&mut self, mv: MvId) {
        self.0 &= !(1u128 << mv);
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: MvSet) -> MvSet {
        MvSet(self.0 | other.0)
    }

    pub fn intersection(self, other: MvSet) -> MvSet {
        MvSet(self.0 & other.0)
    }

    pub fn iter(self) -> impl Iterator<Item = MvId> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(i)
            }
        })
    }
}

impl FromIterator<MvId> for MvSet {
    fn from_iter<T: IntoIterator<Item = MvId>>(iter: T) -> Self {
        let mut s = MvSet::EMPTY;
        for mv in iter {
            s.insert(mv);
        }
        s
    }
}

/// A customer visit inside a segment. `server` is `None` for a pass-through
/// visit (the node is served by a vehicle of another platoon).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Visit {
    pub node: NodeId,
    pub server: Option<MvId>,
}

impl Visit {
    pub fn served(node: NodeId, mv: MvId) -> Self {
        Self { node, server: Some(mv) }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segment {
    pub mvs: MvSet,
    pub visits: Vec<Visit>,
}

impl Segment {
    pub fn entry(&self) -> NodeId {
        self.visits[0].node
    }

    pub fn exit(&self) -> NodeId {
        self.visits[self.visits.len() - 1].node
    }

    pub fn is_empty(&self) -> bool {
        self.visits.is_empty()
    }

    /// Length of the arcs between consecutive visits.
    pub fn internal_length(&self, inst: &Instance) -> i64 {
        self.visits.windows(2).map(|w| inst.dist(w[0].node, w[1].node)).sum()
    }
}

/// Endpoint of a DAG arc. `Source` is the depot dummy s_0 and `Sink` is s_0'.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SegRef {
    Source,
    Seg(usize),
    Sink,
}

/// Arcs of the DAG with the number of vehicles travelling on each, plus
/// per-segment adjacency and a topological order.
#[derive(Debug, Clone)]
pub struct Topology {
    pub arcs: Vec<(SegRef, SegRef, usize)>,
    pub ins: Vec<Vec<(SegRef, usize)>>,
    pub outs: Vec<Vec<(SegRef, usize)>>,
    /// Live segments in topological order.
    pub order: Vec<usize>,
    /// Position of each segment in `order`; `usize::MAX` for dead segments.
    pub pos: Vec<usize>,
}

impl Topology {
    pub fn build(segments: &[Segment], paths: &[Vec<usize>]) -> Result<Self> {
        let mut raw: Vec<(SegRef, SegRef)> = Vec::new();
        for path in paths.iter().filter(|p| !p.is_empty()) {
            let mut prev = SegRef::Source;
            for &s in path {
                raw.push((prev, SegRef::Seg(s)));
                prev = SegRef::Seg(s);
            }
            raw.push((prev, SegRef::Sink));
        }
        raw.sort_unstable();
        let mut arcs: Vec<(SegRef, SegRef, usize)> = Vec::new();
        for (a, b) in raw {
            match arcs.last_mut() {
                Some(last) if last.0 == a && last.1 == b => last.2 += 1,
                _ => arcs.push((a, b, 1)),
            }
        }
        let n = segments.len();
        let mut ins = vec![Vec::new(); n];
        let mut outs = vec![Vec::new(); n];
        let mut indeg = vec![0usize; n];
        let mut live = vec![false; n];
        for &(a, b, w) in &arcs {
            if let SegRef::Seg(i) = a {
                outs[i].push((b, w));
                live[i] = true;
            }
            if let SegRef::Seg(j) = b {
                ins[j].push((a, w));
                live[j] = true;
                if a != SegRef::Source {
                    indeg[j] += 1;
                }
            }
        }
        // Kahn's algorithm, smallest (entry node, platoon, index) first
        let key = |i: usize| {
            let s = &segments[i];
            (s.visits.first().map(|v| v.node).unwrap_or(usize::MAX), s.mvs, i)
        };
        let mut ready: std::collections::BTreeSet<(NodeId, MvSet, usize)> =
            (0..n).filter(|&i| live[i] && indeg[i] == 0).map(key).collect();
        let mut order = Vec::with_capacity(n);
        let mut pos = vec![usize::MAX; n];
        while let Some(k) = ready.pop_first() {
            let i = k.2;
            pos[i] = order.len();
            order.push(i);
            for &(b, _) in &outs[i] {
                if let SegRef::Seg(j) = b {
                    indeg[j] -= 1;
                    if indeg[j] == 0 {
                        ready.insert(key(j));
                    }
                }
            }
        }
        if order.len() != live.iter().filter(|&&l| l).count() {
            return Err(Error::MalformedSolution("segment graph has a cycle".into()));
        }
        Ok(Self {
            arcs,
            ins,
            outs,
            order,
            pos,
        })
    }
}

/// Node at which vehicles leave `r` (depot for the source).
#[inline]
pub fn exit_node(segments: &[Segment], r: SegRef) -> NodeId {
    match r {
        SegRef::Seg(i) => segments[i].exit(),
        _ => DEPOT,
    }
}

/// Node at which vehicles enter `r` (depot for the sink).
#[inline]
pub fn entry_node(segments: &[Segment], r: SegRef) -> NodeId {
    match r {
        SegRef::Seg(i) => segments[i].entry(),
        _ => DEPOT,
    }
}

/// Platoon cost of a raw structure, without checking the platoon limit.
pub fn raw_cost(segments: &[Segment], topo: &Topology, inst: &Instance) -> Cost {
    let costs = inst.costs();
    let mut total = Cost::ZERO;
    for s in segments {
        if s.visits.len() > 1 {
            total += costs.raw(s.internal_length(inst), s.mvs.len());
        }
    }
    for &(a, b, w) in &topo.arcs {
        total += costs.raw(inst.dist(exit_node(segments, a), entry_node(segments, b)), w);
    }
    total
}

/// A complete solution with its cached exact cost.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    segments: Vec<Segment>,
    paths: Vec<Vec<usize>>,
    cost: Cost,
}

impl Solution {
    /// All vehicles idle.
    pub fn empty(inst: &Instance) -> Self {
        Self {
            segments: Vec::new(),
            paths: vec![Vec::new(); inst.fleet_size()],
            cost: Cost::ZERO,
        }
    }

    /// Builds a canonical solution from segments and per-vehicle segment
    /// paths (without the dummy source/sink). Platoon sets are recomputed from
    /// the paths.
    pub fn from_parts(segments: Vec<Segment>, mut paths: Vec<Vec<usize>>, inst: &Instance) -> Result<Self> {
        if paths.len() > inst.fleet_size() {
            return Err(Error::InvariantViolation(format!(
                "{} vehicle rows for a fleet of {}",
                paths.len(),
                inst.fleet_size()
            )));
        }
        paths.resize(inst.fleet_size(), Vec::new());
        for p in &paths {
            if p.iter().any(|&s| s >= segments.len()) {
                return Err(Error::MalformedSolution("path refers to a missing segment".into()));
            }
        }
        let mut sol = Self {
            segments,
            paths,
            cost: Cost::ZERO,
        };
        sol.normalize(inst)?;
        Ok(sol)
    }

    /// Builds a solution from per-vehicle node routes. Each route lists the
    /// customers the vehicle visits in order, flagged `true` where it serves
    /// them. Vehicles sharing an arc travel as one platoon on it.
    pub fn from_mv_routes(inst: &Instance, routes: &[Vec<(NodeId, bool)>]) -> Result<Self> {
        if routes.len() > inst.fleet_size() {
            return Err(Error::InvariantViolation("more routes than vehicles".into()));
        }
        let n = inst.dimension();
        // visitors[v] = (mv, pred, succ, serves)
        let mut visitors: Vec<Vec<(MvId, NodeId, NodeId, bool)>> = vec![Vec::new(); n];
        for (k, route) in routes.iter().enumerate() {
            for (i, &(v, serves)) in route.iter().enumerate() {
                if v == DEPOT || v >= n {
                    return Err(Error::UnknownCustomer(v));
                }
                let pred = if i == 0 { DEPOT } else { route[i - 1].0 };
                let succ = route.get(i + 1).map(|x| x.0).unwrap_or(DEPOT);
                visitors[v].push((k, pred, succ, serves));
            }
        }
        let mut segments = Vec::new();
        // segment(s) each vehicle passes at each node: (arrive, leave)
        let mut at: BTreeMap<(MvId, NodeId), (usize, usize)> = BTreeMap::new();
        for (v, vis) in visitors.iter().enumerate() {
            if vis.is_empty() {
                continue;
            }
            let servers: Vec<MvId> = vis.iter().filter(|x| x.3).map(|x| x.0).collect();
            let make = |group: &[MvId], with_servers: bool| {
                let mut visits: Vec<Visit> = Vec::new();
                if with_servers {
                    for &k in servers.iter().filter(|k| group.contains(k)) {
                        visits.push(Visit::served(v, k));
                    }
                }
                if visits.is_empty() {
                    visits.push(Visit { node: v, server: None });
                }
                Segment {
                    mvs: group.iter().copied().collect(),
                    visits,
                }
            };
            if vis.len() <= inst.max_platoon() {
                let group: Vec<MvId> = vis.iter().map(|x| x.0).collect();
                let id = segments.len();
                segments.push(make(&group, true));
                for x in vis {
                    at.insert((x.0, v), (id, id));
                }
            } else {
                // too many vehicles meet here: keep arriving and leaving
                // groups apart, linked by zero-length arcs
                let mut by_pred: BTreeMap<NodeId, Vec<MvId>> = BTreeMap::new();
                let mut by_succ: BTreeMap<NodeId, Vec<MvId>> = BTreeMap::new();
                for x in vis {
                    by_pred.entry(x.1).or_default().push(x.0);
                    by_succ.entry(x.2).or_default().push(x.0);
                }
                let mut arrive = BTreeMap::new();
                for group in by_pred.values() {
                    let id = segments.len();
                    segments.push(make(group, true));
                    for &k in group {
                        arrive.insert(k, id);
                    }
                }
                for group in by_succ.values() {
                    let id = segments.len();
                    segments.push(make(group, false));
                    for &k in group {
                        at.insert((k, v), (arrive[&k], id));
                    }
                }
            }
        }
        let mut paths = vec![Vec::new(); inst.fleet_size()];
        for (k, route) in routes.iter().enumerate() {
            for &(v, _) in route {
                let (a, b) = at[&(k, v)];
                paths[k].push(a);
                if b != a {
                    paths[k].push(b);
                }
            }
        }
        Self::from_parts(segments, paths, inst)
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    /// Gantt rows: segment indices per vehicle, without the dummy ends.
    pub fn paths(&self) -> &[Vec<usize>] {
        &self.paths
    }

    pub fn cost(&self) -> Cost {
        self.cost
    }

    pub fn fleet_size(&self) -> usize {
        self.paths.len()
    }

    pub fn topology(&self) -> Topology {
        Topology::build(&self.segments, &self.paths).expect("canonical solutions are acyclic")
    }

    pub fn used_mvs(&self) -> impl Iterator<Item = MvId> + '_ {
        (0..self.paths.len()).filter(|&k| !self.paths[k].is_empty())
    }

    /// Demand served by each vehicle.
    pub fn loads(&self, inst: &Instance) -> Vec<u32> {
        let mut loads = vec![0u32; self.paths.len()];
        for s in &self.segments {
            for v in &s.visits {
                if let Some(k) = v.server {
                    loads[k] += inst.demand(v.node);
                }
            }
        }
        loads
    }

    /// True when the segment is a whole source-to-sink route with no docking
    /// or splitting.
    pub fn is_single_brunch(&self, seg: usize) -> bool {
        let s = &self.segments[seg];
        !s.mvs.is_empty() && s.mvs.iter().all(|k| self.paths[k].len() == 1)
    }

    /// Indices of single-brunch route segments.
    pub fn single_brunch_routes(&self) -> Vec<usize> {
        (0..self.segments.len()).filter(|&i| self.is_single_brunch(i)).collect()
    }

    /// Recomputes the cost, enforcing the platoon limit.
    pub fn total_cost(&self, inst: &Instance) -> Result<Cost> {
        let topo = Topology::build(&self.segments, &self.paths)?;
        check_platoons(&self.segments, &topo, inst)?;
        Ok(raw_cost(&self.segments, &topo, inst))
    }

    /// Restores canonical form and recomputes the cached cost.
    pub(crate) fn normalize(&mut self, inst: &Instance) -> Result<()> {
        let segments = &mut self.segments;
        let paths = &mut self.paths;
        // empty segments carry nobody anywhere
        for p in paths.iter_mut() {
            p.retain(|&s| !segments[s].visits.is_empty());
        }
        recompute_platoons(segments, paths);
        merge_chains(segments, paths)?;
        let topo = Topology::build(segments, paths)?;

        // renumber segments in topological order
        let mut remap = vec![usize::MAX; segments.len()];
        let mut fresh = Vec::with_capacity(topo.order.len());
        for (new, &old) in topo.order.iter().enumerate() {
            remap[old] = new;
            fresh.push(std::mem::replace(
                &mut segments[old],
                Segment {
                    mvs: MvSet::EMPTY,
                    visits: Vec::new(),
                },
            ));
        }
        for p in paths.iter_mut() {
            for s in p.iter_mut() {
                *s = remap[*s];
            }
        }

        // relabel vehicles: used ones by their row, idle ones last
        let k = paths.len();
        let mut served: Vec<Vec<NodeId>> = vec![Vec::new(); k];
        for p in paths.iter() {
            for &s in p {
                for v in &fresh[s].visits {
                    if let Some(m) = v.server {
                        if m < k && !served[m].contains(&v.node) {
                            served[m].push(v.node);
                        }
                    }
                }
            }
        }
        let mut ids: Vec<MvId> = (0..k).collect();
        ids.sort_by(|&a, &b| {
            paths[a]
                .is_empty()
                .cmp(&paths[b].is_empty())
                .then_with(|| paths[a].cmp(&paths[b]))
                .then_with(|| served[a].cmp(&served[b]))
                .then_with(|| a.cmp(&b))
        });
        let mut relabel = vec![0; k];
        for (new, &old) in ids.iter().enumerate() {
            relabel[old] = new;
        }
        let mut new_paths = vec![Vec::new(); k];
        for (old, p) in paths.iter_mut().enumerate() {
            new_paths[relabel[old]] = std::mem::take(p);
        }
        for s in fresh.iter_mut() {
            s.mvs = s.mvs.iter().map(|m| relabel[m]).collect();
            for v in s.visits.iter_mut() {
                if let Some(m) = v.server.as_mut() {
                    if *m < k {
                        *m = relabel[*m];
                    }
                }
            }
        }
        *segments = fresh;
        *paths = new_paths;
        let topo = Topology::build(segments, paths)?;
        self.cost = raw_cost(segments, &topo, inst);
        Ok(())
    }
}

/// Platoon membership derived from the vehicle rows.
pub(crate) fn recompute_platoons(segments: &mut [Segment], paths: &[Vec<usize>]) {
    for s in segments.iter_mut() {
        s.mvs = MvSet::EMPTY;
    }
    for (k, p) in paths.iter().enumerate() {
        for &s in p {
            segments[s].mvs.insert(k);
        }
    }
}

/// Merges every segment whose only successor has it as only predecessor.
fn merge_chains(segments: &mut [Segment], paths: &mut [Vec<usize>]) -> Result<()> {
    loop {
        let topo = Topology::build(segments, paths)?;
        let mut merged = false;
        for &p in &topo.order {
            if topo.outs[p].len() != 1 {
                continue;
            }
            let SegRef::Seg(q) = topo.outs[p][0].0 else {
                continue;
            };
            if topo.ins[q].len() != 1 {
                continue;
            }
            let tail = std::mem::take(&mut segments[q].visits);
            let head = &mut segments[p].visits;
            let mut rest = tail.as_slice();
            if let (Some(last), Some(first)) = (head.last().copied(), rest.first().copied()) {
                if last.node == first.node && (last.server.is_none() || first.server.is_none()) {
                    if last.server.is_none() {
                        head.pop();
                    } else {
                        rest = &rest[1..];
                    }
                }
            }
            head.extend_from_slice(rest);
            for path in paths.iter_mut() {
                path.retain(|&s| s != q);
            }
            segments[q].mvs = MvSet::EMPTY;
            merged = true;
            break;
        }
        if !merged {
            return Ok(());
        }
    }
}

pub(crate) fn check_platoons(segments: &[Segment], topo: &Topology, inst: &Instance) -> Result<()> {
    let max = inst.max_platoon();
    for s in segments {
        if s.mvs.len() > max {
            return Err(Error::PlatoonTooLarge { size: s.mvs.len(), max });
        }
    }
    for &(_, _, w) in &topo.arcs {
        if w > max {
            return Err(Error::PlatoonTooLarge { size: w, max });
        }
    }
    Ok(())
}

/// Directed node arcs traversed by any vehicle, with the depot written as 0
/// at both ends.
pub fn node_arcs(sol: &Solution) -> Vec<(NodeId, NodeId)> {
    let segs = sol.segments();
    let mut arcs = Vec::new();
    for s in segs {
        for w in s.visits.windows(2) {
            arcs.push((w[0].node, w[1].node));
        }
    }
    for (a, b, _) in sol.topology().arcs {
        arcs.push((exit_node(segs, a), entry_node(segs, b)));
    }
    arcs.sort_unstable();
    arcs.dedup();
    arcs
}

#[cfg(test)]
mod tests;
