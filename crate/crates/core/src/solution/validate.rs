//! Feasibility checks for solution documents.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use super::doc::{doc_cost, inner_path};
use super::{MvId, Solution, SolutionDoc};
use crate::cost::Cost;
use crate::instance::Instance;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ViolationCode {
    UnservedCustomer,
    MultiServedCustomer,
    CapacityBreach,
    PlatoonOverflow,
    DagCycle,
    GanttMismatch,
    MvConservation,
    CostMismatch,
}

impl ViolationCode {
    pub fn name(self) -> &'static str {
        match self {
            ViolationCode::UnservedCustomer => "UnservedCustomer",
            ViolationCode::MultiServedCustomer => "MultiServedCustomer",
            ViolationCode::CapacityBreach => "CapacityBreach",
            ViolationCode::PlatoonOverflow => "PlatoonOverflow",
            ViolationCode::DagCycle => "DagCycle",
            ViolationCode::GanttMismatch => "GanttMismatch",
            ViolationCode::MvConservation => "MvConservation",
            ViolationCode::CostMismatch => "CostMismatch",
        }
    }
}

impl fmt::Display for ViolationCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub code: ViolationCode,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.code, self.detail)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }

    /// Distinct codes present, in a fixed order.
    pub fn codes(&self) -> Vec<ViolationCode> {
        self.violations.iter().map(|v| v.code).collect::<BTreeSet<_>>().into_iter().collect()
    }

    fn push(&mut self, code: ViolationCode, detail: String) {
        self.violations.push(Violation { code, detail });
    }
}

pub fn validate(sol: &Solution, inst: &Instance) -> ValidationReport {
    validate_doc(&sol.to_doc(inst), inst)
}

pub fn validate_doc(doc: &SolutionDoc, inst: &Instance) -> ValidationReport {
    use ViolationCode::*;
    let mut report = ValidationReport::default();
    let n = inst.dimension();
    let k_max = inst.fleet_size();

    // structure
    let mut by_id: HashMap<usize, usize> = HashMap::new();
    for (i, s) in doc.segments.iter().enumerate() {
        if s.id == 0 || by_id.insert(s.id, i).is_some() {
            report.push(GanttMismatch, format!("segment={} id reserved or repeated", s.id));
        }
        if s.customers.is_empty() {
            report.push(GanttMismatch, format!("segment={} has no customers", s.id));
        }
        for c in &s.customers {
            if c.node == 0 || c.node >= n {
                report.push(GanttMismatch, format!("segment={} node={} is not a customer", s.id, c.node));
            }
        }
        for &k in &s.mvs {
            if k >= k_max {
                report.push(GanttMismatch, format!("segment={} mv={} outside fleet of {}", s.id, k, k_max));
            }
        }
    }
    let structural = !report.ok();

    // service
    let mut servers: Vec<Vec<MvId>> = vec![Vec::new(); n];
    let mut loads: BTreeMap<MvId, u64> = BTreeMap::new();
    for s in &doc.segments {
        for c in s.customers.iter().filter(|c| c.node > 0 && c.node < n) {
            if let Some(k) = c.serving_mv {
                servers[c.node].push(k);
                *loads.entry(k).or_default() += inst.demand(c.node) as u64;
                if !s.mvs.contains(&k) {
                    report.push(MvConservation, format!("segment={} node={} served by mv={} outside its platoon", s.id, c.node, k));
                }
            }
        }
    }
    for (v, list) in servers.iter().enumerate().skip(1) {
        match list.len() {
            0 => report.push(UnservedCustomer, format!("customer={v}")),
            1 => {}
            _ => report.push(MultiServedCustomer, format!("customer={v} servers={list:?}")),
        }
    }
    for (&k, &load) in &loads {
        if load > inst.capacity() as u64 {
            report.push(CapacityBreach, format!("mv={} load={} capacity={}", k, load, inst.capacity()));
        }
    }

    // platoon sizes
    let max = inst.max_platoon();
    for s in &doc.segments {
        let distinct: BTreeSet<_> = s.mvs.iter().collect();
        if distinct.len() > max {
            report.push(PlatoonOverflow, format!("segment={} size={} max={}", s.id, distinct.len(), max));
        }
    }
    let mut arc_use: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for path in doc.mv_paths.values() {
        for w in path.windows(2) {
            *arc_use.entry((w[0], w[1])).or_default() += 1;
        }
    }
    for (&(a, b), &w) in &arc_use {
        if w > max {
            report.push(PlatoonOverflow, format!("arc={}->{} size={} max={}", a, b, w, max));
        }
    }

    // DAG: node 0 = source, node m+1 = sink, segment i -> i + 1
    let m = doc.segments.len();
    let sink = m + 1;
    let tail = |id: usize| if id == 0 { Some(0) } else { by_id.get(&id).map(|&i| i + 1) };
    let head = |id: usize| if id == 0 { Some(sink) } else { by_id.get(&id).map(|&i| i + 1) };
    let mut adj = vec![Vec::new(); m + 2];
    let arc_set: BTreeSet<(usize, usize)> = doc.dag_arcs.iter().map(|a| (a[0], a[1])).collect();
    for &(a, b) in &arc_set {
        match (tail(a), head(b)) {
            (Some(x), Some(y)) => adj[x].push(y),
            _ => report.push(GanttMismatch, format!("arc={}->{} names a missing segment", a, b)),
        }
    }
    let mut indeg = vec![0usize; m + 2];
    for outs in &adj {
        for &y in outs {
            indeg[y] += 1;
        }
    }
    let mut stack: Vec<usize> = (0..m + 2).filter(|&x| indeg[x] == 0).collect();
    let mut seen = 0;
    while let Some(x) = stack.pop() {
        seen += 1;
        for &y in &adj[x] {
            indeg[y] -= 1;
            if indeg[y] == 0 {
                stack.push(y);
            }
        }
    }
    let acyclic = seen == m + 2;
    if !acyclic {
        report.push(DagCycle, "segment arcs contain a cycle".into());
    } else {
        let forward = reach(&adj, 0);
        let mut radj = vec![Vec::new(); m + 2];
        for (x, outs) in adj.iter().enumerate() {
            for &y in outs {
                radj[y].push(x);
            }
        }
        let backward = reach(&radj, sink);
        for (i, s) in doc.segments.iter().enumerate() {
            if !forward[i + 1] || !backward[i + 1] {
                report.push(DagCycle, format!("segment={} not on a source-sink path", s.id));
            }
        }
    }

    // Gantt rows against the DAG and the platoon columns
    let gantt_before = report.violations.iter().filter(|v| v.code == GanttMismatch).count();
    let mut column: HashMap<usize, BTreeSet<MvId>> = HashMap::new();
    for (&k, path) in &doc.mv_paths {
        if k >= k_max {
            report.push(GanttMismatch, format!("mv={} outside fleet of {}", k, k_max));
        }
        let Some(inner) = inner_path(path) else {
            report.push(GanttMismatch, format!("mv={} path must run from 0 to 0", k));
            continue;
        };
        if inner.is_empty() {
            continue;
        }
        let distinct: BTreeSet<_> = inner.iter().collect();
        if distinct.len() != inner.len() {
            report.push(GanttMismatch, format!("mv={} repeats a segment", k));
        }
        for &id in inner {
            if !by_id.contains_key(&id) {
                report.push(GanttMismatch, format!("mv={} path names missing segment={}", k, id));
            }
            column.entry(id).or_default().insert(k);
        }
        for w in path.windows(2) {
            if !arc_set.contains(&(w[0], w[1])) {
                report.push(GanttMismatch, format!("mv={} uses arc={}->{} absent from the DAG", k, w[0], w[1]));
            }
        }
    }
    for s in &doc.segments {
        let declared: BTreeSet<MvId> = s.mvs.iter().copied().collect();
        let rows = column.remove(&s.id).unwrap_or_default();
        if declared != rows {
            report.push(GanttMismatch, format!("segment={} mvs={:?} but rows={:?}", s.id, declared, rows));
        }
    }
    let gantt_ok = report.violations.iter().filter(|v| v.code == GanttMismatch).count() == gantt_before;

    // conservation over DAG arcs; implied by consistent rows, so only
    // checked when those are consistent
    if gantt_ok && acyclic && !structural {
        let mvs_of = |id: usize| -> BTreeSet<MvId> { doc.segments[by_id[&id]].mvs.iter().copied().collect() };
        for s in &doc.segments {
            let own = mvs_of(s.id);
            let mut inflow = BTreeSet::new();
            let mut outflow = BTreeSet::new();
            for &(a, b) in &arc_set {
                if b == s.id {
                    inflow.extend(if a == 0 { own.clone() } else { &mvs_of(a) & &own });
                }
                if a == s.id {
                    outflow.extend(if b == 0 { own.clone() } else { &mvs_of(b) & &own });
                }
            }
            if inflow != own || outflow != own {
                report.push(MvConservation, format!("segment={} platoon not conserved", s.id));
            }
        }
    }

    // cost
    let declared = Cost::parse_decimal(&doc.cost, inst.costs().den());
    match (declared, doc_cost(doc, inst)) {
        (Some(d), Some(actual)) if d == actual => {}
        (Some(_), Some(actual)) => report.push(CostMismatch, format!("declared={} actual={}", doc.cost, inst.fmt_cost(actual))),
        (None, _) => report.push(CostMismatch, format!("declared={} is not an exact cost", doc.cost)),
        (Some(_), None) => {}
    }
    report
}

fn reach(adj: &[Vec<usize>], start: usize) -> Vec<bool> {
    let mut seen = vec![false; adj.len()];
    let mut stack = vec![start];
    seen[start] = true;
    while let Some(x) = stack.pop() {
        for &y in &adj[x] {
            if !seen[y] {
                seen[y] = true;
                stack.push(y);
            }
        }
    }
    seen
}
