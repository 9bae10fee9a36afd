//! JSON solution file.
//!
//! Segment ids start at 1; id 0 stands for the depot dummies (the source when
//! it appears as an arc tail or path head, the sink as an arc head or path
//! tail).

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::{MvId, MvSet, Segment, Solution, Visit};
use crate::cost::Cost;
use crate::error::{Error, Result};
use crate::instance::{Instance, NodeId, DEPOT};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VisitDoc {
    pub node: NodeId,
    pub serving_mv: Option<MvId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SegmentDoc {
    pub id: usize,
    pub mvs: Vec<MvId>,
    pub customers: Vec<VisitDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionDoc {
    pub instance_name: String,
    pub cost: String,
    pub segments: Vec<SegmentDoc>,
    pub dag_arcs: Vec<[usize; 2]>,
    pub mv_paths: BTreeMap<MvId, Vec<usize>>,
}

impl SolutionDoc {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("solution documents serialize");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::MalformedSolution(e.to_string()))
    }

    /// Rebuilds the in-memory solution. The document should have passed
    /// [`super::validate_doc`]; structural problems are still reported.
    pub fn to_solution(&self, inst: &Instance) -> Result<Solution> {
        let index: HashMap<usize, usize> = self.segments.iter().enumerate().map(|(i, s)| (s.id, i)).collect();
        let segments = self
            .segments
            .iter()
            .map(|s| Segment {
                mvs: MvSet::EMPTY,
                visits: s
                    .customers
                    .iter()
                    .map(|c| Visit {
                        node: c.node,
                        server: c.serving_mv,
                    })
                    .collect(),
            })
            .collect();
        let mut paths = vec![Vec::new(); inst.fleet_size()];
        for (&k, path) in &self.mv_paths {
            if k >= inst.fleet_size() {
                return Err(Error::MalformedSolution(format!("mv {k} outside the fleet")));
            }
            let inner = inner_path(path).ok_or_else(|| Error::MalformedSolution(format!("path of mv {k}")))?;
            paths[k] = inner
                .iter()
                .map(|id| index.get(id).copied())
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| Error::MalformedSolution(format!("path of mv {k} names a missing segment")))?;
        }
        Solution::from_parts(segments, paths, inst)
    }
}

/// Strips the depot ends off a written path.
pub(crate) fn inner_path(path: &[usize]) -> Option<&[usize]> {
    if path.len() < 2 || path[0] != 0 || path[path.len() - 1] != 0 {
        return None;
    }
    let inner = &path[1..path.len() - 1];
    if inner.contains(&0) {
        return None;
    }
    Some(inner)
}

/// Cost implied by a document: each segment's internal arcs priced by its
/// declared platoon, linking arcs by how many vehicle paths use them. `None`
/// when paths name missing segments or a segment has no customers.
pub fn doc_cost(doc: &SolutionDoc, inst: &Instance) -> Option<Cost> {
    let costs = inst.costs();
    let mut by_id: HashMap<usize, &SegmentDoc> = HashMap::new();
    for s in &doc.segments {
        if s.customers.is_empty() || s.customers.iter().any(|c| c.node >= inst.dimension()) {
            return None;
        }
        by_id.insert(s.id, s);
    }
    let mut total = Cost::ZERO;
    for s in &doc.segments {
        let d: i64 = s.customers.windows(2).map(|w| inst.dist(w[0].node, w[1].node)).sum();
        total += costs.raw(d, s.mvs.len());
    }
    let mut counts: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for path in doc.mv_paths.values() {
        for w in path.windows(2) {
            *counts.entry((w[0], w[1])).or_default() += 1;
        }
    }
    for (&(a, b), &w) in &counts {
        let from = if a == 0 {
            DEPOT
        } else {
            by_id.get(&a)?.customers.last()?.node
        };
        let to = if b == 0 {
            DEPOT
        } else {
            by_id.get(&b)?.customers.first()?.node
        };
        total += costs.raw(inst.dist(from, to), w);
    }
    Some(total)
}

impl Solution {
    pub fn to_doc(&self, inst: &Instance) -> SolutionDoc {
        let segments = self
            .segments
            .iter()
            .enumerate()
            .map(|(i, s)| SegmentDoc {
                id: i + 1,
                mvs: s.mvs.iter().collect(),
                customers: s
                    .visits
                    .iter()
                    .map(|v| VisitDoc {
                        node: v.node,
                        serving_mv: v.server,
                    })
                    .collect(),
            })
            .collect();
        let id = |r: super::SegRef| match r {
            super::SegRef::Seg(i) => i + 1,
            _ => 0,
        };
        let dag_arcs = self.topology().arcs.iter().map(|&(a, b, _)| [id(a), id(b)]).collect();
        let mv_paths = self
            .used_mvs()
            .map(|k| {
                let mut p = vec![0];
                p.extend(self.paths[k].iter().map(|s| s + 1));
                p.push(0);
                (k, p)
            })
            .collect();
        SolutionDoc {
            instance_name: inst.name().to_string(),
            cost: inst.fmt_cost(self.cost),
            segments,
            dag_arcs,
            mv_paths,
        }
    }
}
