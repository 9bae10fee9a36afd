//! Neighborhood operators and move selection.
//!
//! Candidate moves are priced in closed form, sorted by cost change, and
//! materialized in that order until one passes the tabu test. Every
//! materialized move is checked to land exactly on `cost + delta`.

mod attach;
mod merge;
mod pairing;
mod relocate;
mod tabu;

pub use attach::{cheapest_attach_path, AttachPath, Direction};
pub use pairing::{max_pairing_exhaustive, pair_mvs, PairSet};
pub use relocate::RelocateTarget;
pub use tabu::{Arc, TabuList, TabuState};

use std::collections::BTreeSet;
use std::fmt;

use crate::cost::Cost;
use crate::error::{Error, Result};
use crate::instance::{Instance, NodeId};
use crate::solution::{node_arcs, MvId, Solution};
use merge::{merge_candidates, MergeCtx};
use relocate::Removal;

/// Operator kinds, in tie-breaking order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MoveKind {
    SerialMerge,
    ParallelMerge,
    RelocateIntraSegment,
    RelocateIntraMv,
    RelocateInterMv,
}

impl MoveKind {
    pub fn name(self) -> &'static str {
        match self {
            MoveKind::SerialMerge => "SerialMerge",
            MoveKind::ParallelMerge => "ParallelMerge",
            MoveKind::RelocateIntraSegment => "RelocateIntraSegment",
            MoveKind::RelocateIntraMv => "RelocateIntraMv",
            MoveKind::RelocateInterMv => "RelocateInterMv",
        }
    }

    pub fn is_merge(self) -> bool {
        matches!(self, MoveKind::SerialMerge | MoveKind::ParallelMerge)
    }

    pub fn tabu_list(self) -> TabuList {
        if self.is_merge() {
            TabuList::Merge
        } else {
            TabuList::Relocate
        }
    }
}

impl fmt::Display for MoveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Operator parameters. Segment indices refer to the source solution;
/// relocate positions refer to the target segment after the customer's
/// removal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MoveParams {
    Serial {
        route: usize,
        segment: usize,
        position: usize,
    },
    Parallel {
        route: usize,
        segment: usize,
        split: usize,
        dock: usize,
    },
    Relocate {
        customer: NodeId,
        segment: Option<usize>,
        position: usize,
        server: MvId,
    },
}

/// A priced, not yet materialized move.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Candidate {
    pub kind: MoveKind,
    pub params: MoveParams,
    pub delta: Cost,
}

/// A materialized move.
#[derive(Debug, Clone)]
pub struct Move {
    pub kind: MoveKind,
    pub params: MoveParams,
    pub delta: Cost,
    /// Node arcs the move removes; these become tabu.
    pub touched_arcs: Vec<Arc>,
    /// Node arcs the move introduces; checked against the tabu list.
    pub created_arcs: Vec<Arc>,
    pub result: Solution,
}

impl Move {
    pub fn is_tabu(&self, tabu: &TabuState) -> bool {
        tabu.any_tabu(self.kind.tabu_list(), &self.created_arcs)
    }

    /// Tabu moves are admissible only if they beat the best cost so far.
    pub fn admissible(&self, tabu: &TabuState, source_cost: Cost, best: Cost) -> bool {
        !self.is_tabu(tabu) || source_cost + self.delta < best
    }
}

/// Returns the move's resulting solution.
pub fn apply(sol: &Solution, mv: &Move) -> Solution {
    assert_eq!(mv.result.cost(), sol.cost() + mv.delta, "move delta must be exact");
    mv.result.clone()
}

/// Which operators take part in a neighborhood scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NeighborhoodConfig {
    pub relocate: bool,
    pub merges: bool,
}

impl Default for NeighborhoodConfig {
    fn default() -> Self {
        Self {
            relocate: true,
            merges: true,
        }
    }
}

/// Prices every candidate move of the enabled operators.
pub fn candidates(sol: &Solution, inst: &Instance, cfg: NeighborhoodConfig) -> Vec<Candidate> {
    let mut out = Vec::new();
    if cfg.merges {
        let mut ctx = MergeCtx::new(sol, inst);
        merge_candidates(&mut ctx, &mut out);
    }
    if cfg.relocate {
        for c in 1..inst.dimension() {
            if let Ok(removal) = Removal::new(sol, inst, c) {
                removal.candidates(sol, inst, &mut out);
            }
        }
    }
    out.sort_by(|a, b| a.delta.cmp(&b.delta).then(a.kind.cmp(&b.kind)).then(a.params.cmp(&b.params)));
    out
}

/// Materializes a candidate against its source solution.
pub fn materialize(sol: &Solution, inst: &Instance, cand: &Candidate) -> Result<Move> {
    let arcs = node_arcs(sol);
    materialize_with(sol, inst, cand, &arcs, &mut None)
}

fn materialize_with<'a>(
    sol: &'a Solution,
    inst: &'a Instance,
    cand: &Candidate,
    before: &[Arc],
    merges: &mut Option<MergeCtx<'a>>,
) -> Result<Move> {
    let result = match cand.params {
        MoveParams::Relocate {
            customer,
            segment,
            position,
            server,
        } => {
            let target = RelocateTarget {
                segment,
                position,
                server,
            };
            Removal::new(sol, inst, customer)?.build(inst, &target)?
        }
        _ => merges.get_or_insert_with(|| MergeCtx::new(sol, inst)).build(cand.params)?,
    };
    assert_eq!(
        result.cost(),
        sol.cost() + cand.delta,
        "priced delta of {:?} must match the rebuilt solution",
        cand.params
    );
    debug_assert!(result.total_cost(inst).is_ok());
    let after = node_arcs(&result);
    let old: BTreeSet<Arc> = before.iter().copied().collect();
    let new: BTreeSet<Arc> = after.iter().copied().collect();
    Ok(Move {
        kind: cand.kind,
        params: cand.params,
        delta: cand.delta,
        touched_arcs: old.difference(&new).copied().collect(),
        created_arcs: new.difference(&old).copied().collect(),
        result,
    })
}

/// Best admissible move: the lowest cost change whose created arcs are not
/// tabu, unless it beats `best`. Moves that leave every node arc unchanged
/// are skipped.
pub fn enumerate_neighborhood(
    sol: &Solution,
    inst: &Instance,
    tabu: &TabuState,
    best: Cost,
    cfg: NeighborhoodConfig,
) -> Result<Move> {
    scan(sol, inst, tabu, best, candidates(sol, inst, cfg))
}

fn scan(sol: &Solution, inst: &Instance, tabu: &TabuState, best: Cost, cands: Vec<Candidate>) -> Result<Move> {
    let before = node_arcs(sol);
    let mut merges = None;
    for cand in &cands {
        let mv = materialize_with(sol, inst, cand, &before, &mut merges)?;
        if mv.touched_arcs.is_empty() && mv.created_arcs.is_empty() {
            continue;
        }
        if mv.admissible(tabu, sol.cost(), best) {
            return Ok(mv);
        }
    }
    Err(Error::NoAdmissibleMove)
}

/// Best merge (serial or parallel) of any single-brunch route, regardless of
/// tabu status.
pub fn best_merge(sol: &Solution, inst: &Instance) -> Option<Move> {
    let cands = candidates(
        sol,
        inst,
        NeighborhoodConfig {
            relocate: false,
            merges: true,
        },
    );
    let cand = cands.first()?;
    materialize(sol, inst, cand).ok()
}

fn check_tabu(mv: Move, sol: &Solution, tabu: &TabuState, best: Cost) -> Result<Move> {
    if mv.admissible(tabu, sol.cost(), best) {
        Ok(mv)
    } else {
        Err(Error::Tabu)
    }
}

/// Serial merge of route `route` into `segment` at `position`
/// (`0..=len`, before the visit at that index).
pub fn serial_merge(
    sol: &Solution,
    route: usize,
    segment: usize,
    position: usize,
    inst: &Instance,
    tabu: &TabuState,
    best: Cost,
) -> Result<Move> {
    let mut ctx = MergeCtx::new(sol, inst);
    let mut cands = Vec::new();
    ctx.build(MoveParams::Serial {
        route,
        segment,
        position,
    })?;
    ctx.serial(route, segment, &mut cands);
    let cand = cands
        .into_iter()
        .find(|c| matches!(c.params, MoveParams::Serial { position: p, .. } if p == position))
        .ok_or_else(|| Error::Infeasible("no such serial merge".into()))?;
    let mut merges = Some(ctx);
    let mv = materialize_with(sol, inst, &cand, &node_arcs(sol), &mut merges)?;
    check_tabu(mv, sol, tabu, best)
}

/// Parallel merge of route `route` alongside `segment`: its vehicles leave
/// the platoon after visit `split` (1-based; 0 means straight from the
/// depot) and rejoin before visit `dock` (`len + 1` means back to the depot).
pub fn parallel_merge(
    sol: &Solution,
    route: usize,
    segment: usize,
    split: usize,
    dock: usize,
    inst: &Instance,
    tabu: &TabuState,
    best: Cost,
) -> Result<Move> {
    let mut ctx = MergeCtx::new(sol, inst);
    let mut cands = Vec::new();
    let params = MoveParams::Parallel {
        route,
        segment,
        split,
        dock,
    };
    ctx.build(params)?;
    ctx.parallel(route, segment, &mut cands);
    let cand = cands
        .into_iter()
        .find(|c| c.params == params)
        .ok_or_else(|| Error::Infeasible("no such parallel merge".into()))?;
    let mut merges = Some(ctx);
    let mv = materialize_with(sol, inst, &cand, &node_arcs(sol), &mut merges)?;
    check_tabu(mv, sol, tabu, best)
}

/// Relocates the service of `customer` to `target`.
pub fn relocate(
    sol: &Solution,
    customer: NodeId,
    target: RelocateTarget,
    inst: &Instance,
    tabu: &TabuState,
    best: Cost,
) -> Result<Move> {
    let (kind, delta, result) = relocate::evaluate(sol, inst, customer, &target)?;
    assert_eq!(result.cost(), sol.cost() + delta, "relocate delta must be exact");
    let old: BTreeSet<Arc> = node_arcs(sol).into_iter().collect();
    let new: BTreeSet<Arc> = node_arcs(&result).into_iter().collect();
    let mv = Move {
        kind,
        params: MoveParams::Relocate {
            customer,
            segment: target.segment,
            position: target.position,
            server: target.server,
        },
        delta,
        touched_arcs: old.difference(&new).copied().collect(),
        created_arcs: new.difference(&old).copied().collect(),
        result,
    };
    check_tabu(mv, sol, tabu, best)
}

#[cfg(test)]
pub(crate) mod tests;
