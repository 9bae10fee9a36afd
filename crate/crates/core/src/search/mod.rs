//! Multi-start tabu search.
//!
//! Each start samples a sparse random solution, improves it by merging, then
//! runs tabu search with shaking. Starts are independent and run in
//! parallel; the result does not depend on scheduling.

mod init;
mod shake;

pub use init::{cw_improve, sample_sparse_solution};
pub use shake::{platoon_mvs, shake};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::cost::Cost;
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::neighborhood::{apply, enumerate_neighborhood, NeighborhoodConfig, TabuState};
use crate::solution::Solution;

#[derive(Debug, Clone, PartialEq)]
pub struct SearchParams {
    pub starts: usize,
    pub max_iterations: usize,
    pub no_improve_shake_trigger: usize,
    pub tenure: usize,
    pub sparse_fill_ratio: f64,
    /// Upper end of the shake count; `None` means a third of the fleet,
    /// rounded up.
    pub shake_count_max: Option<usize>,
    pub rng_seed: u64,
    pub use_relocate: bool,
    /// Merges inside tabu search; the initial merge phase always runs.
    pub use_merges: bool,
    pub use_shaking: bool,
}

impl Default for SearchParams {
    fn default() -> Self {
        Self {
            starts: 10,
            max_iterations: 1000,
            no_improve_shake_trigger: 50,
            tenure: 10,
            sparse_fill_ratio: 0.5,
            shake_count_max: None,
            rng_seed: 0,
            use_relocate: true,
            use_merges: true,
            use_shaking: true,
        }
    }
}

impl SearchParams {
    pub fn check(&self) -> Result<()> {
        if self.starts == 0 || self.tenure == 0 || self.no_improve_shake_trigger == 0 {
            return Err(Error::InvariantViolation("starts, tenure and shake trigger must be positive".into()));
        }
        if !(self.sparse_fill_ratio > 0.0 && self.sparse_fill_ratio <= 1.0) {
            return Err(Error::InvariantViolation("sparse fill ratio must lie in (0, 1]".into()));
        }
        Ok(())
    }

    fn neighborhood(&self) -> NeighborhoodConfig {
        NeighborhoodConfig {
            relocate: self.use_relocate,
            merges: self.use_merges,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceRow {
    pub iteration: usize,
    pub current: Cost,
    pub best: Cost,
    /// Applied move kind, `init` for the starting row, `none` when no move
    /// was admissible.
    pub move_kind: &'static str,
    pub shake: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SearchTrace {
    pub rows: Vec<TraceRow>,
}

#[derive(serde::Serialize)]
struct CsvRow<'a> {
    iteration: usize,
    current_cost: String,
    best_cost: String,
    move_kind: &'a str,
    shake: u8,
}

impl SearchTrace {
    pub fn final_best(&self) -> Option<Cost> {
        self.rows.last().map(|r| r.best)
    }

    /// First iteration at which the final best cost was reached.
    pub fn iterations_to_best(&self) -> usize {
        let Some(best) = self.final_best() else { return 0 };
        self.rows.iter().find(|r| r.best == best).map_or(0, |r| r.iteration)
    }

    /// CSV with header `iteration,current_cost,best_cost,move_kind,shake`.
    pub fn to_csv(&self, inst: &Instance) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in &self.rows {
            w.serialize(CsvRow {
                iteration: r.iteration,
                current_cost: inst.fmt_cost(r.current),
                best_cost: inst.fmt_cost(r.best),
                move_kind: r.move_kind,
                shake: r.shake as u8,
            })
            .expect("in-memory csv");
        }
        if self.rows.is_empty() {
            return "iteration,current_cost,best_cost,move_kind,shake\n".into();
        }
        String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf-8")
    }
}

fn shake_count(params: &SearchParams, inst: &Instance, rng: &mut ChaCha8Rng) -> usize {
    let max = params.shake_count_max.unwrap_or(inst.fleet_size().div_ceil(3)).max(1);
    rng.gen_range(1..=max)
}

/// Tabu search from `initial`; returns the best solution found and the trace.
pub fn tabu_search(inst: &Instance, initial: &Solution, params: &SearchParams, seed: u64) -> (Solution, SearchTrace) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cfg = params.neighborhood();
    let mut tabu = TabuState::new(params.tenure);
    let mut cur = initial.clone();
    let mut best = initial.clone();
    let mut stale = 0;
    let mut trace = SearchTrace::default();
    trace.rows.push(TraceRow {
        iteration: 0,
        current: cur.cost(),
        best: best.cost(),
        move_kind: "init",
        shake: false,
    });
    for it in 1..=params.max_iterations {
        let mut kind = "none";
        let mut shaken = false;
        match enumerate_neighborhood(&cur, inst, &tabu, best.cost(), cfg) {
            Ok(mv) => {
                tabu.record(mv.kind.tabu_list(), &mv.touched_arcs);
                cur = apply(&cur, &mv);
                kind = mv.kind.name();
            }
            Err(_) => {
                if !params.use_shaking {
                    break;
                }
                let n = shake_count(params, inst, &mut rng);
                match shake(&cur, n, &mut rng, inst) {
                    Ok(next) => {
                        cur = next;
                        tabu.clear();
                        shaken = true;
                        stale = 0;
                    }
                    Err(_) => break,
                }
            }
        }
        tabu.advance();
        if cur.cost() < best.cost() {
            best = cur.clone();
            stale = 0;
        } else if !shaken {
            stale += 1;
        }
        if params.use_shaking && stale >= params.no_improve_shake_trigger {
            stale = 0;
            let n = shake_count(params, inst, &mut rng);
            if let Ok(next) = shake(&cur, n, &mut rng, inst) {
                cur = next;
                tabu.clear();
                shaken = true;
            }
        }
        trace.rows.push(TraceRow {
            iteration: it,
            current: cur.cost(),
            best: best.cost(),
            move_kind: kind,
            shake: shaken,
        });
    }
    (best, trace)
}

/// Outcome of one start.
#[derive(Debug, Clone)]
pub struct StartResult {
    pub index: usize,
    pub seed: u64,
    pub sparse_cost: Cost,
    pub merged_cost: Cost,
    pub best: Solution,
    pub trace: SearchTrace,
}

#[derive(Debug, Clone)]
pub struct MultiStartResult {
    pub best: Solution,
    pub best_start: usize,
    /// Successful starts, by index.
    pub starts: Vec<StartResult>,
}

/// Seed of start `i`.
pub fn start_seed(rng_seed: u64, i: usize) -> u64 {
    let mut z = rng_seed.wrapping_add((i as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Runs one start: sparse sampling (at full capacity if the ratio leaves no
/// room for some customer), merging, tabu search.
pub fn run_start(inst: &Instance, params: &SearchParams, index: usize) -> Result<StartResult> {
    let seed = start_seed(params.rng_seed, index);
    let sparse = match sample_sparse_solution(inst, seed, params.sparse_fill_ratio) {
        Err(Error::InfeasibleSparse) if params.sparse_fill_ratio < 1.0 => sample_sparse_solution(inst, seed, 1.0)?,
        other => other?,
    };
    let merged = cw_improve(&sparse, inst);
    let (best, trace) = tabu_search(inst, &merged, params, seed ^ 0x5EED);
    Ok(StartResult {
        index,
        seed,
        sparse_cost: sparse.cost(),
        merged_cost: merged.cost(),
        best,
        trace,
    })
}

/// Runs `params.starts` independent starts and keeps the cheapest result
/// (lowest start index on ties).
pub fn multi_start(inst: &Instance, params: &SearchParams) -> Result<MultiStartResult> {
    params.check()?;
    let results: Vec<Result<StartResult>> = (0..params.starts).into_par_iter().map(|i| run_start(inst, params, i)).collect();
    let mut starts = Vec::new();
    let mut first_err = None;
    for r in results {
        match r {
            Ok(s) => starts.push(s),
            Err(e) => {
                first_err.get_or_insert(e);
            }
        }
    }
    let Some(win) = starts.iter().min_by_key(|s| (s.best.cost(), s.index)) else {
        return Err(first_err.unwrap_or(Error::InfeasibleSparse));
    };
    Ok(MultiStartResult {
        best: win.best.clone(),
        best_start: win.index,
        starts,
    })
}

/// Worker count from `MVRP_THREADS`, if set to a positive integer.
pub fn thread_cap() -> Option<usize> {
    std::env::var("MVRP_THREADS").ok()?.trim().parse().ok().filter(|&n| n > 0)
}

/// Runs `f` on a pool capped by `MVRP_THREADS` (the global pool otherwise).
pub fn with_worker_pool<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    match thread_cap().and_then(|n| rayon::ThreadPoolBuilder::new().num_threads(n).build().ok()) {
        Some(pool) => pool.install(f),
        None => f(),
    }
}
