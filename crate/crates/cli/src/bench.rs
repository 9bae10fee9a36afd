//! Batch runs over a directory of instances: platoon-size sweeps, ablations
//! and ratio summaries.

use std::path::PathBuf;
use std::time::Instant;

use clap::Args;
use mvrp::search::{multi_start, with_worker_pool, SearchParams};
use mvrp::{validate, Instance};

use crate::{load_instance, write, Failure, SearchArgs};

#[derive(Args)]
pub struct BenchArgs {
    dir: PathBuf,
    #[command(flatten)]
    search: SearchArgs,
    /// Result rows
    #[arg(long, default_value = "bench.csv")]
    csv: PathBuf,
    /// Objective ratios against L=1 (needs 1 in the sweep)
    #[arg(long)]
    ratio_csv: Option<PathBuf>,
    /// Platoon sizes to run, e.g. 1,2,3 (default: each instance's own)
    #[arg(long, value_delimiter = ',')]
    l_sweep: Vec<usize>,
    /// Components to disable one at a time: relocate, merges, shaking, multi-start
    #[arg(long, value_delimiter = ',')]
    ablate: Vec<String>,
}

#[derive(Debug, Clone, serde::Serialize, serde::Deserialize, PartialEq)]
pub struct BenchRow {
    pub instance: String,
    pub n: usize,
    pub k: usize,
    pub l: usize,
    pub config: String,
    pub objective: String,
    pub seconds: f64,
    pub iterations_to_best: usize,
    pub best_start: usize,
    pub status: String,
}

#[derive(serde::Serialize)]
struct RatioRow<'a> {
    instance: &'a str,
    config: &'a str,
    l: usize,
    objective: &'a str,
    ratio_to_l1: String,
}

fn ablated(base: &SearchParams, what: &str) -> Result<SearchParams, Failure> {
    let mut p = base.clone();
    match what {
        "relocate" => p.use_relocate = false,
        "merge" | "merges" => p.use_merges = false,
        "shaking" | "shake" => p.use_shaking = false,
        "multi-start" | "multistart" => p.starts = 1,
        other => return Err(Failure::new(1, format!("unknown component {}", other))),
    }
    Ok(p)
}

fn run_one(inst: &Instance, l: usize, config: &str, params: &SearchParams) -> BenchRow {
    let mut row = BenchRow {
        instance: inst.name().to_string(),
        n: inst.dimension(),
        k: inst.fleet_size(),
        l,
        config: config.to_string(),
        objective: String::new(),
        seconds: 0.0,
        iterations_to_best: 0,
        best_start: 0,
        status: "ok".into(),
    };
    let inst = match inst.with_max_platoon(l) {
        Ok(i) => i,
        Err(e) => {
            row.status = e.to_string();
            return row;
        }
    };
    let clock = Instant::now();
    let res = with_worker_pool(|| multi_start(&inst, params));
    row.seconds = (clock.elapsed().as_secs_f64() * 1000.0).round() / 1000.0;
    match res {
        Ok(r) => {
            row.objective = inst.fmt_cost(r.best.cost());
            row.best_start = r.best_start;
            row.iterations_to_best = r.starts.iter().find(|s| s.index == r.best_start).map_or(0, |s| s.trace.iterations_to_best());
            let report = validate(&r.best, &inst);
            if !report.ok() {
                row.status = format!("invalid: {:?}", report.codes());
            }
        }
        Err(e) => row.status = e.to_string(),
    }
    row
}

pub fn run(a: BenchArgs) -> Result<(), Failure> {
    let base = a.search.params();
    let mut configs = vec![("full".to_string(), base.clone())];
    for what in &a.ablate {
        configs.push((format!("no-{}", what), ablated(&base, what)?));
    }
    let mut files: Vec<PathBuf> = std::fs::read_dir(&a.dir)
        .map_err(|e| Failure::new(1, format!("{}: {}", a.dir.display(), e)))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "mvrp" || x == "vrp"))
        .collect();
    files.sort();
    let mut instances = Vec::new();
    for f in &files {
        instances.push(load_instance(f)?);
    }
    instances.sort_by(|x, y| x.name().cmp(y.name()));

    let mut rows = Vec::new();
    for inst in &instances {
        let ls = if a.l_sweep.is_empty() { vec![inst.max_platoon()] } else { a.l_sweep.clone() };
        for l in ls {
            for (name, params) in &configs {
                let row = run_one(inst, l, name, params);
                eprintln!("{} l={} {} {} {}s", row.instance, row.l, row.config, row.objective, row.seconds);
                rows.push(row);
            }
        }
    }

    let mut w = csv::Writer::from_writer(Vec::new());
    for r in &rows {
        w.serialize(r).map_err(|e| Failure::new(1, e.to_string()))?;
    }
    write(&a.csv, &String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf-8"))?;

    if let Some(path) = &a.ratio_csv {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in &rows {
            let Some(one) = rows.iter().find(|o| o.instance == r.instance && o.config == r.config && o.l == 1) else { continue };
            let (Ok(x), Ok(y)) = (r.objective.parse::<f64>(), one.objective.parse::<f64>()) else { continue };
            w.serialize(RatioRow {
                instance: &r.instance,
                config: &r.config,
                l: r.l,
                objective: &r.objective,
                ratio_to_l1: format!("{:.4}", x / y),
            })
            .map_err(|e| Failure::new(1, e.to_string()))?;
        }
        write(path, &String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf-8"))?;
    }
    println!("{} rows written to {}", rows.len(), a.csv.display());
    Ok(())
}
