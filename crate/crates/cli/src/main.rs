//! `mvrp` command-line front end.

mod bench;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use mvrp::instance::{generate_augerat_like, generate_tiny, AugeratSet};
use mvrp::oracle::parse_lp_counts;
use mvrp::search::{multi_start, with_worker_pool, SearchParams};
use mvrp::{
    brute_force_opt, brute_force_vrp, derive_instance, export_milp, parse_instance, serialize_instance, theorem1_bounds,
    validate, validate_doc, DeriveParams, Error, Eta, Instance, Metric, SolutionDoc,
};

#[derive(Parser)]
#[command(name = "mvrp", version, about = "Modular vehicle routing solver toolkit")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run multi-start tabu search on an instance
    Solve(SolveArgs),
    /// Check a solution file against an instance
    Validate { instance: PathBuf, solution: PathBuf },
    /// Derive an MVRP instance from a CVRP file
    Derive(DeriveArgs),
    /// Benchmark every instance in a directory
    Bench(bench::BenchArgs),
    /// Write the MILP model in LP format
    ExportLp {
        instance: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Solve a tiny instance exactly
    Brute {
        instance: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Write a synthetic instance
    Generate(GenerateArgs),
}

#[derive(Args, Clone)]
pub struct SearchArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 10)]
    pub starts: usize,
    #[arg(long, default_value_t = 1000)]
    pub iterations: usize,
    /// Iterations without improvement before shaking
    #[arg(long, default_value_t = 50)]
    pub shake_trigger: usize,
    #[arg(long, default_value_t = 10)]
    pub tenure: usize,
    #[arg(long, default_value_t = 0.5)]
    pub sparse_ratio: f64,
    /// Largest number of vehicles extracted per shake
    #[arg(long)]
    pub shake_max: Option<usize>,
    #[arg(long)]
    pub no_relocate: bool,
    #[arg(long)]
    pub no_merges: bool,
    #[arg(long)]
    pub no_shaking: bool,
}

impl SearchArgs {
    pub fn params(&self) -> SearchParams {
        SearchParams {
            starts: self.starts,
            max_iterations: self.iterations,
            no_improve_shake_trigger: self.shake_trigger,
            tenure: self.tenure,
            sparse_fill_ratio: self.sparse_ratio,
            shake_count_max: self.shake_max,
            rng_seed: self.seed,
            use_relocate: !self.no_relocate,
            use_merges: !self.no_merges,
            use_shaking: !self.no_shaking,
        }
    }
}

#[derive(Args)]
struct SolveArgs {
    instance: PathBuf,
    #[command(flatten)]
    search: SearchArgs,
    /// Override the instance's maximum platoon size
    #[arg(long)]
    max_platoon: Option<usize>,
    /// Solution JSON path (default: <instance stem>.solution.json)
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Directory for per-start convergence traces
    #[arg(long)]
    trace_dir: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum MetricArg {
    Manhattan,
    Euclidean,
}

impl From<MetricArg> for Metric {
    fn from(m: MetricArg) -> Self {
        match m {
            MetricArg::Manhattan => Metric::Manhattan,
            MetricArg::Euclidean => Metric::EuclideanRounded,
        }
    }
}

#[derive(Args)]
struct DeriveArgs {
    source: PathBuf,
    #[arg(short, long)]
    output: PathBuf,
    /// Number of customers to keep, chosen at random
    #[arg(long)]
    keep_random: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    capacity: Option<u32>,
    #[arg(long, default_value_t = 3)]
    max_platoon: usize,
    #[arg(long, default_value = "0.1")]
    eta: String,
    #[arg(long)]
    fleet: Option<usize>,
    #[arg(long, value_enum, default_value = "manhattan")]
    metric: MetricArg,
    #[arg(long)]
    name: Option<String>,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(value_enum)]
    kind: GenKind,
    #[arg(short, long)]
    output: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Nodes including the depot (augerat kinds)
    #[arg(long, default_value_t = 32)]
    nodes: usize,
    /// Customers (tiny)
    #[arg(long, default_value_t = 5)]
    customers: usize,
    /// Fleet size (tiny)
    #[arg(long, default_value_t = 3)]
    fleet: usize,
    /// Maximum platoon size (tiny)
    #[arg(long, default_value_t = 2)]
    max_platoon: usize,
    #[arg(long, default_value = "0.1")]
    eta: String,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    AugeratA,
    AugeratB,
    Tiny,
}

/// Error with the process exit status it maps to.
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn new(code: u8, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Syntax { .. }
        | Error::MissingKeyword(_)
        | Error::UnknownKeyword(_)
        | Error::DuplicateNodeId(_)
        | Error::MalformedSolution(_)
        | Error::UnknownCustomer(_) => 1,
        _ => 2,
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::new(exit_code(&e), e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::new(1, format!("{}: {}", path.display(), e)))
}

fn write(path: &Path, text: &str) -> Outcome {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| Failure::new(1, format!("{}: {}", dir.display(), e)))?;
    }
    std::fs::write(path, text).map_err(|e| Failure::new(1, format!("{}: {}", path.display(), e)))
}

pub fn load_instance(path: &Path) -> Result<Instance, Failure> {
    let text = read(path)?;
    parse_instance(&text).map_err(|e| Failure::new(1, format!("{}: {}", path.display(), e)))
}

fn parse_eta(text: &str) -> Result<Eta, Failure> {
    Eta::parse(text).map_err(|e| Failure::new(2, e.to_string()))
}

fn stem(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "instance".into())
}

fn cmd_solve(a: SolveArgs) -> Outcome {
    let mut inst = load_instance(&a.instance)?;
    if let Some(l) = a.max_platoon {
        inst = inst.with_max_platoon(l)?;
    }
    let params = a.search.params();
    let clock = Instant::now();
    let res = with_worker_pool(|| multi_start(&inst, &params))?;
    let secs = clock.elapsed().as_secs_f64();
    let out = a.output.unwrap_or_else(|| PathBuf::from(format!("{}.solution.json", stem(&a.instance))));
    write(&out, &res.best.to_doc(&inst).to_json())?;
    if let Some(dir) = &a.trace_dir {
        for s in &res.starts {
            write(&dir.join(format!("trace-start-{}.csv", s.index)), &s.trace.to_csv(&inst))?;
        }
    }
    let win = &res.starts.iter().find(|s| s.index == res.best_start).expect("winning start").trace;
    println!("objective {}", inst.fmt_cost(res.best.cost()));
    println!("time {:.3}s", secs);
    println!("best start {} (iteration {})", res.best_start, win.iterations_to_best());
    println!("solution {}", out.display());
    Ok(())
}

fn cmd_validate(instance: &Path, solution: &Path) -> Outcome {
    let inst = load_instance(instance)?;
    let doc = SolutionDoc::from_json(&read(solution)?)?;
    let report = validate_doc(&doc, &inst);
    if report.ok() {
        println!("ok cost {}", doc.cost);
        return Ok(());
    }
    for v in &report.violations {
        println!("{}", v);
    }
    Err(Failure::new(3, format!("{} violation(s)", report.violations.len())))
}

fn cmd_derive(a: DeriveArgs) -> Outcome {
    let base = load_instance(&a.source)?;
    let n = base.customers();
    let keep: Vec<usize> = match a.keep_random {
        Some(k) if k > n => return Err(Failure::new(2, format!("cannot keep {} of {} customers", k, n))),
        Some(k) if k < n => {
            let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
            sample(&mut rng, n, k).into_iter().map(|i| i + 1).collect()
        }
        _ => (1..=n).collect(),
    };
    let params = DeriveParams {
        name: a.name.unwrap_or_else(|| format!("{}-{}", base.name(), keep.len() + 1)),
        capacity: a.capacity.unwrap_or(base.capacity()),
        max_platoon: a.max_platoon,
        eta: parse_eta(&a.eta)?,
        fleet_size: a.fleet,
        metric: a.metric.into(),
    };
    let inst = derive_instance(&base, &keep, &params)?;
    write(&a.output, &serialize_instance(&inst))?;
    println!("{} nodes {} fleet {} capacity {}", inst.name(), inst.dimension(), inst.fleet_size(), inst.capacity());
    Ok(())
}

fn cmd_export_lp(instance: &Path, output: &Path) -> Outcome {
    let inst = load_instance(instance)?;
    let text = export_milp(&inst);
    write(output, &text)?;
    println!("{}", parse_lp_counts(&text));
    Ok(())
}

fn cmd_brute(instance: &Path, output: Option<PathBuf>) -> Outcome {
    let inst = load_instance(instance)?;
    let (sol, cost) = brute_force_opt(&inst)?;
    let vrp = brute_force_vrp(&inst)?;
    let b = theorem1_bounds(vrp, inst.eta(), inst.max_platoon())?;
    println!("objective {}", inst.fmt_cost(cost));
    println!("vrp {}", inst.fmt_cost(vrp));
    println!("bounds ({}, {}]", b.lower_decimal(), inst.fmt_cost(b.upper));
    if let Some(out) = output {
        debug_assert!(validate(&sol, &inst).ok());
        write(&out, &sol.to_doc(&inst).to_json())?;
    }
    Ok(())
}

fn cmd_generate(a: GenerateArgs) -> Outcome {
    let inst = match a.kind {
        GenKind::AugeratA => generate_augerat_like(AugeratSet::A, a.nodes, a.seed)?,
        GenKind::AugeratB => generate_augerat_like(AugeratSet::B, a.nodes, a.seed)?,
        GenKind::Tiny => generate_tiny(a.seed, a.customers, a.fleet, a.max_platoon, parse_eta(&a.eta)?)?,
    };
    write(&a.output, &serialize_instance(&inst))?;
    println!("{} nodes {}", inst.name(), inst.dimension());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.cmd {
        Cmd::Solve(a) => cmd_solve(a),
        Cmd::Validate { instance, solution } => cmd_validate(&instance, &solution),
        Cmd::Derive(a) => cmd_derive(a),
        Cmd::Bench(a) => bench::run(a),
        Cmd::ExportLp { instance, output } => cmd_export_lp(&instance, &output),
        Cmd::Brute { instance, output } => cmd_brute(&instance, output),
        Cmd::Generate(a) => cmd_generate(a),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
