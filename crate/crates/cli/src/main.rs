//! `nebm`: generate MIS instances, solve QUBO files, and run benchmarks.
//!
//! Exit codes: 0 success, 1 internal or I/O failure, 2 parse or
//! configuration error, 3 missing best-known solution.

mod options;

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use nebm::bench::{
    compute_bks, run_plan, summarize, summary_csv, write_results, BenchmarkPlan, BksCache, BksEntry, InstanceId,
    Provenance, DEFAULT_BKS_SWEEPS,
};
use nebm::format::{format_graph, format_qubo, parse_graph, parse_qubo};
use nebm::mis::{brute_force_mis, generate_mis_graph, mis_to_qubo, MisQuboParams, MAX_EXACT_NODES};
use nebm::snn::{Network, TRACE_HEADER};
use nebm::{Error, QuboMatrix, RunResult};

use options::{SolverKind, SolverOptions};

#[derive(Debug)]
pub struct CliError {
    code: u8,
    msg: String,
}

impl CliError {
    pub fn config(msg: impl Into<String>) -> Self {
        Self { code: 2, msg: msg.into() }
    }

    pub fn io(path: &Path, e: std::io::Error) -> Self {
        Self { code: 1, msg: format!("{}: {e}", path.display()) }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::MissingBks { .. } => 3,
            Error::Io(_) => 1,
            _ => 2,
        };
        Self { code, msg: e.to_string() }
    }
}

type CliResult<T = ()> = Result<T, CliError>;

#[derive(Parser)]
#[command(name = "nebm", version, about = "Spiking-network simulated annealing for QUBO and MIS benchmarks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random MIS instance as a graph file and a QUBO file.
    Generate(GenerateArgs),
    /// Solve a QUBO file and print `best_cost=<v> steps=<s> wall_ms=<t>`.
    Solve(SolveArgs),
    /// Solve with the spiking annealer, writing one line per step.
    Trace(TraceArgs),
    /// Run a benchmark plan and write the results table.
    Bench(BenchArgs),
    /// Compute best-known costs for a plan's instances, or for one graph.
    Bks(BksArgs),
    /// Solve a graph's maximum independent set exactly.
    Oracle(OracleArgs),
}

#[derive(Args)]
struct GenerateArgs {
    /// Number of nodes
    #[arg(long)]
    nodes: usize,
    /// Edge probability in [0, 1]
    #[arg(long)]
    density: f64,
    /// Instance seed
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Edge penalty of the QUBO encoding, at least 2
    #[arg(long, default_value_t = 8)]
    lambda: i64,
    /// Output prefix; writes PREFIX.graph and PREFIX.qubo
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SolveArgs {
    /// QUBO file (`qubo n nnz` header, then `i j c` lines)
    #[arg(long)]
    qubo: PathBuf,
    /// TOML file with solver options; flags take precedence
    #[arg(long)]
    config: Option<PathBuf>,
    /// Write the best assignment here as a bit string
    #[arg(long)]
    out: Option<PathBuf>,
    /// Reject couplings outside the signed 8-bit range
    #[arg(long)]
    hardware_faithful: bool,
    #[command(flatten)]
    options: SolverOptions,
}

#[derive(Args)]
struct TraceArgs {
    #[command(flatten)]
    solve: SolveArgs,
    /// Step trace output (`step flips_count cost_emitted t_hat` per line)
    #[arg(long)]
    trace: PathBuf,
}

#[derive(Args)]
struct BenchArgs {
    /// TOML benchmark plan
    #[arg(long)]
    plan: PathBuf,
    /// Results CSV; assignments go to RESULTS.assignments
    #[arg(long)]
    out: PathBuf,
    /// Best-known cost cache written by `bks`; graphs of up to 30 nodes are
    /// solved exactly without one
    #[arg(long)]
    bks: Option<PathBuf>,
    /// Optional per-group summary CSV
    #[arg(long)]
    summary: Option<PathBuf>,
    /// Concurrent cells, overriding the plan [default: plan value, else 1]
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Args)]
struct BksArgs {
    /// TOML benchmark plan whose instances get best-known costs
    #[arg(long, required_unless_present = "graph", conflicts_with = "graph")]
    plan: Option<PathBuf>,
    /// A single graph file instead of a plan
    #[arg(long)]
    graph: Option<PathBuf>,
    /// Output file; an existing cache is extended
    #[arg(long)]
    out: PathBuf,
    /// Tabu iterations per instance above 30 nodes
    #[arg(long, default_value_t = DEFAULT_BKS_SWEEPS)]
    sweeps: u64,
    /// Edge penalty for --graph [default: plan value, else 8]
    #[arg(long)]
    lambda: Option<i64>,
}

#[derive(Args)]
struct OracleArgs {
    /// Graph file (`graph n m` header, then `u v` lines), at most 30 nodes
    #[arg(long)]
    graph: PathBuf,
    /// Write a maximum independent set here as a bit string
    #[arg(long)]
    out: Option<PathBuf>,
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

fn write(path: &Path, contents: &str) -> CliResult {
    fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

fn with_suffix(prefix: &Path, ext: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(ext);
    PathBuf::from(s)
}

fn load_plan(path: &Path) -> CliResult<BenchmarkPlan> {
    let plan: BenchmarkPlan =
        toml::from_str(&read(path)?).map_err(|e| CliError::config(format!("{}: {e}", path.display())))?;
    plan.validate()?;
    Ok(plan)
}

fn generate(a: GenerateArgs) -> CliResult {
    let graph = generate_mis_graph(a.nodes, a.density, a.seed)?;
    let qubo = mis_to_qubo(&graph, MisQuboParams { lambda: a.lambda })?;
    write(&with_suffix(&a.out, ".graph"), &format_graph(&graph))?;
    write(&with_suffix(&a.out, ".qubo"), &format_qubo(&qubo))?;
    println!("nodes={} edges={} nnz={}", graph.n(), graph.edges().len(), qubo.nnz());
    Ok(())
}

fn solve_setup(a: &SolveArgs) -> CliResult<(Arc<QuboMatrix>, SolverOptions)> {
    let flags = a.options.clone();
    let options = match &a.config {
        Some(path) => flags.over(SolverOptions::load(path)?),
        None => flags,
    };
    let qubo = parse_qubo(&read(&a.qubo)?, a.hardware_faithful)?;
    Ok((Arc::new(qubo), options))
}

fn report(run: &RunResult, out: Option<&Path>) -> CliResult {
    if let Some(path) = out {
        write(path, &format!("{}\n", run.best_assignment))?;
    }
    println!("best_cost={} steps={} wall_ms={}", run.best_cost, run.steps, run.elapsed.as_millis());
    Ok(())
}

fn solve(a: SolveArgs) -> CliResult {
    let (qubo, options) = solve_setup(&a)?;
    let budget = options.budget()?;
    let spec = options.spec()?;
    let run = spec.solve(&qubo, options.seed_value(), budget)?;
    report(&run, a.out.as_deref())
}

fn trace(a: TraceArgs) -> CliResult {
    let (qubo, options) = solve_setup(&a.solve)?;
    if options.solver_kind() != SolverKind::Nebm {
        return Err(CliError::config("trace only supports the nebm solver"));
    }
    let budget = options.budget()?;
    let file = fs::File::create(&a.trace).map_err(|e| CliError::io(&a.trace, e))?;
    let mut sink = std::io::BufWriter::new(file);
    let mut failure = writeln!(sink, "{TRACE_HEADER}").err();
    let mut net = Network::new(qubo, &options.nebm_config()?)?;
    let run = net.run_with(budget, 0, |r| {
        if failure.is_none() {
            failure = writeln!(sink, "{}", r.trace_line()).err();
        }
    })?;
    if let Some(e) = failure.or_else(|| sink.flush().err()) {
        return Err(CliError::io(&a.trace, e));
    }
    report(&run, a.solve.out.as_deref())
}

fn bench(a: BenchArgs) -> CliResult {
    let mut plan = load_plan(&a.plan)?;
    if let Some(w) = a.workers {
        plan.workers = w;
        plan.validate()?;
    }
    let cache = match &a.bks {
        Some(path) => BksCache::load(path)?,
        None => BksCache::default(),
    };
    let records = run_plan(&plan, &cache)?;
    write_results(&records, &a.out)?;
    if let Some(path) = &a.summary {
        write(path, &summary_csv(&summarize(&records)))?;
    }
    println!("records={}", records.len());
    Ok(())
}

fn bks(a: BksArgs) -> CliResult {
    if let Some(path) = &a.graph {
        let graph = parse_graph(&read(path)?)?;
        let lambda = a.lambda.unwrap_or(MisQuboParams::default().lambda);
        let (cost, provenance) = if graph.n() <= MAX_EXACT_NODES {
            (-(brute_force_mis(&graph)?.size as i64), Provenance::Exact)
        } else {
            let qubo = mis_to_qubo(&graph, MisQuboParams { lambda })?;
            let cfg = nebm::baselines::TabuConfig { restart_after: Some(graph.n() as u64), ..Default::default() };
            let run = nebm::baselines::tabu_search(&qubo, &cfg, nebm::Budget::steps(a.sweeps))?;
            (run.best_cost, Provenance::Tabu { sweeps: a.sweeps })
        };
        let mut out = String::from("graph,lambda,bks_cost,provenance\n");
        writeln!(out, "{},{lambda},{cost},{provenance}", path.display()).unwrap();
        write(&a.out, &out)?;
        println!("bks_cost={cost} provenance={provenance}");
        return Ok(());
    }

    let plan = load_plan(a.plan.as_deref().expect("clap requires --plan or --graph"))?;
    let lambda = a.lambda.unwrap_or(plan.lambda);
    let mut cache = if a.out.exists() { BksCache::load(&a.out)? } else { BksCache::default() };
    let todo: Vec<InstanceId> = plan.instances().into_iter().filter(|id| cache.get(id, lambda).is_none()).collect();
    let computed: Vec<BksEntry> = todo.iter().map(|&id| compute_bks(id, lambda, a.sweeps)).collect::<Result<_, _>>()?;
    for e in computed {
        cache.insert(e);
    }
    cache.save(&a.out)?;
    println!("entries={} computed={}", cache.len(), todo.len());
    Ok(())
}

fn oracle(a: OracleArgs) -> CliResult {
    let graph = parse_graph(&read(&a.graph)?)?;
    let sol = brute_force_mis(&graph)?;
    if let Some(path) = &a.out {
        write(path, &format!("{}\n", sol.witness))?;
    }
    println!("mis_size={} cost={}", sol.size, -(sol.size as i64));
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Generate(a) => generate(a),
        Command::Solve(a) => solve(a),
        Command::Trace(a) => trace(a),
        Command::Bench(a) => bench(a),
        Command::Bks(a) => bks(a),
        Command::Oracle(a) => oracle(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.msg);
            ExitCode::from(e.code)
        }
    }
}
