//! Benchmark harness: instance grids, best-known-solution caching, the
//! percentage-gap metric and result persistence.
//!
//! Results are written as CSV with the header [`RESULTS_HEADER`]; the best
//! assignment of each record goes, one bitstring per line in record order, to
//! a sidecar file (`<results>.assignments`) so every reported cost can be
//! re-verified.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Duration;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::baselines::SaConfig;
use crate::baselines::{tabu_search, TabuConfig};
use crate::error::{Error, Result};
use crate::mis::{brute_force_mis, generate_mis_graph, mis_to_qubo, MisQuboParams, MAX_EXACT_NODES};
use crate::qubo::{Assignment, Cost, QuboMatrix};
use crate::run::Budget;
use crate::snn::NebmConfig;
use crate::solver::SolverSpec;

pub const RESULTS_HEADER: &str =
    "instance_n,density,instance_seed,solver,config_hash,budget_kind,budget,run_seed,best_cost,bks_cost,gap_percent,steps,wall_ms";

pub const BKS_HEADER: &str = "instance_n,density,instance_seed,lambda,bks_cost,provenance";

/// Default tabu iteration budget for best-known solutions above the exact
/// oracle's size limit.
pub const DEFAULT_BKS_SWEEPS: u64 = 200_000;

/// Percentage gap `100 · |min(C, 0) − C_bks| / |C_bks|`.
///
/// The cost is truncated at zero, so the all-zero solution scores 100. A
/// cost below the reference (possible only when the reference is not
/// optimal) scores 0.
pub fn gap_percent(cost: Cost, bks: Cost) -> Result<f64> {
    if bks >= 0 {
        return Err(Error::InvalidBks(bks));
    }
    let clamped = cost.clamp(bks, 0);
    Ok(100.0 * (clamped - bks).unsigned_abs() as f64 / bks.unsigned_abs() as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InstanceId {
    pub n: usize,
    pub density: f64,
    pub seed: u64,
}

impl InstanceId {
    fn key(&self) -> (usize, u64, u64) {
        (self.n, self.density.to_bits(), self.seed)
    }

    pub fn qubo(&self, lambda: i64) -> Result<QuboMatrix> {
        mis_to_qubo(&generate_mis_graph(self.n, self.density, self.seed)?, MisQuboParams { lambda })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BudgetSpec {
    Steps(u64),
    Seconds(f64),
}

impl BudgetSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            BudgetSpec::Steps(_) => "steps",
            BudgetSpec::Seconds(_) => "seconds",
        }
    }

    pub fn value(&self) -> String {
        match self {
            BudgetSpec::Steps(s) => s.to_string(),
            BudgetSpec::Seconds(s) => s.to_string(),
        }
    }

    pub fn to_budget(&self) -> Result<Budget> {
        match *self {
            BudgetSpec::Steps(s) => Ok(Budget::steps(s)),
            BudgetSpec::Seconds(s) if s > 0.0 && s.is_finite() => Ok(Budget::wall(Duration::from_secs_f64(s))),
            BudgetSpec::Seconds(s) => Err(Error::InvalidConfig(format!("wall-clock budget {s} must be positive"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BenchmarkPlan {
    pub nodes: Vec<usize>,
    pub densities: Vec<f64>,
    pub instance_seeds: Vec<u64>,
    pub budgets: Vec<BudgetSpec>,
    pub solvers: Vec<SolverSpec>,
    pub run_seeds: Vec<u64>,
    pub lambda: i64,
    /// Cells evaluated concurrently.
    pub workers: usize,
}

impl Default for BenchmarkPlan {
    fn default() -> Self {
        Self {
            nodes: vec![10, 25, 50, 100, 250, 500, 1000],
            densities: vec![0.05, 0.15, 0.30],
            instance_seeds: (0..5).collect(),
            budgets: vec![BudgetSpec::Steps(10_000)],
            solvers: vec![
                SolverSpec::Nebm(NebmConfig::default()),
                SolverSpec::Sa(SaConfig::default()),
                SolverSpec::Tabu(TabuConfig::default()),
            ],
            run_seeds: (0..5).collect(),
            lambda: MisQuboParams::default().lambda,
            workers: 1,
        }
    }
}

impl BenchmarkPlan {
    /// A plan that runs nothing.
    pub fn empty() -> Self {
        Self { nodes: Vec::new(), ..Self::default() }
    }

    pub fn instances(&self) -> Vec<InstanceId> {
        let mut out = Vec::new();
        for &n in &self.nodes {
            for &density in &self.densities {
                for &seed in &self.instance_seeds {
                    out.push(InstanceId { n, density, seed });
                }
            }
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        if self.lambda < 2 {
            return Err(Error::InvalidConfig(format!("penalty λ = {} must be at least 2", self.lambda)));
        }
        if self.workers == 0 {
            return Err(Error::InvalidConfig("worker count must be at least 1".into()));
        }
        for &d in &self.densities {
            if !(0.0..=1.0).contains(&d) {
                return Err(Error::InvalidDensity(d));
            }
        }
        if self.nodes.contains(&0) {
            return Err(Error::InvalidConfig("instance sizes must be positive".into()));
        }
        for b in &self.budgets {
            b.to_budget()?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Provenance {
    Exact,
    Tabu { sweeps: u64 },
}

impl std::fmt::Display for Provenance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Provenance::Exact => f.write_str("exact"),
            Provenance::Tabu { sweeps } => write!(f, "tabu:{sweeps}"),
        }
    }
}

impl std::str::FromStr for Provenance {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "exact" {
            return Ok(Provenance::Exact);
        }
        s.strip_prefix("tabu:")
            .and_then(|n| n.parse().ok())
            .map(|sweeps| Provenance::Tabu { sweeps })
            .ok_or_else(|| Error::Parse { line: 0, msg: format!("unknown provenance {s:?}") })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BksEntry {
    pub id: InstanceId,
    pub lambda: i64,
    pub cost: Cost,
    pub provenance: Provenance,
}

/// Best-known costs keyed by instance and penalty.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct BksCache {
    entries: BTreeMap<(usize, u64, u64, i64), BksEntry>,
}

impl BksCache {
    pub fn insert(&mut self, entry: BksEntry) {
        let (n, d, s) = entry.id.key();
        self.entries.insert((n, d, s, entry.lambda), entry);
    }

    pub fn get(&self, id: &InstanceId, lambda: i64) -> Option<&BksEntry> {
        let (n, d, s) = id.key();
        self.entries.get(&(n, d, s, lambda))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = &BksEntry> {
        self.entries.values()
    }

    pub fn to_csv(&self) -> String {
        let mut out = format!("{BKS_HEADER}\n");
        for e in self.entries.values() {
            writeln!(out, "{},{},{},{},{},{}", e.id.n, e.id.density, e.id.seed, e.lambda, e.cost, e.provenance)
                .unwrap();
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut cache = Self::default();
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        match lines.next() {
            Some((_, h)) if h.trim() == BKS_HEADER => {}
            _ => return Err(Error::Parse { line: 1, msg: "missing BKS header".into() }),
        }
        for (idx, line) in lines {
            let f: Vec<&str> = line.trim().split(',').collect();
            let bad = |what: &str| Error::Parse { line: idx + 1, msg: format!("invalid {what}") };
            if f.len() != 6 {
                return Err(bad("field count"));
            }
            cache.insert(BksEntry {
                id: InstanceId {
                    n: f[0].parse().map_err(|_| bad("instance_n"))?,
                    density: f[1].parse().map_err(|_| bad("density"))?,
                    seed: f[2].parse().map_err(|_| bad("instance_seed"))?,
                },
                lambda: f[3].parse().map_err(|_| bad("lambda"))?,
                cost: f[4].parse().map_err(|_| bad("bks_cost"))?,
                provenance: f[5].parse().map_err(|_| bad("provenance"))?,
            });
        }
        Ok(cache)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_csv(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv())?;
        Ok(())
    }
}

/// Best-known cost: exact branch and bound up to [`MAX_EXACT_NODES`] nodes,
/// otherwise the best of a long tabu run with periodic restarts.
pub fn compute_bks(id: InstanceId, lambda: i64, tabu_sweeps: u64) -> Result<BksEntry> {
    let graph = generate_mis_graph(id.n, id.density, id.seed)?;
    if id.n <= MAX_EXACT_NODES {
        let sol = brute_force_mis(&graph)?;
        return Ok(BksEntry { id, lambda, cost: -(sol.size as Cost), provenance: Provenance::Exact });
    }
    let qubo = mis_to_qubo(&graph, MisQuboParams { lambda })?;
    let cfg = TabuConfig { seed: id.seed, restart_after: Some(id.n as u64), ..Default::default() };
    let run = tabu_search(&qubo, &cfg, Budget::steps(tabu_sweeps))?;
    Ok(BksEntry { id, lambda, cost: run.best_cost.min(-1), provenance: Provenance::Tabu { sweeps: tabu_sweeps } })
}

/// Reference cost for benchmarking: the cache, or the exact oracle for
/// graphs small enough to solve on the spot.
pub fn resolve_bks(cache: &BksCache, id: &InstanceId, lambda: i64) -> Result<BksEntry> {
    if let Some(e) = cache.get(id, lambda) {
        return Ok(*e);
    }
    if id.n <= MAX_EXACT_NODES {
        return compute_bks(*id, lambda, 0);
    }
    Err(Error::MissingBks { n: id.n, density: id.density, seed: id.seed })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkRecord {
    pub instance: InstanceId,
    pub solver: String,
    pub config_hash: String,
    pub budget: BudgetSpec,
    pub run_seed: u64,
    pub best_cost: Cost,
    pub bks_cost: Cost,
    pub gap_percent: f64,
    pub steps: u64,
    pub wall_ms: f64,
    pub best_assignment: Assignment,
}

impl BenchmarkRecord {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{:.6},{},{:.3}",
            self.instance.n,
            self.instance.density,
            self.instance.seed,
            self.solver,
            self.config_hash,
            self.budget.kind(),
            self.budget.value(),
            self.run_seed,
            self.best_cost,
            self.bks_cost,
            self.gap_percent,
            self.steps,
            self.wall_ms,
        )
    }
}

/// Runs every (instance, solver, budget, run seed) cell of the plan.
pub fn run_plan(plan: &BenchmarkPlan, cache: &BksCache) -> Result<Vec<BenchmarkRecord>> {
    plan.validate()?;
    let mut instances = Vec::new();
    for id in plan.instances() {
        let bks = resolve_bks(cache, &id, plan.lambda)?;
        instances.push((id, Arc::new(id.qubo(plan.lambda)?), bks.cost));
    }

    let mut cells = Vec::new();
    for (inst_idx, _) in instances.iter().enumerate() {
        for solver in &plan.solvers {
            for budget in &plan.budgets {
                for &run_seed in &plan.run_seeds {
                    cells.push((inst_idx, solver, *budget, run_seed));
                }
            }
        }
    }

    let run_cell = |&(inst_idx, solver, budget, run_seed): &(usize, &SolverSpec, BudgetSpec, u64)| {
        let (id, qubo, bks) = &instances[inst_idx];
        let run = solver.solve(qubo, run_seed, budget.to_budget()?)?;
        Ok(BenchmarkRecord {
            instance: *id,
            solver: solver.name().to_string(),
            config_hash: solver.config_hash(),
            budget,
            run_seed,
            best_cost: run.best_cost,
            bks_cost: *bks,
            gap_percent: gap_percent(run.best_cost, *bks)?,
            steps: run.steps,
            wall_ms: run.elapsed.as_secs_f64() * 1e3,
            best_assignment: run.best_assignment,
        })
    };

    if plan.workers <= 1 {
        return cells.iter().map(run_cell).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(plan.workers)
        .build()
        .map_err(|e| Error::InvalidConfig(format!("cannot start worker pool: {e}")))?;
    pool.install(|| cells.par_iter().map(run_cell).collect())
}

pub fn results_csv(records: &[BenchmarkRecord]) -> String {
    let mut out = format!("{RESULTS_HEADER}\n");
    for r in records {
        out.push_str(&r.csv_row());
        out.push('\n');
    }
    out
}

pub fn assignments_path(results: &Path) -> PathBuf {
    let mut name = results.as_os_str().to_owned();
    name.push(".assignments");
    PathBuf::from(name)
}

/// Writes the results CSV and its assignment sidecar.
pub fn write_results(records: &[BenchmarkRecord], path: &Path) -> Result<()> {
    std::fs::write(path, results_csv(records))?;
    let mut sidecar = String::new();
    for r in records {
        writeln!(sidecar, "{}", r.best_assignment).unwrap();
    }
    std::fs::write(assignments_path(path), sidecar)?;
    Ok(())
}

/// Row of a results file as read back, with its persisted assignment.
#[derive(Debug, Clone, PartialEq)]
pub struct StoredRecord {
    pub instance: InstanceId,
    pub solver: String,
    pub run_seed: u64,
    pub best_cost: Cost,
    pub bks_cost: Cost,
    pub gap_percent: f64,
    pub best_assignment: Assignment,
}

pub fn read_results(path: &Path) -> Result<Vec<StoredRecord>> {
    let text = std::fs::read_to_string(path)?;
    let sidecar = std::fs::read_to_string(assignments_path(path))?;
    let mut lines = text.lines();
    if lines.next().map(str::trim) != Some(RESULTS_HEADER) {
        return Err(Error::Parse { line: 1, msg: "missing results header".into() });
    }
    let mut bits = sidecar.lines();
    let mut out = Vec::new();
    for (idx, line) in lines.enumerate().filter(|(_, l)| !l.trim().is_empty()) {
        let line_no = idx + 2;
        let bad = |what: &str| Error::Parse { line: line_no, msg: format!("invalid {what}") };
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 13 {
            return Err(bad("field count"));
        }
        let assignment = bits.next().ok_or_else(|| bad("assignment sidecar (too short)"))?;
        out.push(StoredRecord {
            instance: InstanceId {
                n: f[0].parse().map_err(|_| bad("instance_n"))?,
                density: f[1].parse().map_err(|_| bad("density"))?,
                seed: f[2].parse().map_err(|_| bad("instance_seed"))?,
            },
            solver: f[3].to_string(),
            run_seed: f[7].parse().map_err(|_| bad("run_seed"))?,
            best_cost: f[8].parse().map_err(|_| bad("best_cost"))?,
            bks_cost: f[9].parse().map_err(|_| bad("bks_cost"))?,
            gap_percent: f[10].parse().map_err(|_| bad("gap_percent"))?,
            best_assignment: Assignment::parse(assignment)?,
        });
    }
    Ok(out)
}

/// Re-evaluates each stored assignment and checks it reproduces the
/// reported cost. Returns the indices of records that do not.
pub fn verify_records(records: &[StoredRecord], lambda: i64) -> Result<Vec<usize>> {
    let mut bad = Vec::new();
    for (i, r) in records.iter().enumerate() {
        let qubo = r.instance.qubo(lambda)?;
        if qubo.evaluate_cost(&r.best_assignment)? != r.best_cost {
            bad.push(i);
        }
    }
    Ok(bad)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub solver: String,
    pub n: usize,
    pub density: f64,
    pub budget: BudgetSpec,
    pub count: usize,
    pub mean_gap: f64,
    pub min_gap: f64,
    pub max_gap: f64,
    pub mean_wall_ms: f64,
}

pub const SUMMARY_HEADER: &str =
    "solver,instance_n,density,budget_kind,budget,count,mean_gap,min_gap,max_gap,mean_wall_ms";

/// Gap and timing statistics grouped by (solver, n, density, budget).
pub fn summarize(records: &[BenchmarkRecord]) -> Vec<SummaryRow> {
    let mut groups: BTreeMap<(String, usize, u64, String, String), (BudgetSpec, f64, Vec<f64>, Vec<f64>)> =
        BTreeMap::new();
    for r in records {
        let key = (
            r.solver.clone(),
            r.instance.n,
            r.instance.density.to_bits(),
            r.budget.kind().to_string(),
            r.budget.value(),
        );
        let entry = groups.entry(key).or_insert_with(|| (r.budget, r.instance.density, Vec::new(), Vec::new()));
        entry.2.push(r.gap_percent);
        entry.3.push(r.wall_ms);
    }
    groups
        .into_iter()
        .map(|((solver, n, _, _, _), (budget, density, mut gaps, mut walls))| {
            // Sorting first makes the sums independent of input order.
            gaps.sort_by(f64::total_cmp);
            walls.sort_by(f64::total_cmp);
            let count = gaps.len();
            SummaryRow {
                solver,
                n,
                density,
                budget,
                count,
                mean_gap: gaps.iter().sum::<f64>() / count as f64,
                min_gap: gaps[0],
                max_gap: gaps[count - 1],
                mean_wall_ms: walls.iter().sum::<f64>() / count as f64,
            }
        })
        .collect()
}

pub fn summary_csv(rows: &[SummaryRow]) -> String {
    let mut out = format!("{SUMMARY_HEADER}\n");
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{:.6},{:.6},{:.6},{:.3}",
            r.solver,
            r.n,
            r.density,
            r.budget.kind(),
            r.budget.value(),
            r.count,
            r.mean_gap,
            r.min_gap,
            r.max_gap,
            r.mean_wall_ms
        )
        .unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(solver: &str, n: usize, gap: f64) -> BenchmarkRecord {
        BenchmarkRecord {
            instance: InstanceId { n, density: 0.15, seed: 0 },
            solver: solver.into(),
            config_hash: "0".into(),
            budget: BudgetSpec::Steps(100),
            run_seed: 0,
            best_cost: -1,
            bks_cost: -2,
            gap_percent: gap,
            steps: 100,
            wall_ms: 1.0,
            best_assignment: Assignment::zeros(n),
        }
    }

    #[test]
    fn gap_examples() {
        assert_eq!(gap_percent(-20, -20).unwrap(), 0.0);
        assert_eq!(gap_percent(0, -20).unwrap(), 100.0);
        assert_eq!(gap_percent(35, -20).unwrap(), 100.0);
        assert_eq!(gap_percent(-15, -20).unwrap(), 25.0);
        assert_eq!(gap_percent(-25, -20).unwrap(), 0.0);
        assert_eq!(gap_percent(-1, 0), Err(Error::InvalidBks(0)));
        assert!(gap_percent(-1, 3).is_err());
    }

    #[test]
    fn provenance_roundtrip() {
        for p in [Provenance::Exact, Provenance::Tabu { sweeps: 600 }] {
            assert_eq!(p.to_string().parse::<Provenance>().unwrap(), p);
        }
        assert!("gurobi".parse::<Provenance>().is_err());
    }

    #[test]
    fn bks_cache_csv_roundtrip() {
        let mut cache = BksCache::default();
        cache.insert(BksEntry {
            id: InstanceId { n: 5, density: 0.3, seed: 2 },
            lambda: 8,
            cost: -2,
            provenance: Provenance::Exact,
        });
        cache.insert(BksEntry {
            id: InstanceId { n: 50, density: 0.05, seed: 0 },
            lambda: 8,
            cost: -31,
            provenance: Provenance::Tabu { sweeps: 1000 },
        });
        let back = BksCache::from_csv(&cache.to_csv()).unwrap();
        assert_eq!(back, cache);
        assert!(BksCache::from_csv("nope\n").is_err());
    }

    #[test]
    fn bks_exact_for_small_and_missing_for_large() {
        let small = InstanceId { n: 10, density: 0.3, seed: 1 };
        let e = resolve_bks(&BksCache::default(), &small, 8).unwrap();
        assert_eq!(e.provenance, Provenance::Exact);
        assert!(e.cost < 0);
        let large = InstanceId { n: 50, density: 0.3, seed: 1 };
        assert!(matches!(resolve_bks(&BksCache::default(), &large, 8), Err(Error::MissingBks { n: 50, .. })));
        let computed = compute_bks(large, 8, 2000).unwrap();
        assert_eq!(computed.provenance, Provenance::Tabu { sweeps: 2000 });
        let mut cache = BksCache::default();
        cache.insert(computed);
        assert_eq!(resolve_bks(&cache, &large, 8).unwrap(), computed);
    }

    #[test]
    fn empty_plan_yields_nothing() {
        assert!(run_plan(&BenchmarkPlan::empty(), &BksCache::default()).unwrap().is_empty());
        assert_eq!(results_csv(&[]), format!("{RESULTS_HEADER}\n"));
    }

    #[test]
    fn plan_cardinality() {
        let plan = BenchmarkPlan {
            nodes: vec![10],
            densities: vec![0.3],
            instance_seeds: vec![0],
            budgets: vec![BudgetSpec::Steps(200)],
            solvers: vec![SolverSpec::Nebm(NebmConfig::default()), SolverSpec::Tabu(TabuConfig::default())],
            run_seeds: (0..5).collect(),
            ..Default::default()
        };
        let records = run_plan(&plan, &BksCache::default()).unwrap();
        assert_eq!(records.len(), 10);
        for r in &records {
            assert!((0.0..=100.0).contains(&r.gap_percent));
            assert!(r.bks_cost < 0);
        }
    }

    #[test]
    fn plan_validation() {
        let bad = BenchmarkPlan { budgets: vec![BudgetSpec::Seconds(0.0)], ..BenchmarkPlan::empty() };
        assert!(bad.validate().is_err());
        let bad = BenchmarkPlan { densities: vec![1.2], ..BenchmarkPlan::empty() };
        assert!(bad.validate().is_err());
        let bad = BenchmarkPlan { lambda: 1, ..BenchmarkPlan::empty() };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn summary_single_and_mean() {
        let one = summarize(&[record("nebm", 10, 40.0)]);
        assert_eq!(one.len(), 1);
        assert_eq!((one[0].mean_gap, one[0].min_gap, one[0].max_gap, one[0].count), (40.0, 40.0, 40.0, 1));

        let rows = summarize(&[record("sa", 10, 0.0), record("sa", 10, 50.0), record("sa", 10, 100.0)]);
        assert_eq!(rows[0].mean_gap, 50.0);
    }

    #[test]
    fn summary_groups_and_permutation_invariance() {
        let mut recs = vec![
            record("sa", 10, 0.1),
            record("sa", 10, 0.7),
            record("nebm", 10, 3.3),
            record("sa", 25, 10.0),
            record("sa", 10, 0.2),
            record("nebm", 10, 1.1),
        ];
        let a = summarize(&recs);
        recs.reverse();
        recs.swap(1, 4);
        assert_eq!(summarize(&recs), a);
        assert_eq!(a.len(), 3);
        assert!(summary_csv(&a).starts_with(SUMMARY_HEADER));
    }

    #[test]
    fn results_persist_and_verify() {
        let plan = BenchmarkPlan {
            nodes: vec![12],
            densities: vec![0.2],
            instance_seeds: vec![3],
            budgets: vec![BudgetSpec::Steps(300)],
            run_seeds: vec![0, 1],
            ..Default::default()
        };
        let records = run_plan(&plan, &BksCache::default()).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("results.csv");
        write_results(&records, &path).unwrap();
        let stored = read_results(&path).unwrap();
        assert_eq!(stored.len(), records.len());
        assert!(verify_records(&stored, plan.lambda).unwrap().is_empty());
        for (s, r) in stored.iter().zip(&records) {
            assert_eq!(s.best_cost, r.best_cost);
            assert_eq!(s.best_assignment, r.best_assignment);
        }
    }
}
