//! Solver options shared by `solve` and `trace`, readable from flags or a
//! TOML file.

use std::path::Path;

use clap::{Args, ValueEnum};
use nebm::baselines::{SaConfig, TabuConfig};
use nebm::schedule::{RefractoryPolicy, Schedule, DEFAULT_REHEAT};
use nebm::snn::{InitMode, NebmConfig};
use nebm::{Budget, SolverSpec};
use serde::Deserialize;

use crate::CliError;

pub const DEFAULT_STEPS: u64 = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolverKind {
    Nebm,
    Sa,
    Tabu,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScheduleKind {
    Geometric,
    Linear,
    Constant,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InitKind {
    Random,
    Zeros,
    Ones,
}

/// Every field is optional so that a config file can fill the gaps left by
/// the command line.
#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverOptions {
    /// Solver to run [default: nebm]
    #[arg(long, value_enum)]
    pub solver: Option<SolverKind>,

    /// Run seed; per-neuron and restart streams are derived from it [default: 0]
    #[arg(long)]
    pub seed: Option<u64>,

    /// Step budget (sweeps for sa, iterations for tabu) [default: 10000]
    #[arg(long, conflicts_with = "seconds")]
    pub steps: Option<u64>,

    /// Wall-clock budget in seconds, instead of --steps
    #[arg(long)]
    pub seconds: Option<f64>,

    /// Initial assignment [default: random]
    #[arg(long, value_enum)]
    pub init: Option<InitKind>,

    /// nebm: temperature schedule [default: geometric]
    #[arg(long, value_enum)]
    pub schedule: Option<ScheduleKind>,

    /// nebm: starting integer temperature; for a constant schedule, the
    /// temperature [default: largest initial |flip cost|]
    #[arg(long)]
    pub t0: Option<u64>,

    /// nebm: geometric cooling factor as NUM/DEN [default: 19/20]
    #[arg(long)]
    pub alpha: Option<String>,

    /// nebm: linear cooling decrement [default: 1]
    #[arg(long)]
    pub decrement: Option<u64>,

    /// nebm: steps between temperature updates [default: 10]
    #[arg(long)]
    pub refresh: Option<u64>,

    /// nebm: temperature floor [default: 0]
    #[arg(long)]
    pub t_min: Option<u64>,

    /// nebm: refreshes spent at the floor before restarting the ramp, 0 to
    /// never restart [default: 10]
    #[arg(long)]
    pub reheat: Option<u64>,

    /// nebm: shortest refractory period in steps [default: 1]
    #[arg(long)]
    pub refractory_min: Option<u32>,

    /// nebm: longest refractory period in steps [default: 8]
    #[arg(long)]
    pub refractory_max: Option<u32>,

    /// nebm: worker threads for the neuron phase [default: 1]
    #[arg(long)]
    pub workers: Option<usize>,

    /// sa: hot temperature [default: derived from the coefficients]
    #[arg(long)]
    pub t_start: Option<f64>,

    /// sa: cold temperature [default: derived from the coefficients]
    #[arg(long)]
    pub t_end: Option<f64>,

    /// sa: sweeps per annealing ramp before restarting [default: 1000]
    #[arg(long)]
    pub anneal_sweeps: Option<u64>,

    /// tabu: tenure [default: min(20, n/4), at least 1]
    #[arg(long)]
    pub tenure: Option<u64>,

    /// tabu: restart from a fresh state after this many iterations without
    /// a new best [default: never]
    #[arg(long)]
    pub restart_after: Option<u64>,
}

impl SolverOptions {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        toml::from_str(&text).map_err(|e| CliError::config(format!("{}: {e}", path.display())))
    }

    /// Flags win over the file; a budget given on the command line replaces
    /// the file's budget of either kind.
    pub fn over(self, file: SolverOptions) -> SolverOptions {
        let flag_budget = self.steps.is_some() || self.seconds.is_some();
        SolverOptions {
            solver: self.solver.or(file.solver),
            seed: self.seed.or(file.seed),
            steps: if flag_budget { self.steps } else { file.steps },
            seconds: if flag_budget { self.seconds } else { file.seconds },
            init: self.init.or(file.init),
            schedule: self.schedule.or(file.schedule),
            t0: self.t0.or(file.t0),
            alpha: self.alpha.or(file.alpha),
            decrement: self.decrement.or(file.decrement),
            refresh: self.refresh.or(file.refresh),
            t_min: self.t_min.or(file.t_min),
            reheat: self.reheat.or(file.reheat),
            refractory_min: self.refractory_min.or(file.refractory_min),
            refractory_max: self.refractory_max.or(file.refractory_max),
            workers: self.workers.or(file.workers),
            t_start: self.t_start.or(file.t_start),
            t_end: self.t_end.or(file.t_end),
            anneal_sweeps: self.anneal_sweeps.or(file.anneal_sweeps),
            tenure: self.tenure.or(file.tenure),
            restart_after: self.restart_after.or(file.restart_after),
        }
    }

    pub fn budget(&self) -> Result<Budget, CliError> {
        let budget = match (self.steps, self.seconds) {
            (Some(_), Some(_)) => return Err(CliError::config("--steps and --seconds are mutually exclusive")),
            (_, Some(s)) if !(s > 0.0 && s.is_finite()) => {
                return Err(CliError::config(format!("--seconds must be positive, got {s}")))
            }
            (_, Some(s)) => Budget::wall(std::time::Duration::from_secs_f64(s)),
            (steps, None) => Budget::steps(steps.unwrap_or(DEFAULT_STEPS)),
        };
        Ok(budget)
    }

    fn init_mode(&self) -> InitMode {
        match self.init.unwrap_or(InitKind::Random) {
            InitKind::Random => InitMode::Random,
            InitKind::Zeros => InitMode::Zeros,
            InitKind::Ones => InitMode::Ones,
        }
    }

    fn schedule_value(&self) -> Result<Schedule, CliError> {
        let refresh = self.refresh.unwrap_or(10);
        let t_min = self.t_min.unwrap_or(0);
        let reheat = match self.reheat.unwrap_or(DEFAULT_REHEAT) {
            0 => None,
            r => Some(r),
        };
        let schedule = match self.schedule.unwrap_or(ScheduleKind::Geometric) {
            ScheduleKind::Geometric => {
                let (num, den) = match &self.alpha {
                    Some(a) => parse_ratio(a)?,
                    None => (19, 20),
                };
                Schedule::Geometric { t0: self.t0, num, den, refresh, t_min, reheat }
            }
            ScheduleKind::Linear => {
                Schedule::Linear { t0: self.t0, decrement: self.decrement.unwrap_or(1), refresh, t_min, reheat }
            }
            ScheduleKind::Constant => match self.t0 {
                Some(t) => Schedule::Constant { t },
                None => return Err(CliError::config("a constant schedule needs --t0")),
            },
        };
        schedule.validate()?;
        Ok(schedule)
    }

    pub fn solver_kind(&self) -> SolverKind {
        self.solver.unwrap_or(SolverKind::Nebm)
    }

    pub fn seed_value(&self) -> u64 {
        self.seed.unwrap_or(0)
    }

    pub fn nebm_config(&self) -> Result<NebmConfig, CliError> {
        let refractory = RefractoryPolicy::new(self.refractory_min.unwrap_or(1), self.refractory_max.unwrap_or(8))?;
        Ok(NebmConfig {
            schedule: self.schedule_value()?,
            refractory,
            seed: self.seed_value(),
            init: self.init_mode(),
            workers: self.workers.unwrap_or(1),
        })
    }

    pub fn spec(&self) -> Result<SolverSpec, CliError> {
        let seed = self.seed_value();
        Ok(match self.solver_kind() {
            SolverKind::Nebm => SolverSpec::Nebm(self.nebm_config()?),
            SolverKind::Sa => SolverSpec::Sa(SaConfig {
                t_start: self.t_start,
                t_end: self.t_end,
                anneal_sweeps: self.anneal_sweeps.unwrap_or(SaConfig::default().anneal_sweeps),
                seed,
                init: self.init_mode(),
            }),
            SolverKind::Tabu => SolverSpec::Tabu(TabuConfig {
                tenure: self.tenure,
                seed,
                init: self.init_mode(),
                restart_after: self.restart_after,
            }),
        })
    }
}

fn parse_ratio(s: &str) -> Result<(u64, u64), CliError> {
    let bad = || CliError::config(format!("--alpha expects NUM/DEN, got {s:?}"));
    let (num, den) = s.split_once('/').ok_or_else(bad)?;
    Ok((num.trim().parse().map_err(|_| bad())?, den.trim().parse().map_err(|_| bad())?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_match_library() {
        let o = SolverOptions::default();
        assert_eq!(o.nebm_config().unwrap(), NebmConfig::default());
        assert_eq!(o.budget().unwrap(), Budget::steps(DEFAULT_STEPS));
    }

    #[test]
    fn flags_override_file() {
        let file: SolverOptions = toml::from_str("seed = 4\nsteps = 50\nrefresh = 3\nalpha = \"9/10\"").unwrap();
        let flags = SolverOptions { seed: Some(7), seconds: Some(1.5), ..Default::default() };
        let merged = flags.over(file);
        assert_eq!(merged.seed, Some(7));
        assert_eq!(merged.steps, None);
        assert_eq!(merged.refresh, Some(3));
        let cfg = merged.nebm_config().unwrap();
        assert_eq!(
            cfg.schedule,
            Schedule::Geometric { t0: None, num: 9, den: 10, refresh: 3, t_min: 0, reheat: Some(10) }
        );
    }

    #[test]
    fn rejects_bad_values() {
        assert!(toml::from_str::<SolverOptions>("bogus = 1").is_err());
        assert!(parse_ratio("0.95").is_err());
        let o = SolverOptions { refractory_min: Some(5), refractory_max: Some(2), ..Default::default() };
        assert!(o.nebm_config().is_err());
        let o = SolverOptions { schedule: Some(ScheduleKind::Constant), ..Default::default() };
        assert!(o.nebm_config().is_err());
        let o = SolverOptions { steps: Some(1), seconds: Some(1.0), ..Default::default() };
        assert!(o.budget().is_err());
    }
}
