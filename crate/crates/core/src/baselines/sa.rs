//! Sequential single-flip simulated annealing with the exact Metropolis test.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metropolis::{exact_accept, stream_seed};
use crate::qubo::{flip_delta, Cost, QuboMatrix};
use crate::run::{Budget, RunResult};
use crate::snn::InitMode;

/// Geometric temperature ramp from `t_start` to `t_end` over
/// `anneal_sweeps` sweeps, restarting from a fresh initial state whenever a
/// ramp completes and budget remains.
///
/// Unset temperatures are derived from the problem: the hot end accepts the
/// largest possible flip magnitude with probability 1/2 and the cold end
/// accepts the smallest nonzero one with probability 1/100.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SaConfig {
    pub t_start: Option<f64>,
    pub t_end: Option<f64>,
    pub anneal_sweeps: u64,
    pub seed: u64,
    pub init: InitMode,
}

impl Default for SaConfig {
    fn default() -> Self {
        Self { t_start: None, t_end: None, anneal_sweeps: 1000, seed: 0, init: InitMode::Random }
    }
}

/// One Metropolis decision, for auditing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SaDecision {
    pub sweep: u64,
    pub var: usize,
    pub delta: Cost,
    pub temperature: f64,
    pub u: f64,
    pub accepted: bool,
}

/// Default `(t_start, t_end)` for a problem.
pub fn default_temperatures(q: &QuboMatrix) -> (f64, f64) {
    let mut max_delta: Cost = 0;
    let mut min_delta = Cost::MAX;
    for i in 0..q.n() {
        let d = q.diag()[i].unsigned_abs() as Cost;
        let couplings: Cost = q.neighbors(i).iter().map(|&(_, c)| 2 * c.unsigned_abs() as Cost).sum();
        max_delta = max_delta.max(d + couplings);
        if d > 0 {
            min_delta = min_delta.min(d);
        }
        for &(_, c) in q.neighbors(i) {
            min_delta = min_delta.min(2 * c.unsigned_abs() as Cost);
        }
    }
    if max_delta == 0 {
        return (1.0, 1.0);
    }
    let hot = max_delta as f64 / std::f64::consts::LN_2;
    let cold = min_delta as f64 / 100f64.ln();
    (hot, cold.min(hot))
}

pub fn sequential_sa(q: &QuboMatrix, config: &SaConfig, budget: Budget) -> Result<RunResult> {
    sequential_sa_logged(q, config, budget, |_| {})
}

/// [`sequential_sa`] reporting every acceptance decision to `log`.
pub fn sequential_sa_logged(
    q: &QuboMatrix,
    config: &SaConfig,
    budget: Budget,
    mut log: impl FnMut(&SaDecision),
) -> Result<RunResult> {
    budget.validate()?;
    let n = q.n();
    if n == 0 {
        return Err(Error::EmptyProblem);
    }
    if config.anneal_sweeps == 0 {
        return Err(Error::InvalidConfig("anneal_sweeps must be at least 1".into()));
    }
    let (auto_hot, auto_cold) = default_temperatures(q);
    let t_start = config.t_start.unwrap_or(auto_hot);
    let t_end = config.t_end.unwrap_or(auto_cold.min(t_start));
    if !(t_start > 0.0 && t_end > 0.0) {
        return Err(Error::InvalidTemperature(t_start.min(t_end)));
    }
    let ratio =
        if config.anneal_sweeps > 1 { (t_end / t_start).powf(1.0 / (config.anneal_sweeps - 1) as f64) } else { 1.0 };

    let clock = budget.clock();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut restarts = 0u64;
    let mut x = config.init.assignment(n, stream_seed(config.seed, restarts))?;
    let mut z = q.local_fields(&x)?;
    let mut cost = q.evaluate_cost(&x)?;
    let mut best_cost = cost;
    let mut best = x.clone();
    let mut order: Vec<usize> = (0..n).collect();
    let mut flips_per_step = Vec::new();
    let mut temperature = t_start;
    let mut sweep = 0u64;

    while clock.allows(sweep) {
        let phase = sweep % config.anneal_sweeps;
        if phase == 0 {
            if sweep > 0 {
                restarts += 1;
                x = config.init.assignment(n, stream_seed(config.seed, restarts))?;
                z = q.local_fields(&x)?;
                cost = q.evaluate_cost(&x)?;
                if cost < best_cost {
                    best_cost = cost;
                    best.clone_from(&x);
                }
            }
            temperature = t_start;
        }
        order.shuffle(&mut rng);
        let mut flips = 0u32;
        for &i in &order {
            let delta = flip_delta(q.diag()[i], z.get(i), x.get(i));
            let u: f64 = rng.gen();
            let accepted = exact_accept(delta as f64, temperature, u)?;
            log(&SaDecision { sweep, var: i, delta, temperature, u, accepted });
            if accepted {
                q.flip_unchecked(x.as_mut_slice(), z.as_mut_slice(), i);
                cost += delta;
                flips += 1;
                if cost < best_cost {
                    best_cost = cost;
                    best.clone_from(&x);
                }
            }
        }
        flips_per_step.push(flips);
        temperature *= ratio;
        sweep += 1;
    }

    Ok(RunResult {
        best_cost,
        best_assignment: best,
        steps: sweep,
        elapsed: clock.elapsed(),
        flips_per_step,
        trajectory: Vec::new(),
    })
}
