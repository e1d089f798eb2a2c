//! Budgets and results shared by every solver.

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qubo::{Assignment, Cost};

/// Stop condition: a step (or sweep) count, a wall-clock limit, or both.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Budget {
    pub max_steps: Option<u64>,
    pub wall: Option<Duration>,
}

impl Budget {
    pub fn steps(n: u64) -> Self {
        Self { max_steps: Some(n), wall: None }
    }

    pub fn wall(limit: Duration) -> Self {
        Self { max_steps: None, wall: Some(limit) }
    }

    pub fn validate(&self) -> Result<()> {
        match (self.max_steps, self.wall) {
            (None, None) => Err(Error::InvalidConfig("budget needs a step count or a wall-clock limit".into())),
            (_, Some(w)) if w.is_zero() => Err(Error::InvalidConfig("wall-clock budget must be positive".into())),
            _ => Ok(()),
        }
    }

    pub(crate) fn clock(&self) -> BudgetClock {
        BudgetClock { budget: *self, start: Instant::now() }
    }
}

pub(crate) struct BudgetClock {
    budget: Budget,
    start: Instant,
}

impl BudgetClock {
    /// Whether another step may start after `done` steps.
    pub(crate) fn allows(&self, done: u64) -> bool {
        if let Some(max) = self.budget.max_steps {
            if done >= max {
                return false;
            }
        }
        match self.budget.wall {
            Some(limit) => self.start.elapsed() < limit,
            None => true,
        }
    }

    pub(crate) fn elapsed(&self) -> Duration {
        self.start.elapsed()
    }
}

/// Outcome of one solver run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunResult {
    pub best_cost: Cost,
    pub best_assignment: Assignment,
    /// Steps (NEBM) or sweeps (baselines) executed.
    pub steps: u64,
    pub elapsed: Duration,
    /// Number of variables flipped in each step or sweep.
    pub flips_per_step: Vec<u32>,
    /// `(step, cost)` samples, empty unless requested.
    pub trajectory: Vec<(u64, Cost)>,
}

impl RunResult {
    /// Equality over everything except wall time.
    pub fn same_outcome(&self, other: &Self) -> bool {
        self.best_cost == other.best_cost
            && self.best_assignment == other.best_assignment
            && self.steps == other.steps
            && self.flips_per_step == other.flips_per_step
            && self.trajectory == other.trajectory
    }

    pub fn mean_flips_per_step(&self) -> f64 {
        if self.flips_per_step.is_empty() {
            return 0.0;
        }
        self.flips_per_step.iter().map(|&f| f as f64).sum::<f64>() / self.flips_per_step.len() as f64
    }
}
