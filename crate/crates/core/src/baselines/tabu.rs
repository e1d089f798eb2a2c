//! Single-flip tabu search.
//!
//! Every iteration scores all admissible flips and takes the best one, even
//! when it goes uphill. A flipped variable stays tabu for `tenure`
//! iterations; aspiration admits a tabu move that would produce a new global
//! best.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metropolis::stream_seed;
use crate::qubo::{flip_delta, Assignment, Cost, LocalFields, QuboMatrix};
use crate::run::{Budget, RunResult};
use crate::snn::InitMode;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TabuConfig {
    /// Tabu tenure; `None` uses `max(1, min(20, n / 4))`.
    pub tenure: Option<u64>,
    pub seed: u64,
    pub init: InitMode,
    /// Restart from a fresh initial state after this many iterations without
    /// a new best. `None` never restarts.
    pub restart_after: Option<u64>,
}

impl Default for TabuConfig {
    fn default() -> Self {
        Self { tenure: None, seed: 0, init: InitMode::Random, restart_after: None }
    }
}

pub fn default_tenure(n: usize) -> u64 {
    (n as u64 / 4).clamp(1, 20)
}

/// A single move taken by [`TabuState::iterate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TabuMove {
    pub var: usize,
    pub delta: Cost,
    pub aspiration: bool,
}

#[derive(Debug, Clone)]
pub struct TabuState<'q> {
    q: &'q QuboMatrix,
    tenure: u64,
    /// Variable `i` is tabu while the iteration index is below `tabu_until[i]`.
    tabu_until: Vec<u64>,
    iteration: u64,
    x: Assignment,
    z: LocalFields,
    cost: Cost,
    best: Assignment,
    best_cost: Cost,
}

impl<'q> TabuState<'q> {
    pub fn new(q: &'q QuboMatrix, tenure: u64, start: Assignment) -> Result<Self> {
        if tenure == 0 {
            return Err(Error::InvalidConfig("tabu tenure must be at least 1".into()));
        }
        let z = q.local_fields(&start)?;
        let cost = q.evaluate_cost(&start)?;
        Ok(Self {
            q,
            tenure,
            tabu_until: vec![0; q.n()],
            iteration: 0,
            best: start.clone(),
            best_cost: cost,
            x: start,
            z,
            cost,
        })
    }

    pub fn iteration(&self) -> u64 {
        self.iteration
    }

    pub fn tabu_until(&self) -> &[u64] {
        &self.tabu_until
    }

    pub fn is_tabu(&self, i: usize) -> bool {
        self.iteration < self.tabu_until[i]
    }

    pub fn current(&self) -> (&Assignment, Cost) {
        (&self.x, self.cost)
    }

    pub fn best(&self) -> (&Assignment, Cost) {
        (&self.best, self.best_cost)
    }

    /// Performs one move. Returns `None` when every variable is tabu and no
    /// move aspirates; the iteration counter still advances.
    pub fn iterate(&mut self) -> Option<TabuMove> {
        let mut chosen: Option<TabuMove> = None;
        for i in 0..self.q.n() {
            let delta = flip_delta(self.q.diag()[i], self.z.get(i), self.x.get(i));
            let tabu = self.is_tabu(i);
            let aspiration = tabu && self.cost + delta < self.best_cost;
            if tabu && !aspiration {
                continue;
            }
            if chosen.is_none_or(|c| delta < c.delta) {
                chosen = Some(TabuMove { var: i, delta, aspiration });
            }
        }
        if let Some(mv) = chosen {
            self.q.flip_unchecked(self.x.as_mut_slice(), self.z.as_mut_slice(), mv.var);
            self.cost += mv.delta;
            self.tabu_until[mv.var] = self.iteration + self.tenure;
            if self.cost < self.best_cost {
                self.best_cost = self.cost;
                self.best.clone_from(&self.x);
            }
        }
        self.iteration += 1;
        chosen
    }

    /// Jumps to a new current state, keeping the incumbent.
    fn reset(&mut self, start: Assignment) {
        self.z = self.q.local_fields(&start).expect("length checked at construction");
        self.cost = self.q.cost_unchecked(start.as_slice());
        self.x = start;
        self.tabu_until.iter_mut().for_each(|t| *t = 0);
        if self.cost < self.best_cost {
            self.best_cost = self.cost;
            self.best.clone_from(&self.x);
        }
    }
}

pub fn tabu_search(q: &QuboMatrix, config: &TabuConfig, budget: Budget) -> Result<RunResult> {
    run(q, config, budget, None)
}

/// [`tabu_search`] reporting each move with the state it was taken from.
pub fn tabu_search_logged(
    q: &QuboMatrix,
    config: &TabuConfig,
    budget: Budget,
    mut log: impl FnMut(&TabuState<'_>, Option<TabuMove>),
) -> Result<RunResult> {
    run(q, config, budget, Some(&mut log))
}

type MoveLog<'a> = &'a mut dyn FnMut(&TabuState<'_>, Option<TabuMove>);

fn run(q: &QuboMatrix, config: &TabuConfig, budget: Budget, mut log: Option<MoveLog<'_>>) -> Result<RunResult> {
    budget.validate()?;
    let n = q.n();
    if n == 0 {
        return Err(Error::EmptyProblem);
    }
    let tenure = config.tenure.unwrap_or_else(|| default_tenure(n));
    let mut restarts = 0u64;
    let mut state = TabuState::new(q, tenure, config.init.assignment(n, stream_seed(config.seed, restarts))?)?;
    let clock = budget.clock();
    let mut flips_per_step = Vec::new();
    let mut last_improvement = 0u64;
    let mut best_seen = state.best_cost;

    while clock.allows(state.iteration) {
        let mv = match log.as_mut() {
            Some(log) => {
                let before = state.clone();
                let mv = state.iterate();
                log(&before, mv);
                mv
            }
            None => state.iterate(),
        };
        flips_per_step.push(mv.is_some() as u32);
        if state.best_cost < best_seen {
            best_seen = state.best_cost;
            last_improvement = state.iteration;
        }
        if let Some(limit) = config.restart_after {
            if state.iteration - last_improvement >= limit {
                restarts += 1;
                state.reset(config.init.assignment(n, stream_seed(config.seed, restarts))?);
                last_improvement = state.iteration;
            }
        }
    }

    Ok(RunResult {
        best_cost: state.best_cost,
        best_assignment: state.best,
        steps: state.iteration,
        elapsed: clock.elapsed(),
        flips_per_step,
        trajectory: Vec::new(),
    })
}
