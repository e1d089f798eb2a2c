//! Synchronous simulator of the two-population spiking annealer: one
//! variable neuron per QUBO variable plus a cost integrator.
//!
//! Each step runs in phases separated by barriers:
//!
//! 1. every neuron computes its local cost `x_i (q_ii + z_i)` and, unless
//!    refractory, its flip delta and the fixed-point Metropolis decision,
//!    reading only pre-step state;
//! 2. accepted flips are applied and their field updates sent to neighbors;
//!    flipped neurons enter a random refractory period;
//! 3. the integrator sums the local costs spiked in the previous step, which
//!    is the cost of the assignment from two steps back;
//! 4. the temperature advances on its schedule.
//!
//! The neuron phase may be partitioned across worker threads. Each neuron owns
//! its generator, so the trajectory does not depend on the worker count.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metropolis::{fixed_accept, stream_seed, Rng24, TempHat};
use crate::qubo::{flip_delta, Assignment, Cost, LocalFields, QuboMatrix};
use crate::run::{Budget, RunResult};
use crate::schedule::{sample_unchecked, RefractoryPolicy, Schedule};

/// Stream index reserved for the random initial assignment.
const INIT_STREAM: u64 = u64::MAX;

/// Smallest neuron chunk handed to a worker.
const MIN_CHUNK: usize = 256;

/// How the initial assignment is chosen.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InitMode {
    /// Independent fair bits from the run seed.
    #[default]
    Random,
    Zeros,
    Ones,
    Given(Assignment),
}

impl InitMode {
    /// Materializes the assignment for `n` variables.
    ///
    /// Random bits come from a ChaCha8 stream keyed by
    /// `stream_seed(seed, u64::MAX)`.
    pub fn assignment(&self, n: usize, seed: u64) -> Result<Assignment> {
        match self {
            InitMode::Random => {
                let mut rng = ChaCha8Rng::seed_from_u64(stream_seed(seed, INIT_STREAM));
                Ok(Assignment::from((0..n).map(|_| rng.gen::<bool>()).collect::<Vec<_>>()))
            }
            InitMode::Zeros => Ok(Assignment::zeros(n)),
            InitMode::Ones => Ok(Assignment::ones(n)),
            InitMode::Given(x) if x.len() == n => Ok(x.clone()),
            InitMode::Given(x) => Err(Error::LengthMismatch { expected: n, actual: x.len() }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct NebmConfig {
    pub schedule: Schedule,
    pub refractory: RefractoryPolicy,
    pub seed: u64,
    pub init: InitMode,
    /// Worker threads for the neuron phase; 1 runs inline.
    pub workers: usize,
}

impl Default for NebmConfig {
    fn default() -> Self {
        Self {
            schedule: Schedule::default(),
            refractory: RefractoryPolicy::default(),
            seed: 0,
            init: InitMode::Random,
            workers: 1,
        }
    }
}

impl NebmConfig {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

/// Private memory of one variable neuron besides its bit and field.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Neuron {
    refractory_remaining: u32,
    rng: Rng24,
    t_hat: TempHat,
    /// `C_i` of the pre-step assignment, spiked to the integrator next step.
    local_cost: Cost,
}

/// Snapshot of a neuron's full state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NeuronView {
    pub x_curr: bool,
    pub x_prev1: bool,
    pub x_prev2: bool,
    pub z: Cost,
    pub refractory_remaining: u32,
    pub rng: Rng24,
    pub t_hat: TempHat,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegratorState {
    /// Most recently emitted cost (lagged by two steps).
    pub current_cost: Cost,
    pub best_cost: Cost,
    pub best_assignment: Assignment,
    /// Step whose emission produced the best cost; 0 for the initial state.
    pub best_step: u64,
}

/// Trace record for one step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepReport {
    pub step: u64,
    pub flips: Vec<usize>,
    /// Cost of the assignment held two steps earlier.
    pub cost_emitted: Cost,
    pub t_hat: TempHat,
}

impl StepReport {
    /// `step flips_count cost_emitted tHat`.
    pub fn trace_line(&self) -> String {
        format!("{} {} {} {}", self.step, self.flips.len(), self.cost_emitted, self.t_hat.0)
    }
}

/// Header comment for trace files.
pub const TRACE_HEADER: &str = "# step flips_count cost_emitted t_hat";

pub struct Network {
    qubo: Arc<QuboMatrix>,
    x: Assignment,
    z: LocalFields,
    x_prev1: Assignment,
    x_prev2: Assignment,
    neurons: Vec<Neuron>,
    integrator: IntegratorState,
    step_count: u64,
    schedule: Schedule,
    t_start: TempHat,
    floor_refreshes: u64,
    refractory: RefractoryPolicy,
    flips_per_step: Vec<u32>,
    pool: Option<Arc<rayon::ThreadPool>>,
}

impl Network {
    pub fn new(qubo: impl Into<Arc<QuboMatrix>>, config: &NebmConfig) -> Result<Self> {
        let qubo = qubo.into();
        let n = qubo.n();
        if n == 0 {
            return Err(Error::EmptyProblem);
        }
        config.refractory.validate()?;
        config.schedule.validate()?;
        if config.workers == 0 {
            return Err(Error::InvalidConfig("worker count must be at least 1".into()));
        }

        let x = config.init.assignment(n, config.seed)?;
        let z = qubo.local_fields(&x)?;
        let auto_t0 = (0..n).map(|i| flip_delta(qubo.diag()[i], z.get(i), x.get(i)).unsigned_abs()).max().unwrap_or(0);
        let t_hat = config.schedule.initial(auto_t0);

        let neurons = (0..n)
            .map(|i| Neuron {
                refractory_remaining: 0,
                rng: Rng24::for_stream(config.seed, i as u64),
                t_hat,
                local_cost: if x.get(i) { qubo.diag()[i] as Cost + z.get(i) } else { 0 },
            })
            .collect::<Vec<_>>();
        let initial_cost: Cost = neurons.iter().map(|nr| nr.local_cost).sum();

        let pool = if config.workers > 1 {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(config.workers)
                .build()
                .map_err(|e| Error::InvalidConfig(format!("cannot start worker pool: {e}")))?;
            Some(Arc::new(pool))
        } else {
            None
        };

        Ok(Self {
            integrator: IntegratorState {
                current_cost: initial_cost,
                best_cost: initial_cost,
                best_assignment: x.clone(),
                best_step: 0,
            },
            x_prev1: x.clone(),
            x_prev2: x.clone(),
            x,
            z,
            neurons,
            qubo,
            step_count: 0,
            schedule: config.schedule,
            t_start: t_hat,
            floor_refreshes: 0,
            refractory: config.refractory,
            flips_per_step: Vec::new(),
            pool,
        })
    }

    pub fn qubo(&self) -> &QuboMatrix {
        &self.qubo
    }

    pub fn n(&self) -> usize {
        self.qubo.n()
    }

    pub fn assignment(&self) -> &Assignment {
        &self.x
    }

    pub fn fields(&self) -> &LocalFields {
        &self.z
    }

    pub fn integrator(&self) -> &IntegratorState {
        &self.integrator
    }

    pub fn step_count(&self) -> u64 {
        self.step_count
    }

    /// Temperature used by the next step.
    pub fn t_hat(&self) -> TempHat {
        self.neurons[0].t_hat
    }

    pub fn flips_per_step(&self) -> &[u32] {
        &self.flips_per_step
    }

    pub fn neuron(&self, i: usize) -> NeuronView {
        let nr = &self.neurons[i];
        NeuronView {
            x_curr: self.x.get(i),
            x_prev1: self.x_prev1.get(i),
            x_prev2: self.x_prev2.get(i),
            z: self.z.get(i),
            refractory_remaining: nr.refractory_remaining,
            rng: nr.rng,
            t_hat: nr.t_hat,
        }
    }

    /// Advances the network by one synchronous step.
    pub fn step(&mut self) -> StepReport {
        let step = self.step_count;
        let t_hat = self.t_hat();

        // Shift histories so x_prev2 holds the assignment two steps back.
        std::mem::swap(&mut self.x_prev2, &mut self.x_prev1);
        self.x_prev1.as_mut_slice().copy_from_slice(self.x.as_slice());

        // Integrator input: local costs spiked during the previous step.
        let cost_emitted: Cost = self.neurons.iter().map(|nr| nr.local_cost).sum();

        let flips = self.decide();

        for nr in &mut self.neurons {
            nr.refractory_remaining = nr.refractory_remaining.saturating_sub(1);
        }
        for &i in &flips {
            self.qubo.flip_unchecked(self.x.as_mut_slice(), self.z.as_mut_slice(), i);
            let nr = &mut self.neurons[i];
            nr.refractory_remaining = sample_unchecked(self.refractory, &mut nr.rng);
        }

        self.integrator.current_cost = cost_emitted;
        if cost_emitted < self.integrator.best_cost {
            self.integrator.best_cost = cost_emitted;
            self.integrator.best_assignment.as_mut_slice().copy_from_slice(self.x_prev2.as_slice());
            self.integrator.best_step = step;
        }

        self.flips_per_step.push(flips.len() as u32);
        self.step_count += 1;
        if self.step_count.is_multiple_of(self.schedule.refresh()) {
            let mut next = self.schedule.advance(t_hat);
            if let Some(limit) = self.schedule.reheat() {
                if t_hat.0 <= self.schedule.t_min() {
                    self.floor_refreshes += 1;
                    if self.floor_refreshes >= limit {
                        self.floor_refreshes = 0;
                        next = self.t_start;
                    }
                }
            }
            for nr in &mut self.neurons {
                nr.t_hat = next;
            }
        }

        StepReport { step, flips, cost_emitted, t_hat }
    }

    /// Neuron phase: local costs and flip decisions from pre-step state only.
    fn decide(&mut self) -> Vec<usize> {
        let qubo = &*self.qubo;
        let x = self.x.as_slice();
        let z = self.z.as_slice();
        let neuron_step = |i: usize, nr: &mut Neuron| -> bool {
            let q_ii = qubo.diag()[i];
            nr.local_cost = if x[i] { q_ii as Cost + z[i] } else { 0 };
            if nr.refractory_remaining > 0 {
                return false;
            }
            let delta = flip_delta(q_ii, z[i], x[i]);
            let rand = nr.rng.next24();
            fixed_accept(delta, nr.t_hat, rand)
        };

        match &self.pool {
            None => self.neurons.iter_mut().enumerate().filter_map(|(i, nr)| neuron_step(i, nr).then_some(i)).collect(),
            Some(pool) => {
                let neurons = &mut self.neurons;
                pool.install(|| {
                    neurons
                        .par_iter_mut()
                        .enumerate()
                        .with_min_len(MIN_CHUNK)
                        .filter_map(|(i, nr)| neuron_step(i, nr).then_some(i))
                        .collect()
                })
            }
        }
    }

    /// Steps until the budget is spent.
    pub fn run(&mut self, budget: Budget) -> Result<RunResult> {
        self.run_with(budget, 0, |_| {})
    }

    /// Like [`Network::run`], sampling `(step, cost_emitted)` every
    /// `trajectory_every` steps (0 disables) and passing each report to
    /// `observer`.
    pub fn run_with(
        &mut self,
        budget: Budget,
        trajectory_every: u64,
        mut observer: impl FnMut(&StepReport),
    ) -> Result<RunResult> {
        budget.validate()?;
        let clock = budget.clock();
        let first = self.flips_per_step.len();
        let mut trajectory = Vec::new();
        let mut done = 0u64;
        while clock.allows(done) {
            let report = self.step();
            if trajectory_every > 0 && report.step.is_multiple_of(trajectory_every) {
                trajectory.push((report.step, report.cost_emitted));
            }
            observer(&report);
            done += 1;
        }
        Ok(RunResult {
            best_cost: self.integrator.best_cost,
            best_assignment: self.integrator.best_assignment.clone(),
            steps: done,
            elapsed: clock.elapsed(),
            flips_per_step: self.flips_per_step[first..].to_vec(),
            trajectory,
        })
    }

    /// Equality of the full simulated state, ignoring the worker pool.
    pub fn same_state(&self, other: &Self) -> bool {
        self.qubo == other.qubo
            && self.x == other.x
            && self.z == other.z
            && self.x_prev1 == other.x_prev1
            && self.x_prev2 == other.x_prev2
            && self.neurons == other.neurons
            && self.integrator == other.integrator
            && self.step_count == other.step_count
            && self.flips_per_step == other.flips_per_step
    }
}

/// Builds a network and runs it.
pub fn solve_nebm(qubo: impl Into<Arc<QuboMatrix>>, config: &NebmConfig, budget: Budget) -> Result<RunResult> {
    Network::new(qubo, config)?.run(budget)
}
