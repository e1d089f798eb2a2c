//! Parallel simulated annealing for QUBO problems, emulating a spiking
//! non-equilibrium Boltzmann machine with stochastic refractory periods and
//! an integer-only Metropolis test.
//!
//! The crate also carries the pieces needed to benchmark it: conventional
//! single-flip baselines, a maximum-independent-set instance generator with
//! an exact oracle, and a percentage-gap harness.

pub mod baselines;
pub mod bench;
pub mod error;
pub mod format;
pub mod metropolis;
pub mod mis;
pub mod qubo;
pub mod run;
pub mod schedule;
pub mod snn;
pub mod solver;

pub use error::{Error, Result};
pub use qubo::{Assignment, Cost, LocalFields, QuboMatrix};
pub use run::{Budget, RunResult};
pub use solver::SolverSpec;
