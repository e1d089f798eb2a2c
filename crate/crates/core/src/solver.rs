//! Uniform dispatch over the available solvers.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::baselines::{sequential_sa, tabu_search, SaConfig, TabuConfig};
use crate::error::Result;
use crate::qubo::QuboMatrix;
use crate::run::{Budget, RunResult};
use crate::snn::{solve_nebm, NebmConfig};

/// A solver and its configuration. The seed inside the configuration is
/// replaced by the run seed at dispatch.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "solver", rename_all = "lowercase")]
pub enum SolverSpec {
    Nebm(NebmConfig),
    Sa(SaConfig),
    Tabu(TabuConfig),
}

impl SolverSpec {
    pub fn name(&self) -> &'static str {
        match self {
            SolverSpec::Nebm(_) => "nebm",
            SolverSpec::Sa(_) => "sa",
            SolverSpec::Tabu(_) => "tabu",
        }
    }

    /// Same configuration with the run seed substituted.
    pub fn with_seed(&self, seed: u64) -> Self {
        let mut spec = self.clone();
        match &mut spec {
            SolverSpec::Nebm(c) => c.seed = seed,
            SolverSpec::Sa(c) => c.seed = seed,
            SolverSpec::Tabu(c) => c.seed = seed,
        }
        spec
    }

    /// First 64 bits of SHA-256 over the seed-free configuration, as hex.
    ///
    /// The NEBM worker count is excluded too since it cannot change results.
    pub fn config_hash(&self) -> String {
        let mut canonical = self.with_seed(0);
        if let SolverSpec::Nebm(c) = &mut canonical {
            c.workers = 1;
        }
        let digest = Sha256::digest(format!("{canonical:?}").as_bytes());
        digest[..8].iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn solve(&self, qubo: &Arc<QuboMatrix>, seed: u64, budget: Budget) -> Result<RunResult> {
        match self.with_seed(seed) {
            SolverSpec::Nebm(c) => solve_nebm(qubo.clone(), &c, budget),
            SolverSpec::Sa(c) => sequential_sa(qubo, &c, budget),
            SolverSpec::Tabu(c) => tabu_search(qubo, &c, budget),
        }
    }
}
