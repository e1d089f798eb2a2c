//! Conventional single-flip solvers used as the control arm in benchmarks.

mod sa;
mod tabu;

pub use sa::{default_temperatures, sequential_sa, sequential_sa_logged, SaConfig, SaDecision};
pub use tabu::{default_tenure, tabu_search, tabu_search_logged, TabuConfig, TabuMove, TabuState};
