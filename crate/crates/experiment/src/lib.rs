//! Seeded runs of the immune-network robot, the run score, sweep and
//! comparison protocols, and the statistics used to compare systems.

pub mod config;
pub mod metrics;
pub mod output;
pub mod runner;
pub mod score;
pub mod stats;
pub mod suite;

pub use config::{RunConfig, DEFAULT_PHI};
pub use metrics::{Decision, Rates, RunMetrics, StallSequence};
pub use runner::{run_single, RunObserver, RunOutcome, RunRecord};
pub use score::{compute_phi, score};
pub use stats::{welch_one_tailed, Describe, TTest};
pub use suite::{
    compare_protocol, paratope_set, run_batch, summarize, sweep, Axis, Protocol, ProtocolResult,
    RunSpec, SuiteSummary, Sweep, SweepPoint,
};

#[derive(Debug, thiserror::Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Core(#[from] idionet_core::CoreError),
    #[error(transparent)]
    Sim(#[from] idionet_sim::SimError),
    #[error("{0}")]
    Io(String),
    #[error("invalid protocol: {0}")]
    Protocol(String),
}
