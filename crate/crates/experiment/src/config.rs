//! Everything that determines a run apart from the world, paratope and seed.

use idionet_core::{
    CoreError, NetworkParams, Params, Priority, ReinforcementConfig, SelectionMode, Strategy,
};
use idionet_sim::SimConfig;
use serde::{Deserialize, Serialize};

/// Decision ticks happen every this many control ticks.
pub const DECISION_PERIOD: u64 = 10;
/// Control ticks between a decision and its assessment.
pub const ASSESSMENT_DELAY: u64 = 5;
/// Default score weight of one stall.
pub const DEFAULT_PHI: f64 = 9.08;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub system: SelectionMode,
    pub k1: f64,
    pub b: f64,
    pub k2: f64,
    /// Simulated seconds before a run is abandoned.
    pub timeout: f64,
    pub phi: f64,
    pub priority: Priority,
    pub reinforcement: ReinforcementConfig,
    pub sim: SimConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        let p = NetworkParams::<f64>::standard(SelectionMode::S3);
        Self {
            system: SelectionMode::S3,
            k1: p.k1,
            b: p.b,
            k2: p.k2,
            timeout: 1200.0,
            phi: DEFAULT_PHI,
            priority: Priority::standard(),
            reinforcement: ReinforcementConfig::default(),
            sim: SimConfig::default(),
        }
    }
}

impl RunConfig {
    pub fn with_system(mut self, system: SelectionMode) -> Self {
        self.system = system;
        self
    }

    pub fn with_strategy(mut self, strategy: Strategy) -> Self {
        self.reinforcement.strategy = strategy;
        self
    }

    pub fn strategy(&self) -> Strategy {
        self.reinforcement.strategy
    }

    pub fn params(&self) -> Result<Params, CoreError> {
        NetworkParams::new(self.system, self.k1, self.b, self.k2)
    }

    pub fn validate(&self) -> Result<(), CoreError> {
        self.params()?;
        self.reinforcement.validate()?;
        if !(self.timeout > 0.0 && self.timeout.is_finite()) {
            return Err(CoreError::InvalidParameter(format!(
                "timeout = {} must be > 0",
                self.timeout
            )));
        }
        if !(self.phi >= 0.0 && self.phi.is_finite()) {
            return Err(CoreError::InvalidParameter(format!("phi = {} must be >= 0", self.phi)));
        }
        Ok(())
    }
}
