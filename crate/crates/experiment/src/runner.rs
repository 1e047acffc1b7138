//! The control loop of one run.

use idionet_core::{
    apply_reinforcement, compute_rf, AssessmentSnapshot, CoreError, Network, Paratope, SensorSample,
    Stimulus, Trace,
};
use idionet_sim::repertoire::standard_idiotope;
use idionet_sim::repertoire::FALLBACK_ANTIBODY;
use idionet_sim::{Repertoire, RobotState, Simulator, World};
use serde::{Deserialize, Serialize};

use crate::config::{RunConfig, ASSESSMENT_DELAY, DECISION_PERIOD};
use crate::metrics::{Decision, RunMetrics};
use crate::score::score;
use crate::ExperimentError;

/// Hooks for streaming per-tick output while a run executes.
pub trait RunObserver {
    fn on_decision(&mut self, _tick: u64, _trace: &Trace) {}
    fn on_step(&mut self, _tick: u64, _robot: &RobotState, _dominant: usize, _winner: usize) {}
}

impl RunObserver for () {}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub system: idionet_core::SelectionMode,
    pub strategy: idionet_core::Strategy,
    pub k1: f64,
    pub b: f64,
    pub k2: f64,
    pub world: String,
    pub paratope: String,
    pub seed: u64,
    /// Simulated seconds to reach the goal, or the timeout.
    pub t: f64,
    pub n_s: u64,
    /// Score under the configured `phi`.
    pub s: f64,
    pub completed: bool,
    pub doors_passed: usize,
    pub metrics: RunMetrics,
}

impl RunRecord {
    pub fn rescore(&mut self, phi: f64) {
        self.s = score(self.t, self.n_s, phi);
    }
}

#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub record: RunRecord,
    /// The paratope after this run's learning.
    pub paratope: Paratope,
}

struct Pending {
    decision: usize,
    before: SensorSample,
    dominant: usize,
    winner: usize,
    reverse: bool,
    speed: f64,
}

/// Selects with the strong array first, then the weak one, then falls back
/// to the wander behaviour. Returns the trace when a network selection
/// succeeded.
fn decide(
    network: &mut Network,
    paratope: &Paratope,
    stimulus: &Stimulus,
    weak: bool,
    fallback: usize,
) -> Result<(usize, usize, Option<Trace>), CoreError> {
    let mut attempt = network.decide(paratope, stimulus, weak);
    if matches!(attempt, Err(CoreError::NoMatchingAntibody)) && !weak {
        attempt = network.decide(paratope, stimulus, true);
    }
    match attempt {
        Ok(trace) => Ok((trace.stage1_winner, trace.final_winner, Some(trace))),
        Err(CoreError::NoMatchingAntibody) => Ok((fallback, fallback, None)),
        Err(e) => Err(e),
    }
}

pub fn run_single(
    cfg: &RunConfig,
    world: &World,
    paratope: Paratope,
    paratope_id: &str,
    seed: u64,
    observer: &mut dyn RunObserver,
) -> Result<RunOutcome, ExperimentError> {
    cfg.validate()?;
    let mut paratope = paratope;
    let mut network = Network::new(standard_idiotope(), cfg.params()?)?;
    let weak = cfg.strategy().is_weak();
    let repertoire = Repertoire::standard();
    let max_ticks = (cfg.timeout / idionet_sim::DT).round() as u64;
    let mut sim = Simulator::new(world.clone(), repertoire, cfg.sim.clone(), seed);

    let mut decisions: Vec<Decision> = Vec::new();
    let mut pending: Option<Pending> = None;
    let mut dominant = 0;
    let mut completed = false;
    let mut doors = 0;

    while sim.tick() < max_ticks {
        let tick = sim.tick();
        if tick % DECISION_PERIOD == 0 {
            let sensors = sim.sense();
            let stimulus = sim.detect(&sensors, &cfg.priority)?;
            dominant = stimulus.dominant();
            let (stage1, winner, trace) =
                decide(&mut network, &paratope, &stimulus, weak, FALLBACK_ANTIBODY)?;
            if let Some(trace) = &trace {
                observer.on_decision(tick, trace);
            }
            sim.set_antibody(winner)?;
            let reverse = sim.antibody().is_reverse();
            pending = Some(Pending {
                decision: decisions.len(),
                before: sensors.sample(),
                dominant,
                winner,
                reverse,
                speed: sim.command().0,
            });
            decisions.push(Decision {
                tick,
                dominant,
                stage1_winner: stage1,
                winner,
                rf: None,
            });
        } else if tick % DECISION_PERIOD == ASSESSMENT_DELAY {
            if let Some(p) = pending.take() {
                let snap = AssessmentSnapshot {
                    before: p.before,
                    after: sim.sense().sample(),
                    dominant: p.dominant,
                    winner: p.winner,
                    winner_is_reverse: p.reverse,
                    commanded_speed: p.speed,
                };
                let rf = compute_rf(&snap, &cfg.reinforcement)?;
                apply_reinforcement(&mut paratope, p.winner, p.dominant, rf)?;
                if rf < 0.0 {
                    network.penalize(p.winner);
                }
                decisions[p.decision].rf = Some(rf);
            }
        }
        let out = sim.step();
        doors += out.passed.len();
        observer.on_step(sim.tick(), sim.robot(), dominant, sim.antibody().id);
        if out.goal {
            completed = true;
            break;
        }
    }

    let t = if completed { sim.time() } else { cfg.timeout };
    let metrics = RunMetrics::from_decisions(&decisions);
    let n_s = metrics.stall_ticks as u64;
    let params = network.params();
    Ok(RunOutcome {
        record: RunRecord {
            system: params.mode,
            strategy: cfg.strategy(),
            k1: params.k1,
            b: params.b,
            k2: params.k2,
            world: world.name.clone(),
            paratope: paratope_id.to_string(),
            seed,
            t,
            n_s,
            s: score(t, n_s, cfg.phi),
            completed,
            doors_passed: doors,
            metrics,
        },
        paratope,
    })
}
