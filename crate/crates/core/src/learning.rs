//! Reinforcement of the paratope matrix.
//!
//! Half a decision period after an antibody starts executing, its effect is
//! scored from the change in sensor readings. The scoring algorithm is
//! chosen by the dominant antigen; the change in average laser reading is
//! added to every score as a global term. The score is then added to the
//! paratope entry linking the executed antibody to the dominant antigen.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::antigen::{self, is_obstacle};
use crate::error::CoreError;
use crate::matrix::Matrix;
use crate::paratope::ParatopeMatrix;
use crate::scalar::Scalar;

/// Lower bound of freshly drawn paratope entries.
pub const INIT_LOW: f64 = 0.50;
/// Upper bound of freshly drawn paratope entries.
pub const INIT_HIGH: f64 = 0.75;
/// Row mean every fresh paratope is shifted to.
pub const INIT_MEAN: f64 = 0.625;

/// Draws entries uniformly in `[0.50, 0.75]`, then shifts each row by
/// `delta = 0.625 - row_mean` so every row averages exactly 0.625.
pub fn init_paratope<F: Scalar, R: Rng + ?Sized>(
    antibodies: usize,
    antigens: usize,
    rng: &mut R,
) -> ParatopeMatrix<F> {
    let mut m = Matrix::from_fn(antibodies, antigens, |_, _| {
        F::lit(rng.random_range(INIT_LOW..=INIT_HIGH))
    });
    let len = F::from_usize(antigens).expect("antigen count");
    for i in 0..antibodies {
        let row = m.row_mut(i);
        let mean = row.iter().copied().sum::<F>() / len;
        let delta = F::lit(INIT_MEAN) - mean;
        for v in row.iter_mut() {
            *v = *v + delta;
        }
    }
    ParatopeMatrix::new(m).expect("shifted entries stay within [0.375, 0.875]")
}

/// `P[w, d] <- clamp(P[w, d] + rf, 0, 1)`. Touches exactly one entry.
pub fn apply_reinforcement<F: Scalar>(
    paratope: &mut ParatopeMatrix<F>,
    winner: usize,
    dominant: usize,
    rf: F,
) -> Result<(), CoreError> {
    if winner >= paratope.antibodies() {
        return Err(CoreError::UnknownAntibody(winner));
    }
    if dominant >= paratope.antigens() {
        return Err(CoreError::UnknownAntigen(dominant));
    }
    let v = paratope.get(winner, dominant) + rf;
    paratope.set_clipped(winner, dominant, v);
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    #[default]
    Strong,
    /// Applies the tracking score to the obstacle-avoidance antibodies for
    /// every dominant antigen, and weights the dominant antigen 2 even for
    /// antibodies with zero match to it.
    Weak,
}

impl Strategy {
    pub fn is_weak(self) -> bool {
        self == Strategy::Weak
    }
}

impl std::str::FromStr for Strategy {
    type Err = CoreError;
    fn from_str(s: &str) -> Result<Self, CoreError> {
        match s.to_ascii_lowercase().as_str() {
            "strong" => Ok(Strategy::Strong),
            "weak" => Ok(Strategy::Weak),
            _ => Err(CoreError::InvalidParameter(format!("unknown strategy {s:?}"))),
        }
    }
}

impl std::fmt::Display for Strategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Strategy::Strong => "strong",
            Strategy::Weak => "weak",
        })
    }
}

/// Scoring coefficients. Gains are in score units per metre (or per m/s
/// for `speed_gain`); bonuses and penalties are plain score units.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ReinforcementConfig {
    pub strategy: Strategy,
    pub obstacle_gain: f64,
    pub open_space_gain: f64,
    pub movement_gain: f64,
    pub speed_gain: f64,
    /// Reward for keeping a door marker in view.
    pub tracking_bonus: f64,
    /// Extra reward when the marker ends up dead ahead.
    pub heading_bonus: f64,
    pub lost_marker_penalty: f64,
    pub reverse_penalty: f64,
    pub no_move_penalty: f64,
    /// Charged when the robot was free at selection and blocked at
    /// assessment.
    pub collision_penalty: f64,
    pub slow_penalty: f64,
    pub sector_change_attenuation: f64,
    /// m/s below which a forward antibody counts as slow.
    pub slow_threshold: f64,
    /// Blob area (px) above which a visible marker counts as close.
    pub close_marker_area: f64,
    /// Minimum odometry change (m) that counts as movement.
    pub movement_epsilon: f64,
    /// Bearing (rad) within which the robot is heading at the marker.
    pub heading_tolerance: f64,
    /// Antibodies scored by the tracking algorithm under the weak strategy.
    pub weak_antibodies: Vec<usize>,
}

impl Default for ReinforcementConfig {
    fn default() -> Self {
        Self {
            strategy: Strategy::Strong,
            obstacle_gain: 0.10,
            open_space_gain: 0.05,
            movement_gain: 0.25,
            speed_gain: 0.02,
            tracking_bonus: 0.02,
            heading_bonus: 0.06,
            lost_marker_penalty: 0.05,
            reverse_penalty: 0.05,
            no_move_penalty: 0.05,
            collision_penalty: 0.10,
            slow_penalty: 0.04,
            sector_change_attenuation: 4.0,
            slow_threshold: 0.5,
            close_marker_area: 400.0,
            movement_epsilon: 0.01,
            heading_tolerance: 5f64.to_radians(),
            weak_antibodies: vec![1, 2, 4, 5, 6, 7, 8, 9, 12],
        }
    }
}

impl ReinforcementConfig {
    pub fn weak() -> Self {
        Self {
            strategy: Strategy::Weak,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<(), CoreError> {
        let gains = [
            ("obstacle_gain", self.obstacle_gain),
            ("open_space_gain", self.open_space_gain),
            ("movement_gain", self.movement_gain),
            ("speed_gain", self.speed_gain),
            ("tracking_bonus", self.tracking_bonus),
            ("heading_bonus", self.heading_bonus),
            ("lost_marker_penalty", self.lost_marker_penalty),
            ("reverse_penalty", self.reverse_penalty),
            ("no_move_penalty", self.no_move_penalty),
            ("collision_penalty", self.collision_penalty),
            ("slow_penalty", self.slow_penalty),
        ];
        for (name, v) in gains {
            if !(v > 0.0 && v.is_finite()) {
                return Err(CoreError::InvalidParameter(format!("{name} = {v} must be > 0")));
            }
        }
        if !(self.sector_change_attenuation >= 1.0) {
            return Err(CoreError::InvalidParameter(format!(
                "sector_change_attenuation = {} must be >= 1",
                self.sector_change_attenuation
            )));
        }
        if self.movement_epsilon < 0.0 || self.heading_tolerance < 0.0 {
            return Err(CoreError::InvalidParameter(
                "movement_epsilon and heading_tolerance must be >= 0".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MarkerSighting {
    /// Radians, positive to the left of the heading.
    pub bearing: f64,
    /// Pixels.
    pub area: f64,
}

/// Sensor values read at one instant.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SensorSample {
    pub min_reading: f64,
    pub min_sector: usize,
    pub average: f64,
    /// Cumulative odometry (m).
    pub odometer: f64,
    pub marker: Option<MarkerSighting>,
    /// Motion was blocked during the last control tick.
    pub stalled: bool,
}

/// Readings at selection time and half a period later, plus the decision
/// being assessed.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AssessmentSnapshot {
    pub before: SensorSample,
    pub after: SensorSample,
    pub dominant: usize,
    pub winner: usize,
    pub winner_is_reverse: bool,
    /// Linear speed the winner commands (m/s, negative when reversing).
    pub commanded_speed: f64,
}

impl AssessmentSnapshot {
    fn average_change(&self) -> f64 {
        self.after.average - self.before.average
    }
}

/// Change in average reading, with an extra penalty for reverse antibodies
/// that reduced it and one for running into something. Added to every
/// score.
pub fn global_term(snap: &AssessmentSnapshot, cfg: &ReinforcementConfig) -> f64 {
    let delta = snap.average_change();
    let mut r = cfg.open_space_gain * delta;
    if snap.winner_is_reverse && delta < 0.0 {
        r -= cfg.reverse_penalty;
    }
    if snap.after.stalled && !snap.before.stalled {
        r -= cfg.collision_penalty;
    }
    r
}

/// Dominant antigens 0-2.
pub fn score_obstacle(snap: &AssessmentSnapshot, cfg: &ReinforcementConfig) -> f64 {
    let mut r = cfg.obstacle_gain * (snap.after.min_reading - snap.before.min_reading);
    if snap.after.min_sector != snap.before.min_sector {
        r /= cfg.sector_change_attenuation;
    }
    if snap.winner_is_reverse {
        r -= cfg.reverse_penalty;
    }
    r + global_term(snap, cfg)
}

/// Dominant antigen 4. The global term is the whole score.
pub fn score_open_space(snap: &AssessmentSnapshot, cfg: &ReinforcementConfig) -> f64 {
    global_term(snap, cfg)
}

/// Dominant antigens 5 and 6.
pub fn score_stall(snap: &AssessmentSnapshot, cfg: &ReinforcementConfig) -> f64 {
    let moved = (snap.after.odometer - snap.before.odometer).abs();
    let r = if moved >= cfg.movement_epsilon {
        cfg.movement_gain * moved
    } else {
        -cfg.no_move_penalty
    };
    r + global_term(snap, cfg)
}

/// Dominant antigens 3 and 7.
pub fn score_track(snap: &AssessmentSnapshot, cfg: &ReinforcementConfig) -> f64 {
    let speed = snap.commanded_speed;
    let mut r = if speed < 0.0 {
        -cfg.reverse_penalty
    } else if speed < cfg.slow_threshold {
        -cfg.slow_penalty
    } else {
        cfg.speed_gain * speed
    };
    match (snap.before.marker, snap.after.marker) {
        // Backing away from a marker earns nothing for keeping it in view.
        _ if speed < 0.0 => {}
        (Some(_), Some(now)) => {
            r += cfg.tracking_bonus;
            if now.bearing.abs() <= cfg.heading_tolerance {
                r += cfg.heading_bonus;
            }
        }
        (Some(was), None) if was.area > cfg.close_marker_area => r -= cfg.lost_marker_penalty,
        _ => {}
    }
    r + global_term(snap, cfg)
}

/// Strong-strategy dispatch on the dominant antigen.
fn score_strong(snap: &AssessmentSnapshot, cfg: &ReinforcementConfig) -> Result<f64, CoreError> {
    match snap.dominant {
        d if is_obstacle(d) => Ok(score_obstacle(snap, cfg)),
        antigen::LOW_AVERAGE => Ok(score_open_space(snap, cfg)),
        antigen::STALLED | antigen::BLOCKED_BEHIND => Ok(score_stall(snap, cfg)),
        antigen::OPEN_SPACE | antigen::MARKER_SEEN => Ok(score_track(snap, cfg)),
        d => Err(CoreError::UnknownAntigen(d)),
    }
}

/// The reinforcement score `r_f` for one assessed decision.
pub fn compute_rf(snap: &AssessmentSnapshot, cfg: &ReinforcementConfig) -> Result<f64, CoreError> {
    if cfg.strategy.is_weak() && cfg.weak_antibodies.contains(&snap.winner) {
        if snap.dominant >= crate::ANTIGEN_COUNT {
            return Err(CoreError::UnknownAntigen(snap.dominant));
        }
        return Ok(score_track(snap, cfg));
    }
    score_strong(snap, cfg)
}
