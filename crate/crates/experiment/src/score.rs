//! The run score combining time and stalls.

use serde::{Deserialize, Serialize};

/// Runs scoring below this are good.
pub const GOOD_SCORE: f64 = 200.0;
/// Runs scoring above this are bad.
pub const BAD_SCORE: f64 = 400.0;

/// `S = (phi * n_s + t) / 2`.
pub fn score(t: f64, n_s: u64, phi: f64) -> f64 {
    (phi * n_s as f64 + t) / 2.0
}

/// `phi = mean(t) / mean(n_s)`, which makes the mean score equal the mean
/// time over the same records. `None` when there are no stalls at all.
pub fn compute_phi(samples: &[(f64, u64)]) -> Option<f64> {
    let stalls: u64 = samples.iter().map(|s| s.1).sum();
    if samples.is_empty() || stalls == 0 {
        return None;
    }
    let t: f64 = samples.iter().map(|s| s.0).sum();
    Some(t / stalls as f64)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Grade {
    Good,
    Middling,
    Bad,
}

pub fn grade(s: f64) -> Grade {
    if s < GOOD_SCORE {
        Grade::Good
    } else if s > BAD_SCORE {
        Grade::Bad
    } else {
        Grade::Middling
    }
}
