//! Antigens, their priority ranking and the weighted antigen array `G`.

use serde::{Deserialize, Serialize};

use crate::error::CoreError;
use crate::scalar::Scalar;

pub const OBSTACLE_FRONT: usize = 0;
pub const OBSTACLE_LEFT: usize = 1;
pub const OBSTACLE_RIGHT: usize = 2;
/// Average laser reading above threshold.
pub const OPEN_SPACE: usize = 3;
/// Average laser reading below threshold.
pub const LOW_AVERAGE: usize = 4;
pub const STALLED: usize = 5;
pub const BLOCKED_BEHIND: usize = 6;
pub const MARKER_SEEN: usize = 7;

pub const NAMES: [&str; 8] = [
    "obstacle-front",
    "obstacle-left",
    "obstacle-right",
    "open-space",
    "low-average",
    "stalled",
    "blocked-behind",
    "marker-seen",
];

/// Weight of the dominant antigen in `G`.
pub const DOMINANT_WEIGHT: f64 = 2.0;
/// Weight of every other presenting antigen in `G`.
pub const PRESENT_WEIGHT: f64 = 0.25;

pub fn is_obstacle(antigen: usize) -> bool {
    antigen <= OBSTACLE_RIGHT
}

/// A total order over the antigens, most urgent first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Priority {
    order: Vec<usize>,
}

impl Priority {
    pub fn new(order: Vec<usize>) -> Result<Self, CoreError> {
        let n = order.len();
        let mut seen = vec![false; n];
        for &a in &order {
            if a >= n || seen[a] {
                return Err(CoreError::BadPriority(n));
            }
            seen[a] = true;
        }
        Ok(Self { order })
    }

    /// Stalled > blocked behind > obstacles (front, left, right) > low
    /// average > marker seen > open space.
    pub fn standard() -> Self {
        Self {
            order: vec![
                STALLED,
                BLOCKED_BEHIND,
                OBSTACLE_FRONT,
                OBSTACLE_LEFT,
                OBSTACLE_RIGHT,
                LOW_AVERAGE,
                MARKER_SEEN,
                OPEN_SPACE,
            ],
        }
    }

    /// Identity order `0 > 1 > ... > L-1`.
    pub fn by_index(antigens: usize) -> Self {
        Self {
            order: (0..antigens).collect(),
        }
    }

    pub fn antigens(&self) -> usize {
        self.order.len()
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn dominant(&self, presenting: &[usize]) -> Option<usize> {
        self.order.iter().copied().find(|a| presenting.contains(a))
    }
}

impl TryFrom<Vec<usize>> for Priority {
    type Error = CoreError;
    fn try_from(v: Vec<usize>) -> Result<Self, CoreError> {
        Self::new(v)
    }
}

impl From<Priority> for Vec<usize> {
    fn from(p: Priority) -> Self {
        p.order
    }
}

/// The presenting antigens of one decision tick and the dominant one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stimulus {
    antigens: usize,
    presenting: Vec<usize>,
    dominant: usize,
}

impl Stimulus {
    pub fn new(presenting: &[usize], priority: &Priority) -> Result<Self, CoreError> {
        let dominant = priority.dominant(presenting).ok_or(CoreError::NoAntigen)?;
        Self::with_dominant(priority.antigens(), presenting, dominant)
    }

    pub fn with_dominant(
        antigens: usize,
        presenting: &[usize],
        dominant: usize,
    ) -> Result<Self, CoreError> {
        if presenting.is_empty() {
            return Err(CoreError::NoAntigen);
        }
        if let Some(&bad) = presenting.iter().find(|&&a| a >= antigens) {
            return Err(CoreError::UnknownAntigen(bad));
        }
        if !presenting.contains(&dominant) {
            return Err(CoreError::UnknownAntigen(dominant));
        }
        let mut presenting = presenting.to_vec();
        presenting.sort_unstable();
        presenting.dedup();
        Ok(Self {
            antigens,
            presenting,
            dominant,
        })
    }

    pub fn antigens(&self) -> usize {
        self.antigens
    }

    pub fn presenting(&self) -> &[usize] {
        &self.presenting
    }

    pub fn dominant(&self) -> usize {
        self.dominant
    }

    pub fn is_presenting(&self, antigen: usize) -> bool {
        self.presenting.contains(&antigen)
    }

    /// Builds `G` for one antibody. In strong mode the dominant weight is 2
    /// only when that antibody's paratope match to the dominant antigen is
    /// positive; in weak mode it is always 2.
    pub fn antigen_array<F: Scalar>(&self, dominant_positive: bool, weak: bool) -> AntigenArray<F> {
        let mut weights = vec![F::zero(); self.antigens];
        for &a in &self.presenting {
            weights[a] = F::lit(PRESENT_WEIGHT);
        }
        weights[self.dominant] = if dominant_positive || weak {
            F::lit(DOMINANT_WEIGHT)
        } else {
            F::zero()
        };
        AntigenArray {
            weights,
            dominant: self.dominant,
        }
    }
}

/// The weighted antigen array `G(x_i)` seen by one antibody.
#[derive(Clone, Debug, PartialEq)]
pub struct AntigenArray<F> {
    weights: Vec<F>,
    dominant: usize,
}

impl<F: Scalar> AntigenArray<F> {
    pub fn weights(&self) -> &[F] {
        &self.weights
    }

    pub fn dominant(&self) -> usize {
        self.dominant
    }
}

/// Standalone form of [`Stimulus::antigen_array`].
pub fn build_antigen_array<F: Scalar>(
    antigens: usize,
    presenting: &[usize],
    priority: &Priority,
    dominant_positive: bool,
    weak: bool,
) -> Result<AntigenArray<F>, CoreError> {
    if priority.antigens() != antigens {
        return Err(CoreError::Dimension(format!(
            "priority ranks {} antigens, expected {antigens}",
            priority.antigens()
        )));
    }
    Ok(Stimulus::new(presenting, priority)?.antigen_array(dominant_positive, weak))
}
