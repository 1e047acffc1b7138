//! Turning a sensor bundle into the set of presenting antigens.

use idionet_core::antigen::{
    BLOCKED_BEHIND, LOW_AVERAGE, MARKER_SEEN, OBSTACLE_FRONT, OBSTACLE_LEFT, OBSTACLE_RIGHT,
    OPEN_SPACE, STALLED,
};
use idionet_core::{CoreError, Priority, Stimulus, ANTIGEN_COUNT};
use serde::{Deserialize, Serialize};

use crate::sensors::SensorBundle;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AntigenThresholds {
    /// Minimum laser reading (m) below which an obstacle antigen fires.
    pub obstacle_distance: f64,
    /// Average laser reading (m) below which antigen 4 fires instead of 3.
    pub low_average: f64,
    /// Rear sonar average (m) below which the robot is blocked behind.
    pub blocked_behind: f64,
}

impl Default for AntigenThresholds {
    fn default() -> Self {
        Self {
            obstacle_distance: 0.6,
            low_average: 2.0,
            blocked_behind: 0.4,
        }
    }
}

/// Presenting antigens, in ascending id order.
pub fn presenting_antigens(s: &SensorBundle, th: &AntigenThresholds) -> Vec<usize> {
    let mut out = Vec::with_capacity(4);
    if s.laser.min_reading < th.obstacle_distance {
        out.push(match s.laser.min_sector {
            0..=2 => OBSTACLE_LEFT,
            3 | 4 => OBSTACLE_FRONT,
            _ => OBSTACLE_RIGHT,
        });
    }
    out.push(if s.laser.average < th.low_average {
        LOW_AVERAGE
    } else {
        OPEN_SPACE
    });
    if s.stalled {
        out.push(STALLED);
    }
    if s.rear_average < th.blocked_behind {
        out.push(BLOCKED_BEHIND);
    }
    if s.blob.visible {
        out.push(MARKER_SEEN);
    }
    out.sort_unstable();
    out
}

/// The stimulus for one decision tick. Never fails with the standard
/// thresholds since antigen 3 or 4 always presents.
pub fn detect_antigens(
    s: &SensorBundle,
    th: &AntigenThresholds,
    priority: &Priority,
) -> Result<Stimulus, CoreError> {
    debug_assert_eq!(priority.antigens(), ANTIGEN_COUNT);
    Stimulus::new(&presenting_antigens(s, th), priority)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sensors::{BlobReading, SectorSummary};

    fn bundle(min_reading: f64, min_sector: usize, average: f64) -> SensorBundle {
        SensorBundle {
            laser: SectorSummary {
                min_reading,
                min_sector,
                max_sector: 3,
                average,
                sector_min: [min_reading; 8],
                sector_mean: [average; 8],
            },
            rear_average: 5.0,
            blob: BlobReading::default(),
            stalled: false,
            odometer: 0.0,
        }
    }

    #[test]
    fn stalled_dominates_marker() {
        let mut b = bundle(0.3, 3, 1.5);
        b.stalled = true;
        b.blob.visible = true;
        let s = detect_antigens(&b, &AntigenThresholds::default(), &Priority::standard()).unwrap();
        assert_eq!(s.dominant(), STALLED);
        assert_eq!(s.presenting(), &[OBSTACLE_FRONT, LOW_AVERAGE, STALLED, MARKER_SEEN]);
    }

    #[test]
    fn obstacle_side_partition() {
        let th = AntigenThresholds::default();
        let p = Priority::standard();
        let s = detect_antigens(&bundle(0.4, 1, 3.0), &th, &p).unwrap();
        assert_eq!(s.dominant(), OBSTACLE_LEFT);
        assert_eq!(s.presenting(), &[OBSTACLE_LEFT, OPEN_SPACE]);
        assert_eq!(detect_antigens(&bundle(0.4, 6, 3.0), &th, &p).unwrap().dominant(), OBSTACLE_RIGHT);
        assert_eq!(detect_antigens(&bundle(0.4, 4, 3.0), &th, &p).unwrap().dominant(), OBSTACLE_FRONT);
    }

    #[test]
    fn open_field_presents_only_open_space() {
        let s = detect_antigens(&bundle(8.0, 0, 8.0), &AntigenThresholds::default(), &Priority::standard())
            .unwrap();
        assert_eq!(s.presenting(), &[OPEN_SPACE]);
    }

    #[test]
    fn blocked_behind() {
        let mut b = bundle(3.0, 3, 3.0);
        b.rear_average = 0.2;
        let s = detect_antigens(&b, &AntigenThresholds::default(), &Priority::standard()).unwrap();
        assert_eq!(s.dominant(), BLOCKED_BEHIND);
    }
}
