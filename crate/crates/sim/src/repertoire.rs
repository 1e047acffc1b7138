//! The sixteen antibodies (behaviours), their fixed idiotope, and the
//! worked selection example used as a golden fixture.
//!
//! | id | behaviour                       | id | behaviour                  |
//! |----|---------------------------------|----|----------------------------|
//! | 0  | forward 2.0 m/s                 | 8  | spin left 60 deg/s         |
//! | 1  | forward 0.4, left 30 deg/s      | 9  | spin right 60              |
//! | 2  | forward 0.4, right 30           | 10 | reverse 0.4                |
//! | 3  | forward 1.0                     | 11 | reverse 1.0                |
//! | 4  | forward 0.4, left 60            | 12 | wander 0.4 to widest gap   |
//! | 5  | forward 0.4, right 60           | 13 | reverse 0.4, left 30       |
//! | 6  | forward 0.4, left 90            | 14 | reverse 0.4, right 30      |
//! | 7  | forward 0.4, right 90           | 15 | track door marker at 1.0   |

use idionet_core::{IdiotopeMatrix, Idiotope, Paratope, ParatopeMatrix, Scalar};
use serde::{Deserialize, Serialize};

use crate::sensors::{sector_center, BlobReading};

/// Maximum linear speed (m/s).
pub const MAX_SPEED: f64 = 2.0;
/// Executed when no antibody matches the presenting antigens at all.
pub const FALLBACK_ANTIBODY: usize = 12;
/// Maximum turn rate (rad/s), 90 deg/s.
pub const MAX_TURN: f64 = std::f64::consts::FRAC_PI_2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AntibodyKind {
    Forward,
    Turn,
    Reverse,
    WanderMaxGap,
    TrackMarker,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Antibody {
    pub id: usize,
    pub kind: AntibodyKind,
    /// m/s, negative when reversing.
    pub linear: f64,
    /// rad/s, positive turns left.
    pub angular: f64,
}

impl Antibody {
    pub fn is_reverse(&self) -> bool {
        self.linear < 0.0
    }

    /// Velocity command given the widest laser sector and the camera blob.
    /// Only the wander and tracking behaviours look at their inputs.
    pub fn command(&self, max_sector: usize, blob: &BlobReading) -> (f64, f64) {
        match self.kind {
            AntibodyKind::Forward | AntibodyKind::Turn | AntibodyKind::Reverse => {
                (self.linear, self.angular)
            }
            AntibodyKind::WanderMaxGap => {
                let bearing = sector_center(max_sector);
                (self.linear, (1.5 * bearing).clamp(-MAX_TURN, MAX_TURN))
            }
            AntibodyKind::TrackMarker => {
                if blob.visible {
                    let turn = (3.0 * blob.bearing).clamp(-MAX_TURN, MAX_TURN);
                    (self.linear, turn)
                } else {
                    (0.4, 0.0)
                }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Repertoire {
    antibodies: Vec<Antibody>,
}

fn deg(d: f64) -> f64 {
    d.to_radians()
}

impl Repertoire {
    pub fn standard() -> Self {
        use AntibodyKind::*;
        let ab = |id, kind, linear, angular_deg: f64| Antibody {
            id,
            kind,
            linear,
            angular: deg(angular_deg),
        };
        Self {
            antibodies: vec![
                ab(0, Forward, 2.0, 0.0),
                ab(1, Turn, 0.4, 30.0),
                ab(2, Turn, 0.4, -30.0),
                ab(3, Forward, 1.0, 0.0),
                ab(4, Turn, 0.4, 60.0),
                ab(5, Turn, 0.4, -60.0),
                ab(6, Turn, 0.4, 90.0),
                ab(7, Turn, 0.4, -90.0),
                ab(8, Turn, 0.0, 60.0),
                ab(9, Turn, 0.0, -60.0),
                ab(10, Reverse, -0.4, 0.0),
                ab(11, Reverse, -1.0, 0.0),
                ab(12, WanderMaxGap, 0.4, 0.0),
                ab(13, Reverse, -0.4, 30.0),
                ab(14, Reverse, -0.4, -30.0),
                ab(15, TrackMarker, 1.0, 0.0),
            ],
        }
    }

    pub fn len(&self) -> usize {
        self.antibodies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.antibodies.is_empty()
    }

    pub fn get(&self, id: usize) -> &Antibody {
        &self.antibodies[id]
    }

    pub fn iter(&self) -> impl Iterator<Item = &Antibody> {
        self.antibodies.iter()
    }
}

/// Columns: obstacle front, left, right, open space, low average, stalled,
/// blocked behind, marker seen.
const IDIOTOPE: [[f64; 8]; 16] = [
    // fast straight: bad near anything
    [0.50, 0.00, 0.00, 0.00, 0.25, 0.25, 0.00, 0.00],
    // left turns: bad with an obstacle on the left
    [0.25, 0.50, 0.00, 0.00, 0.00, 0.25, 0.00, 0.00],
    [0.25, 0.00, 0.50, 0.00, 0.00, 0.25, 0.00, 0.00],
    [0.50, 0.00, 0.00, 0.00, 0.00, 0.50, 0.00, 0.00],
    // slow sharp turns: wasteful in the open
    [0.00, 0.50, 0.00, 0.25, 0.00, 0.25, 0.00, 0.00],
    [0.00, 0.00, 0.50, 0.25, 0.00, 0.25, 0.00, 0.00],
    [0.25, 0.50, 0.00, 0.00, 0.00, 0.25, 0.00, 0.00],
    [0.25, 0.00, 0.50, 0.00, 0.00, 0.25, 0.00, 0.00],
    [0.00, 0.50, 0.00, 0.50, 0.00, 0.00, 0.00, 0.00],
    [0.00, 0.00, 0.50, 0.50, 0.00, 0.00, 0.00, 0.00],
    // reversing: bad when blocked behind, in the open or with a marker ahead
    [0.00, 0.00, 0.00, 0.25, 0.00, 0.00, 0.50, 0.25],
    [0.00, 0.00, 0.00, 0.25, 0.00, 0.00, 0.75, 0.00],
    // wander: pointless when stalled
    [0.00, 0.00, 0.00, 0.00, 0.00, 0.50, 0.00, 0.50],
    [0.00, 0.00, 0.00, 0.25, 0.00, 0.00, 0.50, 0.25],
    [0.00, 0.00, 0.00, 0.25, 0.00, 0.00, 0.50, 0.25],
    // tracking: bad with an obstacle ahead or when stalled
    [0.50, 0.00, 0.00, 0.00, 0.00, 0.50, 0.00, 0.00],
];

/// The hand-coded idiotope for [`Repertoire::standard`].
pub fn standard_idiotope<F: Scalar>() -> IdiotopeMatrix<F> {
    let rows: Vec<Vec<F>> = IDIOTOPE
        .iter()
        .map(|r| r.iter().map(|&v| F::lit(v)).collect())
        .collect();
    IdiotopeMatrix::from_rows(&rows).expect("rows sum to one")
}

/// A paratope mid-way through learning: reverse antibody 14 has the
/// strongest match to "stalled", the other reverse antibodies have learned
/// to avoid open space, and the forward antibodies rate "stalled" poorly.
/// Presenting antigens 1, 3 and 5 with `k1 = 0.625` and unit
/// concentrations, stage 1 picks antibody 14 and the idiotypic network
/// picks reverse antibody 10.
pub fn worked_example_paratope() -> Paratope {
    ParatopeMatrix::from_rows(&WORKED_EXAMPLE).expect("entries in range")
}

pub fn worked_example_idiotope() -> Idiotope {
    standard_idiotope()
}

const WORKED_EXAMPLE: [[f64; 8]; 16] = [
    [0.62, 0.58, 0.66, 0.71, 0.60, 0.31, 0.64, 0.63],
    [0.60, 0.55, 0.62, 0.65, 0.61, 0.34, 0.60, 0.59],
    [0.58, 0.69, 0.57, 0.64, 0.63, 0.29, 0.66, 0.61],
    [0.64, 0.61, 0.60, 0.68, 0.59, 0.22, 0.62, 0.66],
    [0.61, 0.52, 0.66, 0.55, 0.64, 0.41, 0.63, 0.60],
    [0.57, 0.66, 0.54, 0.58, 0.62, 0.44, 0.61, 0.63],
    [0.63, 0.51, 0.67, 0.60, 0.60, 0.36, 0.62, 0.58],
    [0.59, 0.68, 0.53, 0.61, 0.63, 0.38, 0.60, 0.62],
    [0.60, 0.57, 0.61, 0.56, 0.66, 0.47, 0.65, 0.60],
    [0.62, 0.63, 0.58, 0.55, 0.64, 0.45, 0.61, 0.59],
    [0.66, 0.64, 0.62, 0.12, 0.63, 0.78, 0.10, 0.16],
    [0.64, 0.60, 0.65, 0.30, 0.61, 0.70, 0.41, 0.42],
    [0.61, 0.62, 0.60, 0.66, 0.68, 0.52, 0.63, 0.61],
    [0.63, 0.59, 0.61, 0.33, 0.62, 0.72, 0.45, 0.40],
    [0.65, 0.66, 0.64, 0.58, 0.60, 0.86, 0.57, 0.54],
    [0.60, 0.63, 0.61, 0.67, 0.62, 0.40, 0.64, 0.70],
];

#[cfg(test)]
mod tests {
    use idionet_core::network::argmax;
    use idionet_core::{
        select_winner, ConcentrationVector, NetworkParams, Priority, SelectionMode, Stimulus,
    };

    use super::*;

    #[test]
    fn repertoire_invariants() {
        let r = Repertoire::standard();
        assert_eq!(r.len(), idionet_core::ANTIBODY_COUNT);
        for (i, a) in r.iter().enumerate() {
            assert_eq!(a.id, i);
            assert!(a.linear.abs() <= MAX_SPEED);
            assert!(a.angular.abs() <= MAX_TURN + 1e-12);
            assert_eq!(a.is_reverse(), a.kind == AntibodyKind::Reverse);
        }
        let reverse: Vec<usize> = r.iter().filter(|a| a.is_reverse()).map(|a| a.id).collect();
        assert_eq!(reverse, vec![10, 11, 13, 14]);
    }

    #[test]
    fn idiotope_rows_sum_to_one() {
        let id: IdiotopeMatrix<f64> = standard_idiotope();
        assert_eq!(id.antibodies(), 16);
        assert_eq!(id.antigens(), 8);
    }

    #[test]
    fn worked_example_picks_alternative_reverse() {
        let p = worked_example_paratope();
        let id = worked_example_idiotope();
        let s = Stimulus::new(&[1, 3, 5], &Priority::standard()).unwrap();
        let c = ConcentrationVector::uniform(16);
        let sel = select_winner(&p, &id, &s, &c, &NetworkParams::standard(SelectionMode::S2), false)
            .unwrap();
        assert_eq!(sel.trace.stage1_winner, 14);
        assert_eq!(sel.trace.final_winner, 10);
        assert_eq!(argmax(&sel.trace.tg), 10);
    }
}
