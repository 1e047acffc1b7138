//! A small deterministic 2D simulator for a differential drive robot with a
//! front laser, rear sonar ring and a colour-blob camera, plus the maze it
//! navigates and the antibody behaviours it executes.

pub mod antigens;
pub mod geometry;
pub mod repertoire;
pub mod robot;
pub mod sensors;
pub mod simulator;
pub mod world;

pub use antigens::{detect_antigens, AntigenThresholds};
pub use geometry::{Point, Rect, Segment};
pub use repertoire::{standard_idiotope, Antibody, AntibodyKind, Repertoire};
pub use robot::{MotionNoise, RobotState, DT, ROBOT_RADIUS};
pub use sensors::{BlobReading, SectorSummary, SensorBundle};
pub use simulator::{SimConfig, Simulator, StepOutcome};
pub use world::{Pose, World};

#[derive(Debug, thiserror::Error)]
pub enum SimError {
    #[error("invalid world: {0}")]
    InvalidWorld(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(String),
}
