//! Idiotypic immune-network behaviour arbitration.
//!
//! Antibodies are competence modules, antigens are detected situations. A
//! reinforcement-learned paratope matrix scores how well each antibody
//! matches each antigen; a fixed idiotope matrix encodes disallowed
//! combinations and drives inter-antibody suppression and stimulation.
//! Three selection modes are provided:
//!
//! * [`SelectionMode::S1`]: pure reinforcement learning, argmax of the
//!   antigen match `T1`.
//! * [`SelectionMode::S2`]: idiotypic network without concentrations,
//!   argmax of the global strength `Tg`.
//! * [`SelectionMode::S3`]: full network with concentration dynamics,
//!   argmax of the activation `A = C * Tg`.
//!
//! The numeric core is generic over [`Scalar`] (`f32` or `f64`); the
//! aliases at the crate root fix it to `f64`, which is what the simulator
//! and experiment harness use.

pub mod antigen;
pub mod concentration;
pub mod error;
pub mod learning;
pub mod matrix;
pub mod network;
pub mod paratope;
pub mod scalar;
pub mod trace;

pub use antigen::{AntigenArray, Priority, Stimulus};
pub use concentration::ConcentrationVector;
pub use error::{CoreError, MatrixError};
pub use learning::{
    apply_reinforcement, compute_rf, init_paratope, AssessmentSnapshot, MarkerSighting,
    ReinforcementConfig, SensorSample, Strategy,
};
pub use matrix::Matrix;
pub use network::{
    select_winner, CompetitorMask, ImmuneNetwork, NetworkParams, Selection, SelectionMode,
};
pub use paratope::{IdiotopeMatrix, ParatopeMatrix};
pub use scalar::Scalar;
pub use trace::SelectionTrace;

/// Number of antibodies in the standard repertoire.
pub const ANTIBODY_COUNT: usize = 16;
/// Number of antigens (detectable situations).
pub const ANTIGEN_COUNT: usize = 8;

pub type Paratope = ParatopeMatrix<f64>;
pub type Idiotope = IdiotopeMatrix<f64>;
pub type Concentrations = ConcentrationVector<f64>;
pub type Network = ImmuneNetwork<f64>;
pub type Params = NetworkParams<f64>;
pub type Trace = SelectionTrace<f64>;
