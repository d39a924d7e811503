//! Continuous-time Monte Carlo of the open multi-species exclusion process.
//!
//! Trajectories are simulated with exponential waiting times and occupation-time averaging.
//! Each trajectory draws from its own ChaCha8 stream, so results do not depend on how the
//! trajectories are scheduled.

pub mod engine;
pub mod moves;

pub use engine::{simulate, tv_distance, EmpiricalDistribution, SimConfig, SimReport};
pub use moves::{audit_against_generator, moves_from, FloatRates, Move, MoveKind};

use masep_weyl::Composition;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SimError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("negative rate {0}")]
    NegativeRate(String),
    #[error("configuration {0:?} has zero exit rate")]
    Absorbing(Composition),
    #[error("empirical support contains {0:?}, which is outside the exact support")]
    SupportMismatch(Composition),
    #[error(transparent)]
    Lattice(#[from] masep_lattice::LatticeError),
}
