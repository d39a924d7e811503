//! Integrable lattice operators for the open multi-species exclusion process:
//! R- and K-matrices, dual boundary matrices, transfer matrices, the Markov
//! generator, and an exact identity-verification suite.

pub mod generator;
pub mod matrices;
pub mod model;
pub mod operator;
pub mod transfer;
pub mod verify;

pub use generator::{
    communicating_blocks, generator_direct, generator_from_transfer, generator_local,
    generator_with_rates, kn_derivative_at_one, respects_blocks, sector_basis,
};
pub use matrices::{
    dual_k0_closed, dual_k0_symbolic, dual_kn_closed, dual_kn_symbolic, eval_operator, k0, kn,
    permutation, r21, r_check, r_matrix, r_tilde_symbolic, u_twist,
};
pub use model::{
    config_index, config_of, inverse_rate_map, inverse_rate_map_f64, rates, Convention, ModelSpec,
    ParamPoint, Rates,
};
pub use operator::{OperatorJson, SparseOperator, SparseVec};
pub use transfer::TransferBuilder;
pub use verify::{
    crossing_scalar, dual_closed_form_residual, random_rational, IdentityName, VerificationReport,
    Verifier,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LatticeError {
    #[error("pole: {0}")]
    Pole(String),
    #[error("no pole-free sample point: {0}")]
    PoleExhausted(String),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("singular matrix")]
    Singular,
    #[error("invalid model: {0}")]
    InvalidSpec(String),
    #[error("malformed operator json: {0}")]
    Json(String),
    #[error(transparent)]
    Algebra(masep_algebra::AlgebraError),
}
