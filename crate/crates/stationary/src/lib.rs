//! Stationary states of the open multi-species exclusion process.
//!
//! Two independent constructions are provided: an exact null vector of the sector block of
//! the generator, and the Hecke-algebra family `f_μ` evaluated at `q = 1`, `x = 1^n`. On top
//! of these sit the normalisation `Z_λ = K_λ(1^n; q = 1)`, its factorisation over columns,
//! and the product formula for generalised boundaries.

pub mod factorise;
pub mod generalised;
pub mod hecke;
pub mod nullspace;
pub mod report;
pub mod state;

pub use factorise::{factorisation_check, FactorisationReport};
pub use generalised::{
    constant_weight, generalised_check, generalised_stationary, generalised_weights,
    GeneralisedReport, RelationFailure,
};
pub use hecke::{
    exchange_check, family_at_q1, hecke_params, hecke_stationary, state_from_family, theorem_check,
    transfer_eigenvalue, ExchangeCheck, Q1Family, TheoremReport,
};
pub use nullspace::{
    null_space, nullspace_stationary, nullspace_stationary_with, sector_configs, sector_irreducible,
};
pub use report::{config_key, SectorReport};
pub use state::{Provenance, StationaryState};

use masep_weyl::Composition;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StationaryError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("sector {0:?} is not closed under the generator")]
    SectorNotClosed(Composition),
    #[error("null space of the sector block has dimension {dim} (expected 1)")]
    NullDimension { dim: usize },
    #[error("f_{0:?} has a pole at q = 1")]
    PoleAtOne(Composition),
    #[error("series precision exhausted for sector {0:?}")]
    PrecisionExhausted(Composition),
    #[error("row of ones is not a left eigenvector of T(w) on sector {0:?}")]
    NotLeftEigenvector(Composition),
    #[error(transparent)]
    Hecke(#[from] masep_hecke::HeckeError),
    #[error(transparent)]
    Lattice(#[from] masep_lattice::LatticeError),
}
