//! Polynomial representation of the affine Hecke algebra of type C and non-symmetric
//! Koornwinder polynomials.

pub mod koornwinder;
pub mod linalg;
pub mod ops;
pub mod poly;

pub use koornwinder::{
    change_of_basis, check_path_independence, eigen_residuals, f_family, family_from_seed,
    nonsymmetric_e, nonsymmetric_e_with, symmetrise, tione_sides, tnone_sides, PolyFamily,
    Recursion, SpectralReading,
};
pub use ops::{HeckeContext, HeckeParams};
pub use poly::XPoly;

use masep_weyl::Composition;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HeckeError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("parameter {0} must be nonzero")]
    ZeroParameter(&'static str),
    #[error("pole: {0}")]
    Pole(String),
    #[error("nonzero remainder dividing T_{generator} image of x^{exponent:?}")]
    Remainder {
        generator: usize,
        exponent: Vec<i32>,
    },
    #[error("support of Y x^{lambda:?} reached {mu:?}, outside the order ideal")]
    SpanEscaped {
        lambda: Composition,
        mu: Composition,
    },
    #[error("Y action on the span of {0:?} is not triangular")]
    NotTriangular(Composition),
    #[error("leading eigenvalue for {0:?} differs from the spectral vector")]
    SpectrumMismatch(Composition),
    #[error("degenerate spectrum: {mu:?} collides with {lambda:?}; resample parameters")]
    Degenerate {
        lambda: Composition,
        mu: Composition,
    },
    #[error("family member {0:?} depends on the path")]
    PathDependent(Composition),
    #[error("symmetrised polynomial is not invariant under T_{0}")]
    NotInvariant(usize),
    #[error("E_{0:?} is not in the span of the family")]
    NotInSpan(Composition),
}
