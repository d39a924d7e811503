//! Exact arithmetic: rationals, univariate and multivariate Laurent polynomials,
//! rational functions, dual numbers, and a small parallel-map helper.

pub mod field;
pub mod laurent;
pub mod par;
pub mod ratfun;
pub mod rational;
pub mod series;
pub mod unipoly;
pub mod uniratfun;

pub use field::{Dual, Field};
pub use laurent::{vars, Exp, LaurentPoly, PolyJson, Subst, Vars};
pub use ratfun::RatFun;
pub use rational::{fmt_rational, int, parse_rational, pow_i, rat, to_f64, Rational};
pub use series::Series;
pub use unipoly::UniPoly;
pub use uniratfun::UniRatFun;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("variable lists differ: {0:?} vs {1:?}")]
    VariableMismatch(Vec<String>, Vec<String>),
    #[error("unknown variable {0}")]
    UnknownVariable(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("pole at {0}")]
    Pole(String),
    #[error("substitution into a negative power of {0} is not a Laurent polynomial")]
    NotLaurent(String),
    #[error("division left a nonzero remainder")]
    NotExact,
    #[error("divisor's leading coefficient is not a single term")]
    NotMonicDivisor,
    #[error("function depends on more than one variable")]
    NotUnivariate,
    #[error("limit at q = 1 does not exist")]
    LimitUndefined,
    #[error("series precision exhausted (known only up to order {0})")]
    PrecisionExhausted(i32),
    #[error("parse error: {0}")]
    Parse(String),
}
