//! Exact-arithmetic verification of the factorized sl(2|1) R-operator.
//!
//! Everything here is built on exact rationals: superpolynomials in the
//! site variables ([`superpoly`]), linear operators on them ([`opalg`]),
//! the sl(2|1) generators and three-dimensional representations
//! ([`sl21`]), Lax operators on the graded auxiliary space ([`lax`]), the
//! three building-block operators and their product ([`rops`]) and their
//! spectra on lowest-weight vectors ([`lowest`]). Operator identities are
//! checked extensionally on degree-bounded monomial bases and the outcome is
//! recorded in a [`report::CheckReport`].

pub mod gamma;
pub mod graded;
pub mod lax;
pub mod linalg;
pub mod lowest;
pub mod opalg;
pub mod rational;
pub mod report;
pub mod rops;
pub mod sample;
pub mod sl21;
pub mod suite;
pub mod superpoly;

pub use opalg::Operator;
pub use rational::Rational;
pub use report::{CheckReport, Status};
pub use superpoly::{Monomial, OddVar, Site, SuperPolynomial};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("terminating exponential did not vanish within {budget} iterations")]
    NonTerminatingExp { budget: u32 },
    #[error("degree-diagonal denominator vanishes at degree {degree}")]
    SingularDiagonal { degree: u32 },
    #[error("operator has no definite parity")]
    IndefiniteParity,
    #[error("weight is singular for this closed form: {0}")]
    SingularWeight(String),
    #[error("parameters violate the regularity guard: {0}")]
    SingularParameters(String),
    #[error("normalization failed: {0}")]
    NormalizationFailure(String),
    #[error("polynomial is not in the requested span; residual {residual}")]
    NotInSpan { residual: String },
    #[error("no regular parameters found after {0} resamples")]
    GuardExhausted(u32),
    #[error("{0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
