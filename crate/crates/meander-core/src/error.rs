//! Error type shared by all numerical routines.

use core::fmt;

/// Errors from numerical evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Error {
    /// Input outside the function's domain.
    Domain(&'static str),
    /// Gamma function evaluated at a nonpositive integer.
    GammaPole,
    /// A series or iteration failed to reach the requested accuracy.
    Convergence(&'static str),
    /// Quadrature of a tail integral did not settle; the integrand decays
    /// too slowly (or not at all) on the requested domain.
    Decay(&'static str),
    /// Combined endpoint exponent of an integrand is not integrable.
    NonIntegrable(&'static str),
    /// Pfaffians are defined for even order only.
    OddOrder,
    /// Successive Nystrom grid refinements disagree beyond tolerance.
    GridTooCoarse,
    /// The operation is restricted to a smaller parameter range.
    Unsupported(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(what) => write!(f, "domain error: {what}"),
            Error::GammaPole => write!(f, "gamma function pole at nonpositive integer"),
            Error::Convergence(what) => write!(f, "failed to converge: {what}"),
            Error::Decay(what) => write!(f, "decay condition violated: {what}"),
            Error::NonIntegrable(what) => write!(f, "non-integrable singularity: {what}"),
            Error::OddOrder => write!(f, "skew-symmetric matrix must have even order"),
            Error::GridTooCoarse => write!(f, "discretization grid too coarse"),
            Error::Unsupported(what) => write!(f, "unsupported: {what}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}

/// Result alias used throughout the crate.
pub type Result<T> = core::result::Result<T, Error>;
