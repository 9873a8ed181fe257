//! Error type shared by every module.

use alloc::string::String;
use core::fmt;

use crate::C64;

/// Default singularity guard: any denominator whose magnitude falls below
/// this value makes the operation fail instead of returning huge values.
pub const EPS_SING: f64 = 1e-8;

/// Everything that can go wrong in the library.
#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    /// A Laurent polynomial with negative powers was evaluated at 0, or a
    /// spectral parameter sits on a pole of an r/R-matrix.
    DegenerateEvaluation,
    /// Operands have incompatible dimensions.
    ShapeError { expected: usize, found: usize },
    /// A guarded denominator came within [`EPS_SING`] of zero.
    Singularity { what: &'static str, magnitude: f64 },
    /// A heat/semi-discrete mode violates its dispersion relation.
    InvalidDispersion,
    /// Closed-form data are not periodic on the requested lattice.
    PeriodicityViolation { residual: f64 },
    /// An iterative solver stopped without reaching its tolerance.
    NoConvergence { iterations: usize, residual: f64 },
    /// The Newton Jacobian could not be factorised.
    SingularJacobian,
    /// A word refers to a generator not declared in the rule set.
    UnknownGenerator(String),
    /// A negative power was requested for a generator not flagged invertible.
    NonInvertiblePower(String),
    /// No polynomial left quotient exists.
    NotDivisible,
    /// A parameter is outside its documented domain.
    InvalidParam(String),
    /// A matrix or operator that must be inverted is singular.
    NonInvertible,
}

/// Result alias used throughout the crate.
pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DegenerateEvaluation => write!(f, "degenerate evaluation (pole of the spectral dependence)"),
            Error::ShapeError { expected, found } => {
                write!(f, "shape error: expected dimension {expected}, found {found}")
            }
            Error::Singularity { what, magnitude } => {
                write!(f, "singularity: |{what}| = {magnitude:.3e} below guard")
            }
            Error::InvalidDispersion => write!(f, "mode violates its dispersion relation"),
            Error::PeriodicityViolation { residual } => {
                write!(f, "data are not periodic on the lattice (wrap residual {residual:.3e})")
            }
            Error::NoConvergence { iterations, residual } => {
                write!(f, "no convergence after {iterations} iterations (residual {residual:.3e})")
            }
            Error::SingularJacobian => write!(f, "singular Jacobian"),
            Error::UnknownGenerator(g) => write!(f, "unknown generator `{g}`"),
            Error::NonInvertiblePower(g) => write!(f, "negative power of non-invertible generator `{g}`"),
            Error::NotDivisible => write!(f, "no polynomial left quotient exists"),
            Error::InvalidParam(msg) => write!(f, "invalid parameter: {msg}"),
            Error::NonInvertible => write!(f, "operator is not invertible"),
        }
    }
}

impl core::error::Error for Error {}

/// Returns `value` unchanged when its magnitude clears [`EPS_SING`].
#[inline]
pub fn guard(value: C64, what: &'static str) -> Result<C64> {
    let magnitude = value.norm();
    if magnitude.is_finite() && magnitude > EPS_SING {
        Ok(value)
    } else {
        Err(Error::Singularity { what, magnitude })
    }
}
