use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Where inside the discretization a pointwise failure happened.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Location {
    pub element: usize,
    pub point: usize,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("non-positive Jacobian J = {j:e}")]
    NonPositiveJacobian { j: f64 },

    #[error("degenerate phase {phase}: volume fraction {phi:e} outside admissible range")]
    DegeneratePhase { phase: usize, phi: f64 },

    #[error("density {rho:e} outside the admissible range of the equation of state")]
    OutOfRangeDensity { rho: f64 },

    #[error("pressure-equality closure did not converge after {iterations} iterations (residual {residual:e})")]
    ClosureNoConvergence { iterations: usize, residual: f64 },

    #[error("invalid mesh dimension: {0}")]
    InvalidDimension(String),

    #[error("unknown boundary tag `{0}`")]
    UnknownBoundaryTag(String),

    #[error("singular matrix: {0}")]
    SingularMatrix(String),

    #[error("Newton iteration diverged after {iterations} iterations (residual norm {residual:e})")]
    NewtonDiverged { iterations: usize, residual: f64 },

    #[error("invalid time step {dt:e}")]
    InvalidTimeStep { dt: f64 },

    #[error("root bracket failure on branch {branch}")]
    RootBracketFailure { branch: usize },

    #[error("empty field")]
    EmptyField,

    #[error("empty series")]
    EmptySeries,

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid `{field}`: {message}")]
    Validation { field: String, message: String },

    #[error("element {}, quadrature point {}: {source}", .at.element, .at.point)]
    At {
        at: Location,
        #[source]
        source: Box<Error>,
    },

    #[error("{context}: {source}")]
    Context {
        context: String,
        #[source]
        source: Box<Error>,
    },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn validation(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Validation {
            field: field.into(),
            message: message.into(),
        }
    }

    pub fn at(self, element: usize, point: usize) -> Self {
        Error::At {
            at: Location { element, point },
            source: Box::new(self),
        }
    }

    pub fn context(self, context: impl Into<String>) -> Self {
        Error::Context {
            context: context.into(),
            source: Box::new(self),
        }
    }

    /// The innermost error, skipping location and context wrappers.
    /// Failure of a single material point (inverted element, vanished
    /// phase, inadmissible density, unconverged closure).
    pub fn is_pointwise(&self) -> bool {
        matches!(
            self.root(),
            Error::NonPositiveJacobian { .. }
                | Error::DegeneratePhase { .. }
                | Error::OutOfRangeDensity { .. }
                | Error::ClosureNoConvergence { .. }
        )
    }

    pub fn root(&self) -> &Error {
        match self {
            Error::At { source, .. } | Error::Context { source, .. } => source.root(),
            other => other,
        }
    }
}
