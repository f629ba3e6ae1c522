use thiserror::Error;

/// Errors raised by the solver pipeline.
///
/// Numeric payloads are carried as `f64` regardless of the scalar type the
/// failing routine was instantiated with.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("parameters are not quasi-exactly solvable: {0}")]
    NotQes(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("recurrence is singular: R_{n} vanishes")]
    SingularRecurrence { n: usize },

    #[error("only {found} of {expected} termination roots are real")]
    ComplexRoots { found: usize, expected: usize },

    #[error("termination roots {index} and {} coincide (separation {separation:e})", index + 1)]
    MultipleRoots { index: usize, separation: f64 },

    #[error("{0} did not converge")]
    ConvergenceFailure(String),

    #[error("node count did not stabilize under refinement (counts {counts:?})")]
    UnresolvedNodes { counts: Vec<usize> },

    #[error("functions are not proportional: relative deviation {deviation:e}")]
    IncompatibleShapes { deviation: f64 },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),
}

impl Error {
    /// Whether the error stems from bad input rather than a numerical failure.
    pub fn is_domain(&self) -> bool {
        matches!(
            self,
            Error::Domain(_) | Error::NotQes(_) | Error::Unsupported(_) | Error::InvalidGrid(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
