//! Library half of the `heun-sextic` command-line tool.
//!
//! The binary only parses flags and maps [`Failure`] to an exit code; the
//! commands, report types and verification suite live here so they can be
//! tested directly.

pub mod args;
pub mod commands;
pub mod input;
pub mod output;
pub mod report;
pub mod verify;

use thiserror::Error;

/// Default verification tolerance when neither `--tol` nor the environment
/// variable is set.
pub const DEFAULT_TOL: f64 = 1e-3;
/// Environment variable overriding [`DEFAULT_TOL`].
pub const TOL_ENV: &str = "HEUN_SEXTIC_TOL";

/// Why a command did not succeed. Each variant owns one exit code.
#[derive(Debug, Error)]
pub enum Failure {
    /// Bad flags or parameters outside the solvable domain.
    #[error("{0}")]
    Usage(String),
    /// A solver stage failed on valid input.
    #[error("{0}")]
    Numerical(String),
    /// The command ran but a verification check did not pass.
    #[error("{0}")]
    Verification(String),
    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Numerical(_) | Failure::Io { .. } => 3,
            Failure::Verification(_) => 1,
        }
    }

    /// Classifies a library error raised by `stage`.
    pub fn from_core(stage: &str, err: heun_sextic::Error) -> Self {
        let msg = format!("{stage}: {err}");
        if err.is_domain() {
            Failure::Usage(msg)
        } else {
            Failure::Numerical(msg)
        }
    }

    pub fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        Failure::Io {
            context: context.into(),
            source,
        }
    }
}

/// Attaches a stage name to library results.
pub trait Stage<T> {
    fn stage(self, name: &str) -> Result<T, Failure>;
}

impl<T> Stage<T> for heun_sextic::Result<T> {
    fn stage(self, name: &str) -> Result<T, Failure> {
        self.map_err(|e| Failure::from_core(name, e))
    }
}

/// Resolves the verification tolerance: flag, then environment, then default.
pub fn resolve_tolerance(flag: Option<f64>, env: Option<&str>) -> Result<f64, Failure> {
    let (value, source) = match (flag, env) {
        (Some(v), _) => (v, "--tol"),
        (None, Some(s)) => (
            s.trim()
                .parse::<f64>()
                .map_err(|_| Failure::Usage(format!("{TOL_ENV}={s:?} is not a number")))?,
            TOL_ENV,
        ),
        (None, None) => return Ok(DEFAULT_TOL),
    };
    if !(value.is_finite() && value > 0.0) {
        return Err(Failure::Usage(format!("{source} must be positive and finite, got {value}")));
    }
    Ok(value)
}
