//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A parameter or input value violates its documented range.
    #[error("invalid {name}: {value} ({reason})")]
    Invalid {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    /// Geometry evaluated at a singular configuration (fully folded or
    /// fully extended knee).
    #[error("singular leg geometry: {0}")]
    Singular(&'static str),

    /// The ODE integration could not be completed.
    #[error("integration failure: {0}")]
    Integration(String),

    /// Bisection bracket endpoints do not straddle the target.
    #[error("bracket [{lo}, {hi}] does not straddle target: f(lo)={f_lo}, f(hi)={f_hi}")]
    Bracket {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },

    /// An iterative solve ran out of iterations.
    #[error("no convergence after {iterations} iterations (residual {residual})")]
    NoConvergence { iterations: usize, residual: f64 },

    /// A data file could not be parsed.
    #[error("parse error in {path} line {line}: {reason}")]
    Parse {
        path: String,
        line: usize,
        reason: String,
    },

    /// Trial channels could not be aligned (no touch-down found, etc).
    #[error("alignment error: {0}")]
    Alignment(String),

    /// A stance/analysis window could not be identified in the data.
    #[error("window error: {0}")]
    Window(String),

    /// The input collection is empty or too small for the operation.
    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for failures of the numerics (as opposed to bad inputs).
    /// Used by the CLI to pick its exit code.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Integration(_)
                | Error::Bracket { .. }
                | Error::NoConvergence { .. }
                | Error::Singular(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
