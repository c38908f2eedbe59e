//! Error taxonomy shared by the library and the CLI.
//!
//! Every fallible public operation returns [`Error`]. The CLI maps these onto
//! process exit codes: configuration and input problems exit with code 2,
//! numerical tolerance failures with code 1, success with 0.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// All failure modes surfaced by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed or out-of-contract input: bad grids, inconsistent shapes,
    /// unparsable text forms, violated preconditions on initial data.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A well-formed request that this build does not support
    /// (e.g. a Dirac operator on a Lorentzian chart).
    #[error("unsupported operation: {0}")]
    Unsupported(String),

    /// A quantity that must stay bounded away from zero vanished
    /// (degenerate induced metric, vanishing spinor norm, ...).
    #[error("division singularity: {0}")]
    DivisionSingularity(String),

    /// A parameter left the domain of validity of a transformation
    /// (e.g. the mean-curvature rotation needs |H| >= 1).
    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    /// The positivity condition on the spinor indicator failed somewhere;
    /// carries the first offending grid node.
    #[error("hemisphere condition violated at node ({iu}, {iv}): indicator = {value}")]
    HemisphereCondition {
        /// First grid index of the offending node.
        iu: usize,
        /// Second grid index of the offending node.
        iv: usize,
        /// The non-positive indicator value found there.
        value: f64,
    },

    /// A measured defect exceeded its pinned tolerance (CLI exit code 1).
    #[error("tolerance exceeded: {what}: {value:.3e} > {limit:.3e}")]
    Tolerance {
        /// Which check failed.
        what: String,
        /// The measured value.
        value: f64,
        /// The pinned limit.
        limit: f64,
    },

    /// Filesystem trouble while reading or writing artifacts.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    /// JSON (de)serialization trouble.
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Shorthand constructor for [`Error::InvalidInput`].
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    /// Process exit code the CLI uses for this error:
    /// 1 for tolerance failures, 2 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Tolerance { .. } => 1,
            _ => 2,
        }
    }
}
