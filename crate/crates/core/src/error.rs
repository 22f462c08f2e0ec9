//! Error type shared across the crate.
//!
//! Variants are grouped by how a caller should react: precondition and parse
//! errors are user-facing, `UnknownBlocked` means a verdict could not be
//! decided from the available facts, `Contradiction` means the supplied data
//! is inconsistent, and `Internal`/`FixpointCap` indicate bugs.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("ring mismatch: {0}")]
    RingMismatch(String),

    #[error("invalid Chern polynomial: {0}")]
    InvalidChernPolynomial(String),

    #[error("unsupported degree: {0}")]
    UnsupportedDegree(String),

    #[error("exact computation produced a non-integer where an integer was required: {0}")]
    NonIntegerValue(String),

    #[error("contradiction in slot {slot}: {detail}")]
    Contradiction { slot: String, detail: String },

    #[error("fixpoint iteration exceeded its cap ({0} rounds); this indicates a solver bug")]
    FixpointCap(usize),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("cannot decide: {0}")]
    UnknownBlocked(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("unknown variety `{0}`")]
    UnknownVariety(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    /// Process exit code for the CLI: 1 usage/parse, 2 unknown-blocked,
    /// 3 contradiction, 4 internal assertion.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_)
            | Error::UnknownVariety(_)
            | Error::InvalidInput(_)
            | Error::Json(_)
            | Error::Precondition(_)
            | Error::Unsupported(_)
            | Error::UnsupportedDegree(_)
            | Error::InvalidChernPolynomial(_)
            | Error::RingMismatch(_) => 1,
            Error::UnknownBlocked(_) => 2,
            Error::Contradiction { .. } => 3,
            Error::NonIntegerValue(_) | Error::FixpointCap(_) | Error::Internal(_) => 4,
        }
    }
}
