use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Arguments outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Operand shapes do not line up.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// A state failed a physicality check (Hermiticity, trace, positivity).
    #[error("invalid state: {0}")]
    InvalidState(String),

    /// Requested computation exceeds a hard size cap.
    #[error("resource limit: {0}")]
    Resource(String),

    /// Invalid or incomplete configuration.
    #[error("configuration error: {0}")]
    Config(String),

    /// Post-processing of a trace failed (no interior maximum, too few points).
    #[error("analysis error: {0}")]
    Analysis(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
