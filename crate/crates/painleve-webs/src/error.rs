use thiserror::Error;

/// Errors surfaced by the engine. Context mismatches between values built over
/// different variable contexts are programmer errors and panic instead.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum EngineError {
    #[error("division by the zero rational function")]
    DivisionByZero,

    /// The element shares a nontrivial factor with the minimal polynomial; the
    /// witness is the offending gcd, which cuts out the locus where inversion
    /// fails.
    #[error("non-invertible element on the surface (gcd witness: {witness})")]
    NonInvertible { witness: String },

    #[error("degenerate chart: {0}")]
    DegenerateChart(String),

    #[error("degenerate web: {0}")]
    DegenerateWeb(String),

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("unknown surface `{0}`")]
    UnknownSurface(String),

    #[error("invalid parameter substitution: {0}")]
    BadSubstitution(String),

    #[error("unsupported operation: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, EngineError>;
