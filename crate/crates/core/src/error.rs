use thiserror::Error;

/// Errors produced by the library.
///
/// Variants split into two families: domain errors (a mathematically
/// invalid request) and input errors (I/O or malformed files). The CLI maps
/// the first family to exit code 1 and the second to exit code 2.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("invalid Hamiltonian: {0}")]
    InvalidHamiltonian(String),

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("invalid channel: {0}")]
    InvalidChannel(String),

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    /// The requested diagonal transition is not thermomajorized.
    #[error("transition not thermomajorized: {0}")]
    NotThermomajorized(String),

    #[error("infeasible parameters: {0}")]
    Infeasible(String),

    #[error("missing input: {0}")]
    MissingInput(String),

    #[error("unknown identifier: {0}")]
    Unknown(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// True for I/O and parse failures (as opposed to domain errors).
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Parse(_) | Error::Io(_) | Error::Json(_) | Error::Csv(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
