use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("non-finite or missing value at row {row}, column {col}")]
    NonFinite { row: usize, col: usize },

    #[error("duplicate identifier `{0}`")]
    DuplicateIdentifier(String),

    #[error("need at least 2 alternatives and 2 criteria, got {rows}x{cols}")]
    TooFewRowsOrCols { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid weight vector: {0}")]
    InvalidWeights(String),

    #[error("invalid capacity: {0}")]
    InvalidCapacity(String),

    #[error("criterion `{0}` has zero variance")]
    ZeroVariance(String),

    #[error("solver did not converge after {iterations} iterations")]
    NonConvergence { iterations: usize },

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("sampled weights are infeasible with the fixed interaction matrix: {0}")]
    InfeasibleCapacity(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Whether the error comes from a numerical routine rather than from the
    /// shape or content of the input data.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::NonConvergence { .. } | Error::InfeasibleCapacity(_) | Error::InvalidCapacity(_))
    }
}
