use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("entry ({row}, {col}) outside a {num_rows}x{num_cols} matrix")]
    IndexOutOfBounds {
        row: usize,
        col: usize,
        num_rows: usize,
        num_cols: usize,
    },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("matrix has no rows")]
    EmptyMatrix,

    #[error("ELLPACK needs {slots} slots, budget is {budget}")]
    SlotBudgetExceeded { slots: u128, budget: u128 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("unsupported format `{0}`")]
    UnsupportedFormat(String),

    #[error("checksum mismatch for {context}: got {actual}, oracle {expected} (tolerance {tolerance:e})")]
    ChecksumMismatch {
        context: String,
        actual: f64,
        expected: f64,
        tolerance: f64,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
