//! Error types shared across the crate.

use thiserror::Error;

/// Coarse classification used to map errors onto process exit codes
/// (and FFI status codes): input problems exit with 2, numerical
/// failures with 3.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorCategory {
    /// Malformed or invalid input: bad dimensions, bad hyperparameters,
    /// unparsable files.
    Input,
    /// The computation itself failed: overflow, line-search exhaustion.
    Numerical,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("dataset is empty: need at least one row and one column")]
    EmptyDataset,

    #[error("design matrix is ragged: row {row} has {got} columns, expected {expected}")]
    RaggedDesign { row: usize, got: usize, expected: usize },

    #[error("design matrix has a non-finite entry at row {row}, column {col}")]
    NonFiniteDesign { row: usize, col: usize },

    #[error("response at row {row} is {value}; Gamma responses must be positive and finite")]
    InvalidResponse { row: usize, value: f64 },

    #[error("design has {design_rows} rows but response has {response_rows}")]
    RowCountMismatch { design_rows: usize, response_rows: usize },

    #[error("coefficient vector has length {got}, expected {expected}")]
    CoefficientLength { got: usize, expected: usize },

    #[error("invalid hyperparameter: {0}")]
    InvalidHyperparameter(String),

    #[error(
        "objective is non-finite at row {row} (linear predictor {exponent:.3}); \
         exp(-predictor) overflowed"
    )]
    NonFiniteObjective { row: usize, exponent: f64 },

    #[error("objective is non-finite at the start point: {0}")]
    NonFiniteStart(Box<Error>),

    #[error(
        "line search failed to find a decrease after {attempts} halvings at iteration \
         {iteration}; stationarity suspected (fixed-point residual {residual:.3e})"
    )]
    LineSearchFailed { iteration: usize, attempts: usize, residual: f64 },

    #[error("lambda_max is undefined for alpha = 0: a pure ridge penalty never produces an all-zero solution at finite lambda")]
    AlphaZeroLambdaMax,

    #[error("lambda_max is 0 (every response equals 1): the all-zero model is optimal at any lambda, no grid can be built")]
    DegenerateLambdaMax,

    #[error("n_folds = {n_folds} exceeds the number of rows ({rows})")]
    FoldCountExceedsRows { n_folds: usize, rows: usize },

    #[error("cross-validation failed: {0}")]
    CrossValidation(String),

    #[error("csv parse error in {path} at line {line}: {message}")]
    CsvParse { path: String, line: u64, message: String },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// Which exit/status code family this error belongs to.
    pub fn category(&self) -> ErrorCategory {
        match self {
            Error::NonFiniteObjective { .. }
            | Error::NonFiniteStart(_)
            | Error::LineSearchFailed { .. }
            | Error::CrossValidation(_) => ErrorCategory::Numerical,
            _ => ErrorCategory::Input,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
