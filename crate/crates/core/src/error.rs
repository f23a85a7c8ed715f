use thiserror::Error;

/// Errors raised by the eigensolver and its building blocks.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch in {op}: {detail}")]
    DimensionMismatch { op: &'static str, detail: String },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not positive definite: pivot {pivot_index} is not positive")]
    NotPositiveDefinite { pivot_index: usize },

    #[error("entry ({row}, {col}) with magnitude {magnitude:e} lies outside half-bandwidth {bandwidth}")]
    OutOfBand {
        row: usize,
        col: usize,
        magnitude: f64,
        bandwidth: usize,
    },

    #[error("invalid half-bandwidth {b} for dimension {n}")]
    InvalidBandwidth { b: usize, n: usize },

    #[error("invalid eigenvalue selection: {0}")]
    InvalidSelection(String),

    #[error("invalid split point {cut} for dimension {n}")]
    InvalidSplit { cut: usize, n: usize },

    #[error("{what} did not converge after {iterations} iterations")]
    NonConvergence { what: &'static str, iterations: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unknown backend `{0}`")]
    UnknownBackend(String),

    #[error("malformed matrix file: {0}")]
    Format(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn mismatch(op: &'static str, detail: impl Into<String>) -> Error {
    Error::DimensionMismatch {
        op,
        detail: detail.into(),
    }
}
