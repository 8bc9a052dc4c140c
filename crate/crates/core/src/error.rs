use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Broad failure class, used by the CLI to pick an exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Usage,
    Data,
    Numeric,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("filter length must be even, got {0}")]
    OddFilterLength(usize),

    #[error("level must be at least 1, got {0}")]
    InvalidLevel(usize),

    #[error("series shorter than filter: n = {n}, filter length L_j = {filter_len}")]
    SeriesShorterThanFilter { n: usize, filter_len: usize },

    #[error("level {requested} infeasible for n = {n}; max feasible level is {max_feasible}")]
    LevelInfeasible {
        requested: usize,
        n: usize,
        max_feasible: usize,
    },

    #[error("empty summation range for lag {lag} (n = {n}, L_j = {filter_len})")]
    EmptyRange {
        lag: i64,
        n: usize,
        filter_len: usize,
    },

    #[error("coefficient sequences do not match: {0}")]
    Mismatch(String),

    #[error("model is not admissible: {0}")]
    Inadmissible(String),

    #[error(
        "invalid circulant embedding: eigenvalue {eigenvalue:e} at frequency index {index} is below -{tolerance:e}"
    )]
    InvalidEmbedding {
        index: usize,
        eigenvalue: f64,
        tolerance: f64,
    },

    #[error("quadrature did not converge on [{a}, {b}] (estimated error {error:e})")]
    Quadrature { a: f64, b: f64, error: f64 },

    #[error("no ticks")]
    NoTicks,

    #[error("row {row}: {message}")]
    BadRow { row: usize, message: String },

    #[error("no tick at or before grid origin t0 = {0}")]
    NoTickBeforeOrigin(f64),

    #[error("empty input: {0}")]
    Empty(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::InvalidArgument(_)
            | Error::OddFilterLength(_)
            | Error::InvalidLevel(_)
            | Error::LevelInfeasible { .. } => ErrorKind::Usage,
            Error::InvalidEmbedding { .. } | Error::Quadrature { .. } => ErrorKind::Numeric,
            _ => ErrorKind::Data,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
