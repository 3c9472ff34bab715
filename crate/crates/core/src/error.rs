use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, TourError>;

#[derive(Debug, Error)]
pub enum TourError {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    /// Start and target span the same subspace, so no orthogonal complement exists.
    #[error("frames share the same subspace; residual column {column} has norm {norm:e}")]
    SharedSubspace { column: usize, norm: f64 },

    #[error("frame lies outside the preprojection span (max deviation {deviation:e})")]
    SubspaceViolation { deviation: f64 },

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("missing value at row {row}, column '{column}'")]
    MissingValue { row: usize, column: String },

    #[error("cannot parse '{value}' at row {row}, column '{column}'")]
    Parse {
        row: usize,
        column: String,
        value: String,
    },

    #[error("cannot access {path}")]
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

impl TourError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        TourError::Io {
            path: path.into(),
            source,
        }
    }

    /// True for failures caused by the numerics rather than by bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, TourError::NumericalFailure(_))
    }
}
