use std::path::PathBuf;

use serde_json::{json, Value};
use thiserror::Error;

pub type Result<T> = std::result::Result<T, AppError>;

/// Everything the front end can fail with. Input problems exit with 2,
/// domain problems with 3.
#[derive(Debug, Error)]
pub enum AppError {
    #[error("input file not found: {}", .0.display())]
    MissingInput(PathBuf),
    #[error("cannot read or write {}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("required column `{0}` not in header")]
    MissingColumn(String),
    #[error("row {row}: {reason}")]
    UnparsableRow { row: usize, reason: String },
    #[error("row {0}: date not after the previous row")]
    NonMonotonicDates(usize),
    #[error("row {row}: {reason}")]
    InvariantViolation { row: usize, reason: &'static str },
    #[error("no data rows")]
    EmptySeries,
    #[error("invalid config: {0}")]
    InvalidConfig(String),
    #[error("{0}")]
    Usage(String),
    #[error("benchmark does not line up with the data series: {0}")]
    BenchmarkMismatch(String),
    #[error("no grid cell reached min_trades = {0}")]
    EmptyGridAfterFilter(usize),
    #[error(transparent)]
    Domain(#[from] quantbt_core::Error),
}

impl AppError {
    pub fn kind(&self) -> &'static str {
        match self {
            AppError::MissingInput(_) => "MissingInput",
            AppError::Io { .. } => "Io",
            AppError::MissingColumn(_) => "MissingColumn",
            AppError::UnparsableRow { .. } => "UnparsableRow",
            AppError::NonMonotonicDates(_) => "NonMonotonicDates",
            AppError::InvariantViolation { .. } => "InvariantViolation",
            AppError::EmptySeries => "EmptySeries",
            AppError::InvalidConfig(_) => "InvalidConfig",
            AppError::Usage(_) => "Usage",
            AppError::BenchmarkMismatch(_) => "BenchmarkMismatch",
            AppError::EmptyGridAfterFilter(_) => "EmptyGridAfterFilter",
            AppError::Domain(e) => e.kind(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            AppError::Domain(_) | AppError::EmptyGridAfterFilter(_) => 3,
            _ => 2,
        }
    }

    fn row(&self) -> Option<usize> {
        match self {
            AppError::UnparsableRow { row, .. } | AppError::InvariantViolation { row, .. } => {
                Some(*row)
            }
            AppError::NonMonotonicDates(row) => Some(*row),
            _ => None,
        }
    }

    /// `{"kind": ..., "message": ..., "exit_code": ..., "row"?: ...}`
    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "kind": self.kind(),
            "message": self.to_string(),
            "exit_code": self.exit_code(),
        });
        if let Some(row) = self.row() {
            v["row"] = json!(row);
        }
        v
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        let path = path.into();
        if source.kind() == std::io::ErrorKind::NotFound {
            AppError::MissingInput(path)
        } else {
            AppError::Io { path, source }
        }
    }
}
