use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("ragged input at line {line}: expected {expected} columns, found {found}")]
    Ragged {
        line: usize,
        expected: usize,
        found: usize,
    },

    #[error("non-finite value at row {row}, column {column}")]
    NonFinite { row: usize, column: usize },

    #[error("missing `label` column")]
    MissingLabel,

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("alignment mismatch: dataset has {dataset} rows, projection has {projection}")]
    Alignment { dataset: usize, projection: usize },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("empty triplet space: need a class with at least two members and a point outside it")]
    EmptyTripletSpace,

    #[error("metric is degenerate: {0}")]
    Degenerate(String),

    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for errors caused by malformed or inconsistent inputs, as
    /// opposed to I/O or numerical failures.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::Parse { .. }
                | Error::Ragged { .. }
                | Error::NonFinite { .. }
                | Error::MissingLabel
                | Error::Dimension(_)
                | Error::Alignment { .. }
                | Error::Invalid(_)
        )
    }

    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::EmptyTripletSpace | Error::Degenerate(_) | Error::Numerical(_)
        )
    }
}
