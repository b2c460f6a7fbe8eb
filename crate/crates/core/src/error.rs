use std::io;

use crate::schema::ColumnType;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("malformed academic year {label:?}: {reason} (expected YYYY_YY, e.g. 1996_97)")]
    MalformedYear { label: String, reason: &'static str },

    #[error("CSV syntax error on line {line}: {message}")]
    CsvSyntax { line: u64, message: String },

    #[error("CSV input has no header row")]
    EmptyInput,

    #[error("cannot convert {cell:?} to {target} in column {column:?} (row {row})")]
    Coercion {
        column: String,
        row: u64,
        cell: String,
        target: ColumnType,
    },

    #[error("schema has {schema} columns but the CSV header has {header}")]
    SchemaMismatch { schema: usize, header: usize },

    #[error("no table registered for academic year {0}")]
    UnknownYear(String),

    #[error("no registered academic year between {from} and {to}")]
    EmptyRange { from: String, to: String },

    #[error("range start {from} is after range end {to}")]
    ReversedRange { from: String, to: String },

    #[error("unknown column {0:?}")]
    UnknownColumn(String),

    #[error("column {column:?} has type {actual}, expected a numeric column")]
    TypeMismatch { column: String, actual: ColumnType },

    #[error("invalid table: {0}")]
    InvalidTable(String),

    #[error("snapshot format error: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    /// Machine-readable code shared by the HTTP API and the CLI.
    pub fn code(&self) -> &'static str {
        match self {
            Error::MalformedYear { .. } | Error::ReversedRange { .. } => "MALFORMED_YEAR",
            Error::CsvSyntax { .. } | Error::EmptyInput | Error::SchemaMismatch { .. } => {
                "CSV_SYNTAX"
            }
            Error::Coercion { .. } => "COERCION_ERROR",
            Error::UnknownYear(_) | Error::EmptyRange { .. } => "UNKNOWN_YEAR",
            Error::UnknownColumn(_) => "UNKNOWN_COLUMN",
            Error::TypeMismatch { .. } => "TYPE_MISMATCH",
            Error::InvalidTable(_) | Error::Format(_) | Error::Io(_) => "INTERNAL",
        }
    }
}
