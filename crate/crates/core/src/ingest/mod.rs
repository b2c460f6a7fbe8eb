//! CSV ingestion: parse, infer a schema, coerce cells into typed columns.

mod build;
mod coerce;
mod csv;
mod infer;

use std::io::Read;
use std::time::Instant;

use serde::{Deserialize, Serialize};

pub use self::build::build_table;
pub use self::coerce::{coerce_value, Coerced};
pub use self::csv::{dedup_header, parse_csv, read_csv, RawCsv};
pub use self::infer::{detect_cell_type, infer_column_type, infer_schema};
pub use crate::schema::{ColumnType, Field, TableSchema};

use crate::error::Result;
use crate::store::Table;
use crate::year::AcademicYearId;

/// Cells that read as null regardless of the column type.
pub const DEFAULT_NULL_TOKENS: [&str; 4] = ["", "NULL", "null", "PrivacySuppressed"];

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Unparsable cells become null and are counted as coercion warnings;
    /// short rows are padded with nulls.
    #[default]
    Lenient,
    /// Unparsable cells and short rows are errors.
    Strict,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NullTokens(Vec<String>);

impl NullTokens {
    pub fn new<I, S>(tokens: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self(tokens.into_iter().map(Into::into).collect())
    }

    #[inline]
    pub fn is_null(&self, cell: &str) -> bool {
        self.0.iter().any(|t| t == cell)
    }

    pub fn tokens(&self) -> &[String] {
        &self.0
    }
}

impl Default for NullTokens {
    fn default() -> Self {
        Self::new(DEFAULT_NULL_TOKENS)
    }
}

#[derive(Debug, Clone)]
pub struct IngestOptions {
    pub delimiter: u8,
    pub mode: Mode,
    pub null_tokens: NullTokens,
}

impl Default for IngestOptions {
    fn default() -> Self {
        Self {
            delimiter: b',',
            mode: Mode::Lenient,
            null_tokens: NullTokens::default(),
        }
    }
}

/// Summary of one ingestion.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IngestReport {
    pub table_name: String,
    pub row_count: u64,
    pub column_count: u64,
    pub null_cells: u64,
    /// Cells turned into nulls because they were neither a null token nor
    /// parsable as the column type. Always zero in strict mode.
    pub coercion_warnings: u64,
    pub elapsed_ms: u64,
}

/// Reads, infers and builds a table in one go. `elapsed_ms` in the report
/// covers the whole pipeline, including reading `source`.
pub fn ingest<R: Read>(
    source: R,
    year: AcademicYearId,
    options: &IngestOptions,
) -> Result<(Table, IngestReport)> {
    let started = Instant::now();
    let raw = read_csv(source, options)?;
    let schema = infer_schema(&raw, &options.null_tokens);
    let (table, mut report) = build_table(&raw, &schema, year, options)?;
    report.elapsed_ms = started.elapsed().as_millis() as u64;
    Ok((table, report))
}
