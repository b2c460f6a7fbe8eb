use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::schema::{ColumnType, Field, TableSchema};
use crate::store::ColumnData;
use crate::year::AcademicYearId;

/// An immutable table of equal-length columns for one academic year.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    year: AcademicYearId,
    schema: TableSchema,
    columns: Vec<ColumnData>,
    row_count: usize,
}

impl Table {
    /// `row_count` is explicit so that zero-column tables keep their height.
    pub fn new(year: AcademicYearId, row_count: usize, columns: Vec<ColumnData>) -> Result<Self> {
        let mut seen = HashSet::with_capacity(columns.len());
        for col in &columns {
            if col.len() != row_count {
                return Err(Error::InvalidTable(format!(
                    "column {:?} has {} rows, table has {row_count}",
                    col.name(),
                    col.len()
                )));
            }
            if !seen.insert(col.name()) {
                return Err(Error::InvalidTable(format!(
                    "duplicate column name {:?}",
                    col.name()
                )));
            }
        }
        let schema = TableSchema::new(
            columns
                .iter()
                .map(|c| Field::new(c.name(), c.dtype()))
                .collect(),
        );
        Ok(Self {
            year,
            schema,
            columns,
            row_count,
        })
    }

    pub fn year(&self) -> AcademicYearId {
        self.year
    }

    pub fn schema(&self) -> &TableSchema {
        &self.schema
    }

    pub fn columns(&self) -> &[ColumnData] {
        &self.columns
    }

    pub fn row_count(&self) -> usize {
        self.row_count
    }

    pub fn column_count(&self) -> usize {
        self.columns.len()
    }

    pub fn column(&self, name: &str) -> Option<&ColumnData> {
        self.schema.index_of(name).map(|i| &self.columns[i])
    }

    pub fn null_cells(&self) -> usize {
        self.columns.iter().map(ColumnData::null_count).sum()
    }

    pub fn summary(&self) -> DatasetSummary {
        DatasetSummary {
            year: self.year,
            row_count: self.row_count as u64,
            column_count: self.columns.len() as u64,
        }
    }

    pub fn schema_report(&self) -> SchemaReport {
        SchemaReport {
            columns: self
                .columns
                .iter()
                .map(|c| ColumnReport {
                    name: c.name().to_owned(),
                    dtype: c.dtype(),
                    null_count: c.null_count() as u64,
                })
                .collect(),
        }
    }
}

/// One catalog entry as listed to clients.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatasetSummary {
    pub year: AcademicYearId,
    pub row_count: u64,
    pub column_count: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchemaReport {
    pub columns: Vec<ColumnReport>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColumnReport {
    pub name: String,
    #[serde(rename = "type")]
    pub dtype: ColumnType,
    pub null_count: u64,
}
