//! Ingestion, columnar storage and null-aware aggregation for year-keyed
//! institutional enrollment data.
//!
//! A typical flow reads a CSV file with [`ingest::ingest`], publishes the
//! resulting [`store::Table`] into a [`store::Catalog`], and queries it with
//! the functions in [`query`].

pub mod error;
pub mod ingest;
pub mod query;
pub mod schema;
pub mod store;
pub mod year;

pub use error::{Error, Result};
pub use schema::{ColumnType, Field, TableSchema};
pub use year::AcademicYearId;
