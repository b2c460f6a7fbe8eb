//! Columnar tables, the year-keyed catalog and snapshot persistence.

mod bitmap;
mod catalog;
mod column;
pub mod snapshot;
mod table;

pub use self::bitmap::NullBitmap;
pub use self::catalog::Catalog;
pub use self::column::{ColumnBuilder, ColumnData, ColumnValues, Value, ValueRef};
pub use self::snapshot::{read_snapshot, write_snapshot};
pub use self::table::{ColumnReport, DatasetSummary, SchemaReport, Table};
