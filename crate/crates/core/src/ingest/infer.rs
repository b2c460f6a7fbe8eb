use crate::ingest::{NullTokens, RawCsv};
use crate::schema::{ColumnType, Field, TableSchema};

use super::coerce::{parse_bool, parse_float, parse_int};

/// Type of a single non-null cell.
pub fn detect_cell_type(cell: &str) -> ColumnType {
    if parse_int(cell).is_some() {
        ColumnType::Int64
    } else if parse_float(cell).is_some() {
        ColumnType::Float64
    } else if parse_bool(cell).is_some() {
        ColumnType::Bool
    } else {
        ColumnType::String
    }
}

/// Least upper bound of the detected types of every non-null cell.
///
/// Every cell is inspected, not a leading sample. A column with no non-null
/// cells is `String`. `None` cells (padding for short rows) are null.
pub fn infer_column_type<'a, I>(cells: I, nulls: &NullTokens) -> ColumnType
where
    I: IntoIterator<Item = Option<&'a str>>,
{
    let mut acc: Option<ColumnType> = None;
    for cell in cells.into_iter().flatten() {
        if nulls.is_null(cell) {
            continue;
        }
        let ty = detect_cell_type(cell);
        let next = match acc {
            None => ty,
            Some(prev) => prev.promote(ty),
        };
        if next == ColumnType::String {
            return ColumnType::String;
        }
        acc = Some(next);
    }
    acc.unwrap_or(ColumnType::String)
}

pub fn infer_schema(raw: &RawCsv, nulls: &NullTokens) -> TableSchema {
    let fields = raw
        .header()
        .iter()
        .enumerate()
        .map(|(i, name)| Field::new(name.clone(), infer_column_type(raw.column(i), nulls)))
        .collect();
    TableSchema::new(fields)
}
