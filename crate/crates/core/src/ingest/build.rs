use std::time::Instant;

use crate::error::{Error, Result};
use crate::ingest::{IngestOptions, IngestReport, Mode, RawCsv};
use crate::schema::{ColumnType, TableSchema};
use crate::store::{ColumnBuilder, Table};
use crate::year::AcademicYearId;

use super::coerce::{parse_bool, parse_float, parse_int};

/// Converts raw cells into typed, null-aware columns.
///
/// Column names come from `schema`. There is no size ceiling on the input.
pub fn build_table(
    raw: &RawCsv,
    schema: &TableSchema,
    year: AcademicYearId,
    options: &IngestOptions,
) -> Result<(Table, IngestReport)> {
    let started = Instant::now();
    if schema.len() != raw.column_count() {
        return Err(Error::SchemaMismatch {
            schema: schema.len(),
            header: raw.column_count(),
        });
    }
    let rows = raw.row_count();
    let mut warnings = 0u64;
    let mut columns = Vec::with_capacity(schema.len());
    for (col, field) in schema.fields.iter().enumerate() {
        let mut builder = ColumnBuilder::new(field.name.clone(), field.dtype, rows);
        for (row, cell) in raw.column(col).enumerate() {
            let cell = match cell {
                Some(c) if !options.null_tokens.is_null(c) => c,
                _ => {
                    builder.push_null();
                    continue;
                }
            };
            let ok = match field.dtype {
                ColumnType::Int64 => parse_int(cell).map(|v| builder.push_i64(v)).is_some(),
                ColumnType::Float64 => parse_float(cell).map(|v| builder.push_f64(v)).is_some(),
                ColumnType::Bool => parse_bool(cell).map(|v| builder.push_bool(v)).is_some(),
                ColumnType::String => {
                    builder.push_str(cell);
                    true
                }
            };
            if !ok {
                if options.mode == Mode::Strict {
                    return Err(Error::Coercion {
                        column: field.name.clone(),
                        row: row as u64 + 1,
                        cell: cell.to_owned(),
                        target: field.dtype,
                    });
                }
                warnings += 1;
                builder.push_null();
            }
        }
        columns.push(builder.finish());
    }
    let table = Table::new(year, rows, columns)?;
    let report = IngestReport {
        table_name: year.label(),
        row_count: rows as u64,
        column_count: table.column_count() as u64,
        null_cells: table.null_cells() as u64,
        coercion_warnings: warnings,
        elapsed_ms: started.elapsed().as_millis() as u64,
    };
    Ok((table, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::{infer_schema, parse_csv, Field};
    use crate::store::ValueRef;

    fn year() -> AcademicYearId {
        AcademicYearId::parse("1996_97").unwrap()
    }

    fn ingest(text: &str, options: &IngestOptions) -> Result<(Table, IngestReport)> {
        let raw = parse_csv(text.as_bytes(), options)?;
        let schema = infer_schema(&raw, &options.null_tokens);
        build_table(&raw, &schema, year(), options)
    }

    #[test]
    fn three_rows_one_null() {
        let (table, report) =
            ingest("UNITID,UGDS\n1,100\n2,NULL\n3,250\n", &IngestOptions::default()).unwrap();
        assert_eq!(report.row_count, 3);
        assert_eq!(report.column_count, 2);
        assert_eq!(report.null_cells, 1);
        assert_eq!(report.coercion_warnings, 0);
        assert_eq!(report.table_name, "1996_97");
        let ugds = table.column("UGDS").unwrap();
        assert_eq!(ugds.dtype(), ColumnType::Int64);
        assert_eq!(ugds.get(0), Some(ValueRef::Int64(100)));
        assert_eq!(ugds.get(1), None);
    }

    #[test]
    fn lenient_counts_warnings_for_forced_types() {
        let raw = parse_csv(b"x\n1\nabc\nNULL\n", &IngestOptions::default()).unwrap();
        let schema = TableSchema::new(vec![Field::new("x", ColumnType::Int64)]);
        let (table, report) = build_table(&raw, &schema, year(), &IngestOptions::default()).unwrap();
        assert_eq!(report.coercion_warnings, 1);
        assert_eq!(report.null_cells, 2);
        assert_eq!(table.column("x").unwrap().null_count(), 2);
    }

    #[test]
    fn strict_raises_with_location() {
        let options = IngestOptions {
            mode: Mode::Strict,
            ..Default::default()
        };
        let raw = parse_csv(b"x\n1\nabc\n", &options).unwrap();
        let schema = TableSchema::new(vec![Field::new("x", ColumnType::Int64)]);
        let err = build_table(&raw, &schema, year(), &options).unwrap_err();
        match err {
            Error::Coercion { column, row, cell, .. } => {
                assert_eq!((column.as_str(), row, cell.as_str()), ("x", 2, "abc"));
            }
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn schema_width_must_match() {
        let raw = parse_csv(b"a,b\n1,2\n", &IngestOptions::default()).unwrap();
        let schema = TableSchema::new(vec![Field::new("a", ColumnType::Int64)]);
        assert!(matches!(
            build_table(&raw, &schema, year(), &IngestOptions::default()),
            Err(Error::SchemaMismatch { .. })
        ));
    }

    #[test]
    fn padded_cells_become_nulls() {
        let (table, report) = ingest("a,b\n1\n2,3\n", &IngestOptions::default()).unwrap();
        assert_eq!(report.null_cells, 1);
        assert_eq!(table.column("b").unwrap().dtype(), ColumnType::Int64);
    }

    #[test]
    fn larger_than_one_megabyte() {
        let mut text = String::from("UNITID,UGDS\n");
        let mut i = 0;
        while text.len() <= 2 << 20 {
            text.push_str(&format!("{i},{}\n", i % 5000));
            i += 1;
        }
        let (_, report) = ingest(&text, &IngestOptions::default()).unwrap();
        assert_eq!(report.row_count, i);
    }
}
