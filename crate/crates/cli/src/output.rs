//! Text, JSON and CSV renderings. JSON output is the same serialization the
//! HTTP API returns.

use std::io::{self, Write};

use clap::ValueEnum;
use pabed_core::ingest::IngestReport;
use pabed_core::query::{AggregateResult, ComparisonResult, TrendSeries};
use pabed_core::store::{DatasetSummary, SchemaReport};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

fn json<W: Write, T: Serialize>(out: &mut W, value: &T) -> io::Result<()> {
    serde_json::to_writer(&mut *out, value)?;
    writeln!(out)
}

pub fn ingest_report<W: Write>(out: &mut W, r: &IngestReport, format: Format) -> io::Result<()> {
    match format {
        Format::Json => json(out, r),
        Format::Csv => {
            writeln!(out, "table_name,row_count,column_count,null_cells,coercion_warnings,elapsed_ms")?;
            writeln!(
                out,
                "{},{},{},{},{},{}",
                r.table_name, r.row_count, r.column_count, r.null_cells, r.coercion_warnings, r.elapsed_ms
            )
        }
        Format::Table => {
            writeln!(out, "ingested {}", r.table_name)?;
            writeln!(out, "  rows               {}", r.row_count)?;
            writeln!(out, "  columns            {}", r.column_count)?;
            writeln!(out, "  null cells         {}", r.null_cells)?;
            writeln!(out, "  coercion warnings  {}", r.coercion_warnings)?;
            writeln!(out, "  elapsed            {} ms", r.elapsed_ms)
        }
    }
}

pub fn datasets<W: Write>(out: &mut W, list: &[DatasetSummary], format: Format) -> io::Result<()> {
    match format {
        Format::Json => json(out, &list),
        Format::Csv => {
            writeln!(out, "year,row_count,column_count")?;
            for d in list {
                writeln!(out, "{},{},{}", d.year, d.row_count, d.column_count)?;
            }
            Ok(())
        }
        Format::Table => {
            for d in list {
                writeln!(out, "{}  {:>10} rows  {:>6} columns", d.year, d.row_count, d.column_count)?;
            }
            Ok(())
        }
    }
}

pub fn schema<W: Write>(out: &mut W, s: &SchemaReport, format: Format) -> io::Result<()> {
    match format {
        Format::Json => json(out, s),
        Format::Csv => {
            writeln!(out, "name,type,null_count")?;
            for c in &s.columns {
                writeln!(out, "{},{},{}", csv_field(&c.name), c.dtype, c.null_count)?;
            }
            Ok(())
        }
        Format::Table => {
            let width = s.columns.iter().map(|c| c.name.len()).max().unwrap_or(4).max(4);
            writeln!(out, "{:<width$}  {:<7}  NULLS", "NAME", "TYPE")?;
            for c in &s.columns {
                writeln!(out, "{:<width$}  {:<7}  {}", c.name, c.dtype.as_str(), c.null_count)?;
            }
            Ok(())
        }
    }
}

pub fn comparison<W: Write>(out: &mut W, c: &ComparisonResult, format: Format) -> io::Result<()> {
    match format {
        Format::Json => json(out, c),
        Format::Csv => {
            writeln!(out, "year,measure,total,non_null_rows,null_rows")?;
            for a in [&c.first, &c.second] {
                writeln!(
                    out,
                    "{},{},{},{},{}",
                    a.year,
                    csv_field(a.measure.column_name()),
                    a.total,
                    a.non_null_rows,
                    a.null_rows
                )?;
            }
            Ok(())
        }
        Format::Table => {
            writeln!(out, "{} totals", c.first.measure)?;
            let row = |out: &mut W, a: &AggregateResult| {
                writeln!(
                    out,
                    "  {}  {:>18}  ({} rows, {} null)",
                    a.year, a.total, a.non_null_rows, a.null_rows
                )
            };
            row(out, &c.first)?;
            row(out, &c.second)?;
            writeln!(out, "  delta       {}", c.delta)?;
            match c.pct_change {
                Some(p) => writeln!(out, "  change      {p:.2}%"),
                None => writeln!(out, "  change      n/a (first total is 0)"),
            }
        }
    }
}

pub fn trend<W: Write>(out: &mut W, s: &TrendSeries, format: Format) -> io::Result<()> {
    match format {
        Format::Json => json(out, s),
        Format::Csv => {
            writeln!(out, "year,total,non_null_rows")?;
            for p in &s.points {
                writeln!(out, "{},{},{}", p.year, p.total, p.non_null_rows)?;
            }
            Ok(())
        }
        Format::Table => {
            writeln!(out, "{} by year", s.measure)?;
            for p in &s.points {
                writeln!(out, "  {}  {:>18}  ({} rows)", p.year, p.total, p.non_null_rows)?;
            }
            Ok(())
        }
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_owned()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_quoting() {
        assert_eq!(csv_field("plain"), "plain");
        assert_eq!(csv_field("a,b"), "\"a,b\"");
        assert_eq!(csv_field("say \"x\""), "\"say \"\"x\"\"\"");
    }

    #[test]
    fn empty_list_prints_nothing_as_table() {
        let mut buf = Vec::new();
        datasets(&mut buf, &[], Format::Table).unwrap();
        assert!(buf.is_empty());
        datasets(&mut buf, &[], Format::Json).unwrap();
        assert_eq!(buf, b"[]\n");
    }
}
