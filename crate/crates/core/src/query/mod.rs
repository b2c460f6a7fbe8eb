//! Null-aware aggregation over catalog tables.
//!
//! All totals are real-valued: `INT64` columns are widened to `f64` before
//! accumulation. Nulls never contribute to a total or a count of non-null
//! rows. Totals for different years may cover different sets of
//! institutions; no matching across years is attempted.

mod sum;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use self::sum::CompensatedSum;

use crate::error::{Error, Result};
use crate::store::{Catalog, ColumnData, ColumnValues, Table};
use crate::year::AcademicYearId;

pub const DEFAULT_MEASURE: &str = "UGDS";

/// Name of a numeric column to aggregate.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MeasureRef(String);

impl MeasureRef {
    pub fn new(column: impl Into<String>) -> Self {
        Self(column.into())
    }

    pub fn column_name(&self) -> &str {
        &self.0
    }

    /// Resolves to a numeric column of `table`. A column with no non-null
    /// cells is accepted whatever its type, since inference types such
    /// columns as `STRING`.
    pub fn resolve<'t>(&self, table: &'t Table) -> Result<&'t ColumnData> {
        let col = table
            .column(&self.0)
            .ok_or_else(|| Error::UnknownColumn(self.0.clone()))?;
        if !col.dtype().is_numeric() && col.null_count() < col.len() {
            return Err(Error::TypeMismatch {
                column: self.0.clone(),
                actual: col.dtype(),
            });
        }
        Ok(col)
    }
}

impl Default for MeasureRef {
    fn default() -> Self {
        Self::new(DEFAULT_MEASURE)
    }
}

impl fmt::Display for MeasureRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateResult {
    pub year: AcademicYearId,
    pub measure: MeasureRef,
    /// Zero when no row is non-null.
    pub total: f64,
    pub non_null_rows: u64,
    pub null_rows: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonResult {
    pub first: AggregateResult,
    pub second: AggregateResult,
    /// `second.total - first.total`
    pub delta: f64,
    /// `delta / first.total * 100`, absent when the first total is zero.
    pub pct_change: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrendPoint {
    pub year: AcademicYearId,
    pub total: f64,
    pub non_null_rows: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrendSeries {
    pub measure: MeasureRef,
    pub points: Vec<TrendPoint>,
}

/// Visits each non-null value of a numeric column as `f64`.
#[inline]
fn for_each_numeric(col: &ColumnData, mut f: impl FnMut(usize, f64)) {
    let nulls = col.nulls();
    let no_nulls = nulls.null_count() == 0;
    match col.values() {
        ColumnValues::Int64(v) => {
            for (i, &x) in v.iter().enumerate() {
                if no_nulls || !nulls.is_null(i) {
                    f(i, x as f64);
                }
            }
        }
        ColumnValues::Float64(v) => {
            for (i, &x) in v.iter().enumerate() {
                if no_nulls || !nulls.is_null(i) {
                    f(i, x);
                }
            }
        }
        // All-null column of another type: nothing to visit.
        _ => debug_assert_eq!(nulls.null_count(), nulls.len()),
    }
}

/// Compensated sum of the non-null values of `measure`.
pub fn sum_column(table: &Table, measure: &MeasureRef) -> Result<AggregateResult> {
    let col = measure.resolve(table)?;
    let mut acc = CompensatedSum::new();
    let mut non_null = 0u64;
    for_each_numeric(col, |_, x| {
        acc.add(x);
        non_null += 1;
    });
    Ok(AggregateResult {
        year: table.year(),
        measure: measure.clone(),
        total: if non_null == 0 { 0.0 } else { acc.value() },
        non_null_rows: non_null,
        null_rows: table.row_count() as u64 - non_null,
    })
}

pub fn compare_years(
    catalog: &Catalog,
    first: AcademicYearId,
    second: AcademicYearId,
    measure: &MeasureRef,
) -> Result<ComparisonResult> {
    let first = sum_column(&*catalog.lookup(first)?, measure)?;
    let second = sum_column(&*catalog.lookup(second)?, measure)?;
    Ok(comparison(first, second))
}

/// Builds the comparison from two totals. Swapping the operands negates
/// `delta` exactly.
pub fn comparison(first: AggregateResult, second: AggregateResult) -> ComparisonResult {
    let delta = second.total - first.total;
    let pct_change = (first.total != 0.0).then(|| delta / first.total * 100.0);
    ComparisonResult {
        first,
        second,
        delta,
        pct_change,
    }
}

/// Totals for every registered year in `[from, to]`, ascending. Unregistered
/// years are skipped, not zero-filled.
pub fn trend_series(
    catalog: &Catalog,
    from: AcademicYearId,
    to: AcademicYearId,
    measure: &MeasureRef,
) -> Result<TrendSeries> {
    if from > to {
        return Err(Error::ReversedRange {
            from: from.label(),
            to: to.label(),
        });
    }
    let years = catalog.years_in_range(from, to);
    if years.is_empty() {
        return Err(Error::EmptyRange {
            from: from.label(),
            to: to.label(),
        });
    }
    let points = years
        .into_iter()
        .map(|year| {
            let agg = sum_column(&*catalog.lookup(year)?, measure)?;
            Ok(TrendPoint {
                year,
                total: agg.total,
                non_null_rows: agg.non_null_rows,
            })
        })
        .collect::<Result<_>>()?;
    Ok(TrendSeries {
        measure: measure.clone(),
        points,
    })
}

/// `Σ(w·v) / Σw` over rows where both weight and value are non-null.
/// `None` when no row qualifies or the weights sum to zero.
pub fn weighted_mean(table: &Table, weight: &MeasureRef, value: &MeasureRef) -> Result<Option<f64>> {
    let weights = weight.resolve(table)?;
    let values = value.resolve(table)?;
    let mut num = CompensatedSum::new();
    let mut den = CompensatedSum::new();
    let mut qualifying = 0u64;
    for_each_numeric(weights, |i, w| {
        if let Some(v) = numeric_at(values, i) {
            num.add(w * v);
            den.add(w);
            qualifying += 1;
        }
    });
    let den = den.value();
    if qualifying == 0 || den == 0.0 {
        return Ok(None);
    }
    Ok(Some(num.value() / den))
}

#[inline]
fn numeric_at(col: &ColumnData, row: usize) -> Option<f64> {
    if col.is_null(row) {
        return None;
    }
    match col.values() {
        ColumnValues::Int64(v) => Some(v[row] as f64),
        ColumnValues::Float64(v) => Some(v[row]),
        _ => None,
    }
}
