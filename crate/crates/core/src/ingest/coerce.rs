use crate::error::{Error, Result};
use crate::ingest::{Mode, NullTokens};
use crate::schema::ColumnType;
use crate::store::Value;

/// Outcome of converting one cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Coerced {
    Value(Value),
    /// The cell is a null token (or padding).
    Null,
    /// Lenient mode only: the cell did not parse and was replaced by null.
    Invalid,
}

impl Coerced {
    pub fn into_value(self) -> Option<Value> {
        match self {
            Coerced::Value(v) => Some(v),
            Coerced::Null | Coerced::Invalid => None,
        }
    }
}

pub fn coerce_value(
    cell: &str,
    target: ColumnType,
    mode: Mode,
    nulls: &NullTokens,
) -> Result<Coerced> {
    if nulls.is_null(cell) {
        return Ok(Coerced::Null);
    }
    let parsed = match target {
        ColumnType::Int64 => parse_int(cell).map(Value::Int64),
        ColumnType::Float64 => parse_float(cell).map(Value::Float64),
        ColumnType::Bool => parse_bool(cell).map(Value::Bool),
        ColumnType::String => Some(Value::String(cell.to_owned())),
    };
    match (parsed, mode) {
        (Some(v), _) => Ok(Coerced::Value(v)),
        (None, Mode::Lenient) => Ok(Coerced::Invalid),
        (None, Mode::Strict) => Err(Error::Coercion {
            column: String::new(),
            row: 0,
            cell: cell.to_owned(),
            target,
        }),
    }
}

#[inline]
pub(crate) fn parse_int(cell: &str) -> Option<i64> {
    cell.trim().parse().ok()
}

/// Finite decimal or scientific literals only; `NaN`/`inf` are not numbers
/// here.
#[inline]
pub(crate) fn parse_float(cell: &str) -> Option<f64> {
    cell.trim().parse::<f64>().ok().filter(|v| v.is_finite())
}

#[inline]
pub(crate) fn parse_bool(cell: &str) -> Option<bool> {
    let cell = cell.trim();
    if cell.eq_ignore_ascii_case("true") {
        Some(true)
    } else if cell.eq_ignore_ascii_case("false") {
        Some(false)
    } else {
        None
    }
}
