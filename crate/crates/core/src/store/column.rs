use crate::error::{Error, Result};
use crate::schema::ColumnType;
use crate::store::NullBitmap;

/// An owned, typed cell value.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Int64(i64),
    Float64(f64),
    Bool(bool),
    String(String),
}

impl Value {
    pub fn dtype(&self) -> ColumnType {
        match self {
            Value::Int64(_) => ColumnType::Int64,
            Value::Float64(_) => ColumnType::Float64,
            Value::Bool(_) => ColumnType::Bool,
            Value::String(_) => ColumnType::String,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ValueRef<'a> {
    Int64(i64),
    Float64(f64),
    Bool(bool),
    String(&'a str),
}

impl ValueRef<'_> {
    pub fn to_owned(self) -> Value {
        match self {
            ValueRef::Int64(v) => Value::Int64(v),
            ValueRef::Float64(v) => Value::Float64(v),
            ValueRef::Bool(v) => Value::Bool(v),
            ValueRef::String(v) => Value::String(v.to_owned()),
        }
    }
}

/// Dense value vector. Null rows hold `0`, `0.0`, `false` or `""`.
#[derive(Debug, Clone)]
pub enum ColumnValues {
    Int64(Vec<i64>),
    Float64(Vec<f64>),
    Bool(Vec<bool>),
    String(Vec<String>),
}

impl ColumnValues {
    pub fn with_capacity(dtype: ColumnType, rows: usize) -> Self {
        match dtype {
            ColumnType::Int64 => ColumnValues::Int64(Vec::with_capacity(rows)),
            ColumnType::Float64 => ColumnValues::Float64(Vec::with_capacity(rows)),
            ColumnType::Bool => ColumnValues::Bool(Vec::with_capacity(rows)),
            ColumnType::String => ColumnValues::String(Vec::with_capacity(rows)),
        }
    }

    pub fn dtype(&self) -> ColumnType {
        match self {
            ColumnValues::Int64(_) => ColumnType::Int64,
            ColumnValues::Float64(_) => ColumnType::Float64,
            ColumnValues::Bool(_) => ColumnType::Bool,
            ColumnValues::String(_) => ColumnType::String,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            ColumnValues::Int64(v) => v.len(),
            ColumnValues::Float64(v) => v.len(),
            ColumnValues::Bool(v) => v.len(),
            ColumnValues::String(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn push_placeholder(&mut self) {
        match self {
            ColumnValues::Int64(v) => v.push(0),
            ColumnValues::Float64(v) => v.push(0.0),
            ColumnValues::Bool(v) => v.push(false),
            ColumnValues::String(v) => v.push(String::new()),
        }
    }

    fn clear_at(&mut self, row: usize) {
        match self {
            ColumnValues::Int64(v) => v[row] = 0,
            ColumnValues::Float64(v) => v[row] = 0.0,
            ColumnValues::Bool(v) => v[row] = false,
            ColumnValues::String(v) => v[row].clear(),
        }
    }

    fn get(&self, row: usize) -> ValueRef<'_> {
        match self {
            ColumnValues::Int64(v) => ValueRef::Int64(v[row]),
            ColumnValues::Float64(v) => ValueRef::Float64(v[row]),
            ColumnValues::Bool(v) => ValueRef::Bool(v[row]),
            ColumnValues::String(v) => ValueRef::String(&v[row]),
        }
    }
}

impl PartialEq for ColumnValues {
    /// Floats compare by bit pattern so that equality means "identical
    /// storage", which is what snapshot round trips need.
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (ColumnValues::Int64(a), ColumnValues::Int64(b)) => a == b,
            (ColumnValues::Float64(a), ColumnValues::Float64(b)) => {
                a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.to_bits() == y.to_bits())
            }
            (ColumnValues::Bool(a), ColumnValues::Bool(b)) => a == b,
            (ColumnValues::String(a), ColumnValues::String(b)) => a == b,
            _ => false,
        }
    }
}

/// A named, typed column with a null bitmap.
#[derive(Debug, Clone, PartialEq)]
pub struct ColumnData {
    name: String,
    values: ColumnValues,
    nulls: NullBitmap,
}

impl ColumnData {
    /// Pairs values with a bitmap of the same length. Values at null rows are
    /// reset to the type's placeholder.
    pub fn new(name: impl Into<String>, mut values: ColumnValues, nulls: NullBitmap) -> Result<Self> {
        let name = name.into();
        if values.len() != nulls.len() {
            return Err(Error::InvalidTable(format!(
                "column {name:?}: {} values but {} bitmap rows",
                values.len(),
                nulls.len()
            )));
        }
        if nulls.null_count() > 0 {
            for row in 0..nulls.len() {
                if nulls.is_null(row) {
                    values.clear_at(row);
                }
            }
        }
        Ok(Self {
            name,
            values,
            nulls,
        })
    }

    pub fn from_options<T: Into<Value>>(
        name: impl Into<String>,
        dtype: ColumnType,
        cells: impl IntoIterator<Item = Option<T>>,
    ) -> Result<Self> {
        let mut builder = ColumnBuilder::new(name, dtype, 0);
        for cell in cells {
            builder.push(cell.map(Into::into))?;
        }
        Ok(builder.finish())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dtype(&self) -> ColumnType {
        self.values.dtype()
    }

    pub fn len(&self) -> usize {
        self.nulls.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn null_count(&self) -> usize {
        self.nulls.null_count()
    }

    pub fn is_null(&self, row: usize) -> bool {
        self.nulls.is_null(row)
    }

    pub fn get(&self, row: usize) -> Option<ValueRef<'_>> {
        if self.nulls.is_null(row) {
            None
        } else {
            Some(self.values.get(row))
        }
    }

    pub fn values(&self) -> &ColumnValues {
        &self.values
    }

    pub fn nulls(&self) -> &NullBitmap {
        &self.nulls
    }

    /// Non-null values widened to `f64`, or `None` for non-numeric columns.
    pub fn numeric_iter(&self) -> Option<Box<dyn Iterator<Item = Option<f64>> + '_>> {
        let nulls = &self.nulls;
        match &self.values {
            ColumnValues::Int64(v) => Some(Box::new(
                v.iter()
                    .enumerate()
                    .map(move |(i, &x)| (!nulls.is_null(i)).then_some(x as f64)),
            )),
            ColumnValues::Float64(v) => Some(Box::new(
                v.iter()
                    .enumerate()
                    .map(move |(i, &x)| (!nulls.is_null(i)).then_some(x)),
            )),
            _ => None,
        }
    }
}

/// Appends typed values and nulls row by row.
#[derive(Debug)]
pub struct ColumnBuilder {
    name: String,
    values: ColumnValues,
    nulls: NullBitmap,
}

impl ColumnBuilder {
    pub fn new(name: impl Into<String>, dtype: ColumnType, capacity: usize) -> Self {
        Self {
            name: name.into(),
            values: ColumnValues::with_capacity(dtype, capacity),
            nulls: NullBitmap::with_capacity(capacity),
        }
    }

    pub fn dtype(&self) -> ColumnType {
        self.values.dtype()
    }

    pub fn push_null(&mut self) {
        self.values.push_placeholder();
        self.nulls.push(true);
    }

    /// Appends a value of the builder's type. `Int64` values are accepted by
    /// `Float64` builders.
    pub fn push(&mut self, value: Option<Value>) -> Result<()> {
        let Some(value) = value else {
            self.push_null();
            return Ok(());
        };
        match (&mut self.values, value) {
            (ColumnValues::Int64(v), Value::Int64(x)) => v.push(x),
            (ColumnValues::Float64(v), Value::Float64(x)) => v.push(x),
            (ColumnValues::Float64(v), Value::Int64(x)) => v.push(x as f64),
            (ColumnValues::Bool(v), Value::Bool(x)) => v.push(x),
            (ColumnValues::String(v), Value::String(x)) => v.push(x),
            (values, value) => {
                return Err(Error::InvalidTable(format!(
                    "column {:?}: cannot store {} in {}",
                    self.name,
                    value.dtype(),
                    values.dtype()
                )))
            }
        }
        self.nulls.push(false);
        Ok(())
    }

    pub(crate) fn push_i64(&mut self, x: i64) {
        match &mut self.values {
            ColumnValues::Int64(v) => v.push(x),
            other => unreachable!("push_i64 on {} column", other.dtype()),
        }
        self.nulls.push(false);
    }

    pub(crate) fn push_f64(&mut self, x: f64) {
        match &mut self.values {
            ColumnValues::Float64(v) => v.push(x),
            other => unreachable!("push_f64 on {} column", other.dtype()),
        }
        self.nulls.push(false);
    }

    pub(crate) fn push_bool(&mut self, x: bool) {
        match &mut self.values {
            ColumnValues::Bool(v) => v.push(x),
            other => unreachable!("push_bool on {} column", other.dtype()),
        }
        self.nulls.push(false);
    }

    pub(crate) fn push_str(&mut self, x: &str) {
        match &mut self.values {
            ColumnValues::String(v) => v.push(x.to_owned()),
            other => unreachable!("push_str on {} column", other.dtype()),
        }
        self.nulls.push(false);
    }

    pub fn finish(self) -> ColumnData {
        ColumnData {
            name: self.name,
            values: self.values,
            nulls: self.nulls,
        }
    }
}

impl From<i64> for Value {
    fn from(v: i64) -> Self {
        Value::Int64(v)
    }
}

impl From<f64> for Value {
    fn from(v: f64) -> Self {
        Value::Float64(v)
    }
}

impl From<bool> for Value {
    fn from(v: bool) -> Self {
        Value::Bool(v)
    }
}

impl From<&str> for Value {
    fn from(v: &str) -> Self {
        Value::String(v.to_owned())
    }
}

impl From<String> for Value {
    fn from(v: String) -> Self {
        Value::String(v)
    }
}
