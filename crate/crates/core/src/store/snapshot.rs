//! Binary table snapshots (`<label>.pbed`).
//!
//! Layout, all integers little-endian:
//!
//! ```text
//! "PBED"  u32 version=1
//! u32 column_count, then per column: u32 name_len, name (UTF-8), u8 type tag
//! u64 row_count
//! per column: null bitmap (ceil(rows/8) bytes, LSB-first), then values
//!   INT64 i64 | FLOAT64 f64 bits | BOOL u8 (0/1) | STRING u32 len + UTF-8
//! u32 CRC-32 (IEEE) of every preceding byte
//! ```
//!
//! Type tags: 1 = INT64, 2 = FLOAT64, 3 = BOOL, 4 = STRING. Null rows carry
//! zero/empty placeholders; a decoder rejects anything else.

use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::schema::{ColumnType, Field, TableSchema};
use crate::store::{ColumnData, ColumnValues, NullBitmap, Table};
use crate::year::AcademicYearId;

pub const MAGIC: &[u8; 4] = b"PBED";
pub const VERSION: u32 = 1;
pub const EXTENSION: &str = "pbed";

const TRAILER_LEN: usize = 4;

fn type_tag(ty: ColumnType) -> u8 {
    match ty {
        ColumnType::Int64 => 1,
        ColumnType::Float64 => 2,
        ColumnType::Bool => 3,
        ColumnType::String => 4,
    }
}

fn tag_type(tag: u8) -> Option<ColumnType> {
    Some(match tag {
        1 => ColumnType::Int64,
        2 => ColumnType::Float64,
        3 => ColumnType::Bool,
        4 => ColumnType::String,
        _ => return None,
    })
}

fn format_err(msg: impl Into<String>) -> Error {
    Error::Format(msg.into())
}

/// Serializes `table` into the snapshot layout.
pub fn encode(table: &Table) -> Vec<u8> {
    let mut out = Vec::new();
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.extend_from_slice(&(table.column_count() as u32).to_le_bytes());
    for field in &table.schema().fields {
        out.extend_from_slice(&(field.name.len() as u32).to_le_bytes());
        out.extend_from_slice(field.name.as_bytes());
        out.push(type_tag(field.dtype));
    }
    out.extend_from_slice(&(table.row_count() as u64).to_le_bytes());
    for col in table.columns() {
        encode_column(col, &mut out);
    }
    let crc = crc32fast::hash(&out);
    out.extend_from_slice(&crc.to_le_bytes());
    out
}

fn encode_column(col: &ColumnData, out: &mut Vec<u8>) {
    out.extend_from_slice(col.nulls().as_bytes());
    match col.values() {
        ColumnValues::Int64(v) => v.iter().for_each(|x| out.extend_from_slice(&x.to_le_bytes())),
        ColumnValues::Float64(v) => v
            .iter()
            .for_each(|x| out.extend_from_slice(&x.to_bits().to_le_bytes())),
        ColumnValues::Bool(v) => out.extend(v.iter().map(|&b| u8::from(b))),
        ColumnValues::String(v) => {
            for s in v {
                out.extend_from_slice(&(s.len() as u32).to_le_bytes());
                out.extend_from_slice(s.as_bytes());
            }
        }
    }
}

/// CRC-32 of each column's serialized bitmap and value block.
pub fn column_checksums(table: &Table) -> Vec<u32> {
    let mut buf = Vec::new();
    table
        .columns()
        .iter()
        .map(|col| {
            buf.clear();
            encode_column(col, &mut buf);
            crc32fast::hash(&buf)
        })
        .collect()
}

/// Parses a complete snapshot. The year is not part of the byte layout; it
/// comes from the file name.
pub fn decode(bytes: &[u8], year: AcademicYearId) -> Result<Table> {
    if bytes.len() < MAGIC.len() + 4 + TRAILER_LEN {
        return Err(format_err("truncated header"));
    }
    if &bytes[..4] != MAGIC {
        return Err(format_err("bad magic"));
    }
    let version = u32::from_le_bytes(bytes[4..8].try_into().unwrap());
    if version != VERSION {
        return Err(format_err(format!("unsupported version {version}")));
    }
    let (payload, trailer) = bytes.split_at(bytes.len() - TRAILER_LEN);
    let stored = u32::from_le_bytes(trailer.try_into().unwrap());
    if crc32fast::hash(payload) != stored {
        return Err(format_err("checksum mismatch"));
    }

    let mut cur = Cursor::new(&payload[8..]);
    let (schema, rows) = read_schema_block(&mut cur)?;
    let mut columns = Vec::with_capacity(schema.len());
    for field in &schema.fields {
        columns.push(decode_column(&mut cur, field, rows)?);
    }
    if !cur.is_empty() {
        return Err(format_err("trailing bytes after last column"));
    }
    Table::new(year, rows, columns).map_err(|e| format_err(e.to_string()))
}

fn read_schema_block(cur: &mut impl ByteSource) -> Result<(TableSchema, usize)> {
    let ncols = cur.u32()? as usize;
    let mut fields: Vec<Field> = Vec::new();
    for _ in 0..ncols {
        let len = cur.u32()? as usize;
        let name = String::from_utf8(cur.take_vec(len)?)
            .map_err(|_| format_err("column name is not UTF-8"))?;
        let tag = cur.u8()?;
        let dtype = tag_type(tag).ok_or_else(|| format_err(format!("unknown type tag {tag}")))?;
        fields.push(Field::new(name, dtype));
    }
    let rows = usize::try_from(cur.u64()?).map_err(|_| format_err("row count overflow"))?;
    Ok((TableSchema::new(fields), rows))
}

fn decode_column(cur: &mut Cursor<'_>, field: &Field, rows: usize) -> Result<ColumnData> {
    let bitmap_len = rows.div_ceil(8);
    let nulls = NullBitmap::from_bytes(cur.take(bitmap_len)?.to_vec(), rows)
        .ok_or_else(|| format_err(format!("column {:?}: bad null bitmap", field.name)))?;
    let fixed = |width: usize| -> Result<usize> {
        rows.checked_mul(width)
            .ok_or_else(|| format_err("column size overflow"))
    };
    let values = match field.dtype {
        ColumnType::Int64 => ColumnValues::Int64(
            cur.take(fixed(8)?)?
                .chunks_exact(8)
                .map(|c| i64::from_le_bytes(c.try_into().unwrap()))
                .collect(),
        ),
        ColumnType::Float64 => ColumnValues::Float64(
            cur.take(fixed(8)?)?
                .chunks_exact(8)
                .map(|c| f64::from_bits(u64::from_le_bytes(c.try_into().unwrap())))
                .collect(),
        ),
        ColumnType::Bool => ColumnValues::Bool(
            cur.take(rows)?
                .iter()
                .map(|&b| match b {
                    0 => Ok(false),
                    1 => Ok(true),
                    _ => Err(format_err(format!("bool byte {b}"))),
                })
                .collect::<Result<_>>()?,
        ),
        ColumnType::String => {
            // Each string needs at least its 4-byte length prefix.
            if cur.remaining() / 4 < rows {
                return Err(format_err("truncated string column"));
            }
            let mut v = Vec::with_capacity(rows);
            for _ in 0..rows {
                let len = cur.u32()? as usize;
                let s = std::str::from_utf8(cur.take(len)?)
                    .map_err(|_| format_err("string value is not UTF-8"))?;
                v.push(s.to_owned());
            }
            ColumnValues::String(v)
        }
    };
    if !placeholders_are_canonical(&values, &nulls) {
        return Err(format_err(format!(
            "column {:?}: non-zero placeholder under null",
            field.name
        )));
    }
    ColumnData::new(field.name.clone(), values, nulls)
}

fn placeholders_are_canonical(values: &ColumnValues, nulls: &NullBitmap) -> bool {
    if nulls.null_count() == 0 {
        return true;
    }
    (0..nulls.len())
        .filter(|&row| nulls.is_null(row))
        .all(|row| match values {
            ColumnValues::Int64(v) => v[row] == 0,
            ColumnValues::Float64(v) => v[row].to_bits() == 0,
            ColumnValues::Bool(v) => !v[row],
            ColumnValues::String(v) => v[row].is_empty(),
        })
}

pub fn write_snapshot(table: &Table, path: &Path) -> Result<()> {
    let bytes = encode(table);
    let mut file = BufWriter::new(File::create(path)?);
    file.write_all(&bytes)?;
    file.into_inner().map_err(|e| e.into_error())?.sync_all()?;
    Ok(())
}

/// Writes to a sibling temporary file and renames it into place, so readers
/// of `path` never observe a partial snapshot.
pub fn write_snapshot_atomic(table: &Table, path: &Path) -> Result<()> {
    let tmp = path.with_extension(format!("{EXTENSION}.tmp"));
    write_snapshot(table, &tmp)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

/// Reads `<label>.pbed`, taking the year from the file stem.
pub fn read_snapshot(path: &Path) -> Result<Table> {
    let year = year_from_path(path)?;
    let bytes = fs::read(path)?;
    decode(&bytes, year)
}

pub fn year_from_path(path: &Path) -> Result<AcademicYearId> {
    let stem = path
        .file_stem()
        .and_then(|s| s.to_str())
        .ok_or_else(|| format_err(format!("{} has no usable file stem", path.display())))?;
    AcademicYearId::parse(stem)
}

/// Schema and row count from the front of a snapshot, without reading or
/// verifying the column data.
pub fn read_header(path: &Path) -> Result<(TableSchema, usize)> {
    let mut reader = BufReader::new(File::open(path)?);
    let mut head = [0u8; 8];
    reader
        .read_exact(&mut head)
        .map_err(|_| format_err("truncated header"))?;
    if &head[..4] != MAGIC {
        return Err(format_err("bad magic"));
    }
    let version = u32::from_le_bytes(head[4..].try_into().unwrap());
    if version != VERSION {
        return Err(format_err(format!("unsupported version {version}")));
    }
    read_schema_block(&mut ReadSource(reader))
}

trait ByteSource {
    fn take_vec(&mut self, n: usize) -> Result<Vec<u8>>;

    fn array<const N: usize>(&mut self) -> Result<[u8; N]> {
        Ok(self.take_vec(N)?.try_into().unwrap())
    }

    fn u8(&mut self) -> Result<u8> {
        Ok(self.array::<1>()?[0])
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.array()?))
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.array()?))
    }
}

struct Cursor<'a> {
    bytes: &'a [u8],
}

impl<'a> Cursor<'a> {
    fn new(bytes: &'a [u8]) -> Self {
        Self { bytes }
    }

    fn remaining(&self) -> usize {
        self.bytes.len()
    }

    fn is_empty(&self) -> bool {
        self.bytes.is_empty()
    }

    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        if n > self.bytes.len() {
            return Err(format_err("unexpected end of data"));
        }
        let (head, rest) = self.bytes.split_at(n);
        self.bytes = rest;
        Ok(head)
    }
}

impl ByteSource for Cursor<'_> {
    fn take_vec(&mut self, n: usize) -> Result<Vec<u8>> {
        self.take(n).map(<[u8]>::to_vec)
    }
}

struct ReadSource<R>(R);

impl<R: Read> ByteSource for ReadSource<R> {
    fn take_vec(&mut self, n: usize) -> Result<Vec<u8>> {
        let mut buf = Vec::new();
        let got = (&mut self.0).take(n as u64).read_to_end(&mut buf)?;
        if got != n {
            return Err(format_err("unexpected end of data"));
        }
        Ok(buf)
    }
}
