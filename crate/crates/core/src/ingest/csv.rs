//! RFC 4180 reader producing a compact, row-major cell buffer.

use std::collections::HashSet;
use std::io::Read;

use crate::error::{Error, Result};
use crate::ingest::{IngestOptions, Mode};

const BOM: &[u8] = b"\xEF\xBB\xBF";

/// Parsed CSV text: a de-duplicated header plus string cells.
///
/// Cells live in one contiguous buffer addressed by end offsets, so a
/// multi-million-cell file costs one allocation per column of offsets rather
/// than one `String` per cell. Cells added to pad short rows in lenient mode
/// read back as `None`.
#[derive(Debug, Clone, Default)]
pub struct RawCsv {
    header: Vec<String>,
    buf: String,
    ends: Vec<usize>,
    padded: Vec<usize>,
}

impl RawCsv {
    /// Builds a `RawCsv` from already-split rows. Every row must have exactly
    /// `header.len()` cells.
    pub fn from_rows<S: AsRef<str>>(header: &[S], rows: &[Vec<S>]) -> Result<Self> {
        let mut raw = RawCsv {
            header: dedup_header(header.iter().map(|h| h.as_ref().to_owned()).collect()),
            ..Default::default()
        };
        for (i, row) in rows.iter().enumerate() {
            if row.len() != raw.header.len() {
                return Err(Error::CsvSyntax {
                    line: i as u64 + 2,
                    message: format!("expected {} fields, found {}", raw.header.len(), row.len()),
                });
            }
            for cell in row {
                raw.buf.push_str(cell.as_ref());
                raw.ends.push(raw.buf.len());
            }
        }
        Ok(raw)
    }

    pub fn header(&self) -> &[String] {
        &self.header
    }

    pub fn column_count(&self) -> usize {
        self.header.len()
    }

    pub fn row_count(&self) -> usize {
        match self.header.len() {
            0 => 0,
            w => self.ends.len() / w,
        }
    }

    /// Cell text, or `None` for a cell that was missing from a short row.
    pub fn cell(&self, row: usize, col: usize) -> Option<&str> {
        let idx = row * self.header.len() + col;
        if !self.padded.is_empty() && self.padded.binary_search(&idx).is_ok() {
            return None;
        }
        let start = if idx == 0 { 0 } else { self.ends[idx - 1] };
        Some(&self.buf[start..self.ends[idx]])
    }

    pub fn column(&self, col: usize) -> impl Iterator<Item = Option<&str>> + '_ {
        (0..self.row_count()).map(move |row| self.cell(row, col))
    }

    pub fn row(&self, row: usize) -> impl Iterator<Item = Option<&str>> + '_ {
        (0..self.header.len()).map(move |col| self.cell(row, col))
    }
}

/// Reads an entire CSV stream. The first record is the header.
pub fn read_csv<R: Read>(mut source: R, options: &IngestOptions) -> Result<RawCsv> {
    let mut bytes = Vec::new();
    source.read_to_end(&mut bytes)?;
    parse_csv(&bytes, options)
}

pub fn parse_csv(bytes: &[u8], options: &IngestOptions) -> Result<RawCsv> {
    let delimiter = options.delimiter;
    if !delimiter.is_ascii() || matches!(delimiter, b'"' | b'\r' | b'\n') {
        return Err(Error::CsvSyntax {
            line: 0,
            message: format!("unusable delimiter byte 0x{delimiter:02x}"),
        });
    }
    let bytes = bytes.strip_prefix(BOM).unwrap_or(bytes);
    let text = std::str::from_utf8(bytes).map_err(|e| Error::CsvSyntax {
        line: 1 + bytes[..e.valid_up_to()].iter().filter(|&&b| b == b'\n').count() as u64,
        message: "input is not valid UTF-8".into(),
    })?;

    let mut parser = Parser {
        text,
        bytes: text.as_bytes(),
        pos: 0,
        line: 1,
        delimiter,
    };
    let mut raw = RawCsv::default();

    parser.skip_blank_lines();
    if parser.at_end() {
        return Err(Error::EmptyInput);
    }
    parser.read_record(&mut raw.buf, &mut raw.ends)?;
    let mut header = Vec::with_capacity(raw.ends.len());
    let mut start = 0;
    for &end in &raw.ends {
        header.push(raw.buf[start..end].to_owned());
        start = end;
    }
    raw.header = dedup_header(header);
    raw.buf.clear();
    raw.ends.clear();

    let width = raw.header.len();
    loop {
        parser.skip_blank_lines();
        if parser.at_end() {
            break;
        }
        let line = parser.line;
        let before = raw.ends.len();
        parser.read_record(&mut raw.buf, &mut raw.ends)?;
        let found = raw.ends.len() - before;
        if found > width || (found < width && options.mode == Mode::Strict) {
            return Err(Error::CsvSyntax {
                line,
                message: format!("expected {width} fields, found {found}"),
            });
        }
        for _ in found..width {
            raw.padded.push(raw.ends.len());
            raw.ends.push(raw.buf.len());
        }
    }
    Ok(raw)
}

struct Parser<'a> {
    text: &'a str,
    bytes: &'a [u8],
    pos: usize,
    line: u64,
    delimiter: u8,
}

impl Parser<'_> {
    fn at_end(&self) -> bool {
        self.pos >= self.bytes.len()
    }

    fn skip_blank_lines(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            match b {
                b'\n' => self.line += 1,
                b'\r' => {}
                _ => break,
            }
            self.pos += 1;
        }
    }

    /// Reads one record, appending each field to `buf` and its end offset to
    /// `ends`. Leaves `pos` after the record terminator.
    fn read_record(&mut self, buf: &mut String, ends: &mut Vec<usize>) -> Result<()> {
        loop {
            if self.bytes.get(self.pos) == Some(&b'"') {
                self.read_quoted(buf)?;
            } else {
                let start = self.pos;
                while let Some(&b) = self.bytes.get(self.pos) {
                    if b == self.delimiter || b == b'\n' || b == b'\r' {
                        break;
                    }
                    self.pos += 1;
                }
                buf.push_str(&self.text[start..self.pos]);
            }
            ends.push(buf.len());

            match self.bytes.get(self.pos) {
                Some(&b) if b == self.delimiter => self.pos += 1,
                Some(b'\r') => {
                    self.pos += 1;
                    if self.bytes.get(self.pos) == Some(&b'\n') {
                        self.pos += 1;
                    }
                    self.line += 1;
                    return Ok(());
                }
                Some(b'\n') => {
                    self.pos += 1;
                    self.line += 1;
                    return Ok(());
                }
                None => return Ok(()),
                Some(_) => {
                    return Err(Error::CsvSyntax {
                        line: self.line,
                        message: "unexpected character after closing quote".into(),
                    })
                }
            }
        }
    }

    fn read_quoted(&mut self, buf: &mut String) -> Result<()> {
        let opened_on = self.line;
        self.pos += 1;
        loop {
            let rest = &self.bytes[self.pos..];
            let Some(q) = rest.iter().position(|&b| b == b'"') else {
                return Err(Error::CsvSyntax {
                    line: opened_on,
                    message: "unclosed quoted field".into(),
                });
            };
            self.line += rest[..q].iter().filter(|&&b| b == b'\n').count() as u64;
            buf.push_str(&self.text[self.pos..self.pos + q]);
            self.pos += q + 1;
            if self.bytes.get(self.pos) == Some(&b'"') {
                buf.push('"');
                self.pos += 1;
            } else {
                return Ok(());
            }
        }
    }
}

/// Makes header names non-empty and unique. Empty names become
/// `column_<n>` (1-based position); repeats get `_2`, `_3`, ... suffixes,
/// skipping any suffix already taken by another column.
pub fn dedup_header(names: Vec<String>) -> Vec<String> {
    let named: Vec<String> = names
        .into_iter()
        .enumerate()
        .map(|(i, n)| if n.is_empty() { format!("column_{}", i + 1) } else { n })
        .collect();
    let mut taken: HashSet<String> = HashSet::with_capacity(named.len());
    let mut out = Vec::with_capacity(named.len());
    for name in named {
        if taken.insert(name.clone()) {
            out.push(name);
            continue;
        }
        let mut n = 2;
        let unique = loop {
            let candidate = format!("{name}_{n}");
            if !taken.contains(&candidate) {
                break candidate;
            }
            n += 1;
        };
        taken.insert(unique.clone());
        out.push(unique);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lenient() -> IngestOptions {
        IngestOptions::default()
    }

    fn strict() -> IngestOptions {
        IngestOptions {
            mode: Mode::Strict,
            ..Default::default()
        }
    }

    fn rows(raw: &RawCsv) -> Vec<Vec<Option<&str>>> {
        (0..raw.row_count()).map(|r| raw.row(r).collect()).collect()
    }

    #[test]
    fn quoted_field_with_delimiter() {
        let raw = parse_csv(b"a,b\n1,\"x,y\"\n", &lenient()).unwrap();
        assert_eq!(raw.header(), ["a", "b"]);
        assert_eq!(rows(&raw), vec![vec![Some("1"), Some("x,y")]]);
    }

    #[test]
    fn embedded_newline_and_escaped_quote() {
        let raw = parse_csv(b"a,b\r\n\"line1\nline2\",\"say \"\"hi\"\"\"\r\n", &lenient()).unwrap();
        assert_eq!(rows(&raw), vec![vec![Some("line1\nline2"), Some("say \"hi\"")]]);
    }

    #[test]
    fn duplicate_headers_get_suffixes() {
        let raw = parse_csv(b"a,a\n1,2\n", &lenient()).unwrap();
        assert_eq!(raw.header(), ["a", "a_2"]);
        assert_eq!(dedup_header(vec!["a".into(); 3]), ["a", "a_2", "a_3"]);
        assert_eq!(
            dedup_header(vec!["a".into(), "a".into(), "a_2".into()]),
            ["a", "a_2", "a_2_2"]
        );
        assert_eq!(dedup_header(vec!["".into(), "x".into()]), ["column_1", "x"]);
    }

    #[test]
    fn empty_input_is_rejected() {
        assert!(matches!(parse_csv(b"", &lenient()), Err(Error::EmptyInput)));
        assert!(matches!(parse_csv(b"\n\r\n", &lenient()), Err(Error::EmptyInput)));
        assert!(matches!(parse_csv(BOM, &lenient()), Err(Error::EmptyInput)));
    }

    #[test]
    fn unclosed_quote_is_syntax_error() {
        let err = parse_csv(b"a,b\n1,\"oops\n2,3\n", &lenient()).unwrap_err();
        assert!(matches!(err, Error::CsvSyntax { line: 2, .. }), "{err}");
    }

    #[test]
    fn junk_after_closing_quote() {
        assert!(matches!(
            parse_csv(b"a\n\"x\"y\n", &lenient()),
            Err(Error::CsvSyntax { .. })
        ));
    }

    #[test]
    fn short_rows_strict_vs_lenient() {
        let input = b"a,b,c\n1,2\n";
        assert!(matches!(
            parse_csv(input, &strict()),
            Err(Error::CsvSyntax { line: 2, .. })
        ));
        let raw = parse_csv(input, &lenient()).unwrap();
        assert_eq!(rows(&raw), vec![vec![Some("1"), Some("2"), None]]);
    }

    #[test]
    fn long_rows_rejected_in_both_modes() {
        for opts in [lenient(), strict()] {
            assert!(parse_csv(b"a\n1,2\n", &opts).is_err());
        }
    }

    #[test]
    fn bom_stripped_and_trailing_newline_optional() {
        let raw = parse_csv(b"\xEF\xBB\xBFid,name\n1,x", &lenient()).unwrap();
        assert_eq!(raw.header(), ["id", "name"]);
        assert_eq!(raw.row_count(), 1);
    }

    #[test]
    fn blank_lines_skipped_and_empty_fields_kept() {
        let raw = parse_csv(b"a,b\n\n1,\n,\n", &lenient()).unwrap();
        assert_eq!(
            rows(&raw),
            vec![vec![Some("1"), Some("")], vec![Some(""), Some("")]]
        );
    }

    #[test]
    fn custom_delimiter() {
        let opts = IngestOptions {
            delimiter: b';',
            ..Default::default()
        };
        let raw = parse_csv("x;y\n1,5;é\n".as_bytes(), &opts).unwrap();
        assert_eq!(rows(&raw), vec![vec![Some("1,5"), Some("é")]]);
    }

    #[test]
    fn invalid_utf8_rejected() {
        assert!(matches!(
            parse_csv(b"a\n\xff\n", &lenient()),
            Err(Error::CsvSyntax { line: 2, .. })
        ));
    }

    #[test]
    fn header_only() {
        let raw = parse_csv(b"a,b\n", &lenient()).unwrap();
        assert_eq!(raw.row_count(), 0);
        assert_eq!(raw.column_count(), 2);
    }
}
