//! Naive row-scan oracles over CSV text.

pub const NULL_TOKENS: [&str; 4] = ["", "NULL", "null", "PrivacySuppressed"];

pub fn is_null(cell: &str) -> bool {
    NULL_TOKENS.contains(&cell)
}

/// Splits one line on commas, honoring double-quoted fields without
/// embedded newlines.
pub fn split_line(line: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut quoted = false;
    let mut chars = line.chars().peekable();
    while let Some(c) = chars.next() {
        match (c, quoted) {
            ('"', true) if chars.peek() == Some(&'"') => {
                cur.push('"');
                chars.next();
            }
            ('"', _) => quoted = !quoted,
            (',', false) => out.push(std::mem::take(&mut cur)),
            _ => cur.push(c),
        }
    }
    out.push(cur);
    out
}

/// Header plus data records of a fixture with one record per line.
pub fn split_records(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = text.lines().filter(|l| !l.is_empty());
    let header = lines.next().map(split_line).unwrap_or_default();
    (header, lines.map(split_line).collect())
}

pub fn column_index(header: &[String], name: &str) -> usize {
    header
        .iter()
        .position(|h| h == name)
        .unwrap_or_else(|| panic!("fixture has no column {name}"))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SumOracle {
    pub total: f64,
    pub non_null: u64,
    pub null: u64,
}

/// Sequential left-to-right sum of the non-null cells of `column`.
pub fn column_sum(text: &str, column: &str) -> SumOracle {
    let (header, rows) = split_records(text);
    let idx = column_index(&header, column);
    let mut out = SumOracle {
        total: 0.0,
        non_null: 0,
        null: 0,
    };
    for row in &rows {
        let cell = row.get(idx).map(String::as_str).unwrap_or("");
        if is_null(cell) {
            out.null += 1;
        } else {
            out.total += cell.parse::<f64>().expect("numeric fixture cell");
            out.non_null += 1;
        }
    }
    out
}

/// Σ(w·v)/Σw over rows where both cells are non-null.
pub fn weighted_mean(text: &str, weight: &str, value: &str) -> Option<f64> {
    let (header, rows) = split_records(text);
    let (wi, vi) = (column_index(&header, weight), column_index(&header, value));
    let (mut num, mut den, mut n) = (0.0, 0.0, 0);
    for row in &rows {
        let (w, v) = (row[wi].as_str(), row[vi].as_str());
        if is_null(w) || is_null(v) {
            continue;
        }
        let (w, v): (f64, f64) = (w.parse().unwrap(), v.parse().unwrap());
        num += w * v;
        den += w;
        n += 1;
    }
    (n > 0 && den != 0.0).then(|| num / den)
}

/// Streaming count of data rows and null-token cells.
pub fn count_rows_and_nulls(text: &str) -> (u64, u64) {
    let mut lines = text.lines().filter(|l| !l.is_empty());
    lines.next();
    let mut rows = 0;
    let mut nulls = 0;
    for line in lines {
        rows += 1;
        nulls += split_line(line).iter().filter(|c| is_null(c)).count() as u64;
    }
    (rows, nulls)
}

/// Distinct non-numeric cell values in columns where the majority of
/// non-empty cells parse as numbers.
pub fn non_numeric_tokens(text: &str) -> std::collections::BTreeSet<String> {
    let (header, rows) = split_records(text);
    let mut tokens = std::collections::BTreeSet::new();
    for col in 0..header.len() {
        let cells: Vec<&str> = rows.iter().map(|r| r[col].as_str()).collect();
        let numeric = cells.iter().filter(|c| c.parse::<f64>().is_ok()).count();
        if numeric * 2 <= cells.len() {
            continue;
        }
        for c in cells {
            if c.parse::<f64>().is_err() {
                tokens.insert(c.to_owned());
            }
        }
    }
    tokens
}
