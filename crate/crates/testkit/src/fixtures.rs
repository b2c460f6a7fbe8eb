//! Deterministic synthetic datasets shaped like College Scorecard yearly
//! files.

use std::fmt::Write as _;
use std::io::{self, Write};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const STATES: [&str; 6] = ["AL", "CA", "NY", "TX", "WA", "PR"];

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

fn null_token(rng: &mut StdRng) -> &'static str {
    if rng.gen_bool(0.5) {
        "NULL"
    } else {
        "PrivacySuppressed"
    }
}

/// One year of institutional data. `UGDS` is an integer enrollment column
/// with roughly `null_frac` of its cells set to `NULL` or
/// `PrivacySuppressed`; the `UGDS_*` share columns are fractions in [0, 1].
pub fn scorecard_year(seed: u64, rows: usize, null_frac: f64) -> String {
    let mut rng = rng(seed);
    let mut out = String::from(
        "UNITID,INSTNM,STABBR,PREDDEG,UGDS,UGDS_WHITE,UGDS_BLACK,UGDS_HISP,UGDS_WOMEN,TUITIONFEE_IN\n",
    );
    for i in 0..rows {
        let unitid = 100_000 + i;
        let name = if rng.gen_bool(0.2) {
            format!("\"College of Arts, Campus {i}\"")
        } else {
            format!("Institute {i}")
        };
        let state = STATES[rng.gen_range(0..STATES.len())];
        let preddeg = rng.gen_range(0..=4);
        let ugds = if rng.gen_bool(null_frac) {
            null_token(&mut rng).to_owned()
        } else {
            rng.gen_range(0..60_000).to_string()
        };
        let _ = write!(out, "{unitid},{name},{state},{preddeg},{ugds}");
        for _ in 0..4 {
            if rng.gen_bool(null_frac) {
                let _ = write!(out, ",{}", null_token(&mut rng));
            } else {
                let _ = write!(out, ",{:.4}", rng.gen_range(0.0..1.0));
            }
        }
        if rng.gen_bool(null_frac) {
            out.push_str(",NULL\n");
        } else {
            let _ = writeln!(out, ",{}", rng.gen_range(1_000..60_000));
        }
    }
    out
}

/// A wide table: `UNITID`, `INSTNM`, `UGDS`, then numeric filler columns
/// `C0003`, `C0004`, ... up to `cols` columns total.
pub fn wide_scorecard(seed: u64, rows: usize, cols: usize) -> String {
    assert!(cols >= 3);
    let mut rng = rng(seed);
    let mut out = String::from("UNITID,INSTNM,UGDS");
    for c in 3..cols {
        let _ = write!(out, ",C{c:04}");
    }
    out.push('\n');
    for i in 0..rows {
        let _ = write!(out, "{},\"Univ {i}, Main\",", 100_000 + i);
        if rng.gen_bool(0.1) {
            out.push_str(null_token(&mut rng));
        } else {
            let _ = write!(out, "{}", rng.gen_range(0..50_000));
        }
        for c in 3..cols {
            out.push(',');
            match rng.gen_range(0..10) {
                0 => out.push_str("NULL"),
                1 => out.push_str("PrivacySuppressed"),
                _ if c % 2 == 0 => {
                    let _ = write!(out, "{}", rng.gen_range(0..1000));
                }
                _ => {
                    let _ = write!(out, "{:.3}", rng.gen_range(0.0..1.0));
                }
            }
        }
        out.push('\n');
    }
    out
}

/// A random all-numeric fixture with a `UGDS` weight column and a `SHARE`
/// value column among `columns` columns.
#[derive(Debug, Clone)]
pub struct NumericFixture {
    pub text: String,
    pub rows: usize,
    pub columns: Vec<String>,
    pub null_frac: f64,
}

/// `rows` in 1..=10_000, 2..=20 columns. Column kinds alternate between
/// integers and floats with mixed magnitudes. `null_frac` is drawn from
/// [0, 1], with the extremes forced for `index % 10 == 0` (0%) and
/// `index % 10 == 9` (100%).
pub fn random_numeric_fixture(seed: u64, index: usize) -> NumericFixture {
    let mut rng = rng(seed ^ (index as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    let rows = rng.gen_range(1..=10_000);
    let ncols = rng.gen_range(2..=20);
    let null_frac = match index % 10 {
        0 => 0.0,
        9 => 1.0,
        _ => rng.gen_range(0.0..=1.0),
    };
    let mut columns = vec!["UGDS".to_owned(), "SHARE".to_owned()];
    columns.extend((2..ncols).map(|c| format!("M{c}")));
    let mut text = columns.join(",");
    text.push('\n');
    for _ in 0..rows {
        for (c, _) in columns.iter().enumerate() {
            if c > 0 {
                text.push(',');
            }
            if rng.gen_bool(null_frac) {
                text.push_str(null_token_any(&mut rng));
                continue;
            }
            match c % 4 {
                0 => {
                    let _ = write!(text, "{}", rng.gen_range(0..100_000i64));
                }
                1 => {
                    let _ = write!(text, "{}", rng.gen_range(0.0..1.0f64));
                }
                2 => {
                    let _ = write!(text, "{}", rng.gen_range(-1e6..1e6f64));
                }
                _ => {
                    let _ = write!(text, "{:e}", rng.gen_range(1e-3..1e9f64));
                }
            }
        }
        text.push('\n');
    }
    NumericFixture {
        text,
        rows,
        columns,
        null_frac,
    }
}

fn null_token_any(rng: &mut StdRng) -> &'static str {
    ["", "NULL", "null", "PrivacySuppressed"][rng.gen_range(0..4)]
}

/// Streams a `rows × cols` numeric CSV (`UGDS` first) to `out`.
pub fn write_large_numeric_csv<W: Write>(out: W, seed: u64, rows: usize, cols: usize) -> io::Result<()> {
    let mut out = io::BufWriter::with_capacity(1 << 20, out);
    let mut rng = rng(seed);
    let mut header = vec!["UGDS".to_owned()];
    header.extend((1..cols).map(|c| format!("V{c}")));
    writeln!(out, "{}", header.join(","))?;
    let mut line = String::with_capacity(cols * 12);
    for _ in 0..rows {
        line.clear();
        for c in 0..cols {
            if c > 0 {
                line.push(',');
            }
            if rng.gen_ratio(1, 20) {
                line.push_str("NULL");
            } else if c % 2 == 0 {
                let _ = write!(line, "{}", rng.gen_range(0..1_000_000u32));
            } else {
                let _ = write!(line, "{:.3}", rng.gen_range(0.0..10_000.0f64));
            }
        }
        line.push('\n');
        out.write_all(line.as_bytes())?;
    }
    out.flush()
}

/// Type-inference cases: column cells and the expected type name.
pub fn type_matrix() -> Vec<(&'static str, Vec<&'static str>, &'static str)> {
    vec![
        ("ints", vec!["1", "-2", "300", "0"], "INT64"),
        ("ints_with_nulls", vec!["1", "NULL", "", "7"], "INT64"),
        ("int_to_float", vec!["1", "2.5", "3"], "FLOAT64"),
        ("floats", vec!["0.25", "1e3", "-7.5"], "FLOAT64"),
        ("float_with_tokens", vec!["2.5", "PrivacySuppressed", "null"], "FLOAT64"),
        ("int_to_string", vec!["1", "abc"], "STRING"),
        ("float_to_string", vec!["1.5", "n/a"], "STRING"),
        ("bools", vec!["true", "false", "TRUE", "False"], "BOOL"),
        ("bools_with_nulls", vec!["true", "NULL", "false"], "BOOL"),
        ("bool_to_string", vec!["true", "maybe"], "STRING"),
        ("bool_and_int", vec!["true", "1"], "STRING"),
        ("bool_and_float", vec!["false", "0.5"], "STRING"),
        ("zero_one_flags", vec!["0", "1", "1", "0"], "INT64"),
        ("all_null", vec!["NULL", "PrivacySuppressed", ""], "STRING"),
        ("names", vec!["Alabama A & M University", "NULL"], "STRING"),
    ]
}

/// Rows of `cells` shuffled deterministically.
pub fn shuffled<T: Clone>(items: &[T], seed: u64) -> Vec<T> {
    use rand::seq::SliceRandom;
    let mut v = items.to_vec();
    v.shuffle(&mut rng(seed));
    v
}
