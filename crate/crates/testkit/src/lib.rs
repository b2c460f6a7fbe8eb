//! Test fixtures and reference oracles.
//!
//! Nothing here depends on `pabed-core`: the oracles re-scan CSV text with
//! their own splitter and plain sequential arithmetic so they stay
//! independent of the engine they check.

pub mod fixtures;
pub mod oracle;

/// `|a - b| <= tol * max(|a|, |b|)`; exact equality when both are zero.
pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    if a == b {
        return true;
    }
    (a - b).abs() <= tol * a.abs().max(b.abs())
}

/// `YYYY_YY` label for a start year.
pub fn year_label(start: u16) -> String {
    format!("{start:04}_{:02}", (start + 1) % 100)
}
