//! Academic year keys of the form `YYYY_YY`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub const MIN_START_YEAR: u16 = 1900;
pub const MAX_START_YEAR: u16 = 2099;

/// A validated academic year such as `1996_97`.
///
/// The two-digit suffix is always `(start + 1) mod 100`, so `1999_00` is the
/// year following `1998_99`. Ordering follows the start year.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AcademicYearId {
    start_year: u16,
}

impl AcademicYearId {
    pub fn from_start_year(start_year: u16) -> Result<Self> {
        if !(MIN_START_YEAR..=MAX_START_YEAR).contains(&start_year) {
            return Err(Error::MalformedYear {
                label: start_year.to_string(),
                reason: "start year outside 1900..=2099",
            });
        }
        Ok(Self { start_year })
    }

    pub fn parse(label: &str) -> Result<Self> {
        let malformed = |reason| Error::MalformedYear {
            label: label.to_owned(),
            reason,
        };
        let bytes = label.as_bytes();
        if bytes.len() != 7 {
            return Err(malformed("wrong length"));
        }
        if bytes[4] != b'_' {
            return Err(malformed("separator must be an underscore"));
        }
        if !bytes[..4].iter().chain(&bytes[5..]).all(u8::is_ascii_digit) {
            return Err(malformed("non-digit characters"));
        }
        let digits = |s: &[u8]| s.iter().fold(0u16, |acc, d| acc * 10 + u16::from(d - b'0'));
        let start_year = digits(&bytes[..4]);
        let suffix = digits(&bytes[5..]);
        if !(MIN_START_YEAR..=MAX_START_YEAR).contains(&start_year) {
            return Err(malformed("start year outside 1900..=2099"));
        }
        if suffix != (start_year + 1) % 100 {
            return Err(malformed("suffix must be the year after the start year"));
        }
        Ok(Self { start_year })
    }

    pub fn start_year(self) -> u16 {
        self.start_year
    }

    pub fn label(self) -> String {
        self.to_string()
    }
}

impl fmt::Display for AcademicYearId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:04}_{:02}", self.start_year, (self.start_year + 1) % 100)
    }
}

impl FromStr for AcademicYearId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

impl Serialize for AcademicYearId {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for AcademicYearId {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let label = String::deserialize(deserializer)?;
        Self::parse(&label).map_err(serde::de::Error::custom)
    }
}
