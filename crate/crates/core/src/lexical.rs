//! Canonical lexical forms for the XSD datatypes the converter emits.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use chrono::{DateTime, NaiveDate, NaiveDateTime, SecondsFormat, Utc};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LexicalError {
    #[error("not a decimal: {0:?}")]
    Decimal(String),
    #[error("not a date-time: {0:?}")]
    DateTime(String),
    #[error("not a date: {0:?}")]
    Date(String),
}

/// An `xsd:decimal` kept as its canonical lexical form.
///
/// Canonical means: optional `-`, no leading zeros in the integer part,
/// no trailing zeros in the fraction, at least one digit on both sides of
/// the point (`1.0`, `0.9375`, `-2.35`). Negative zero is `0.0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Decimal(String);

impl Decimal {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn to_f64(&self) -> f64 {
        self.0.parse().expect("canonical decimal parses as f64")
    }

    /// Compares numeric values exactly, without going through `f64`.
    pub fn numeric_cmp(&self, other: &Decimal) -> Ordering {
        let (an, ai, af) = self.parts();
        let (bn, bi, bf) = other.parts();
        let magnitude = ai.len().cmp(&bi.len()).then_with(|| ai.cmp(bi)).then_with(|| af.cmp(bf));
        match (an, bn) {
            (false, false) => magnitude,
            (true, true) => magnitude.reverse(),
            (true, false) => Ordering::Less,
            (false, true) => Ordering::Greater,
        }
    }

    fn parts(&self) -> (bool, &str, &str) {
        let (neg, body) = match self.0.strip_prefix('-') {
            Some(b) => (true, b),
            None => (false, self.0.as_str()),
        };
        let (i, f) = body.split_once('.').expect("canonical decimal has a point");
        (neg, i, f)
    }

    /// True when `lo <= self <= hi`.
    pub fn within(&self, lo: &Decimal, hi: &Decimal) -> bool {
        self.numeric_cmp(lo) != Ordering::Less && self.numeric_cmp(hi) != Ordering::Greater
    }

    pub fn from_int(v: i64) -> Decimal {
        Decimal(format!("{v}.0"))
    }

    /// True for values in `[0, 1]`.
    pub fn is_probability(&self) -> bool {
        !self.0.starts_with('-') && (self.0.starts_with("0.") || self.0 == "1.0")
    }

    /// Renders a finite float with at most `places` fraction digits.
    pub fn from_f64(v: f64, places: usize) -> Decimal {
        format!("{v:.places$}").parse().expect("formatted float is a decimal")
    }
}

impl FromStr for Decimal {
    type Err = LexicalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || LexicalError::Decimal(s.to_owned());
        let t = s.trim();
        let (negative, body) = match t.as_bytes().first() {
            Some(b'-') => (true, &t[1..]),
            Some(b'+') => (false, &t[1..]),
            _ => (false, t),
        };
        let (int, frac) = match body.split_once('.') {
            Some((i, f)) => (i, f),
            None => (body, ""),
        };
        if int.is_empty() && frac.is_empty() {
            return Err(bad());
        }
        if !int.bytes().all(|b| b.is_ascii_digit()) || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let int = int.trim_start_matches('0');
        let frac = frac.trim_end_matches('0');
        let int = if int.is_empty() { "0" } else { int };
        let frac = if frac.is_empty() { "0" } else { frac };
        let zero = int == "0" && frac == "0";
        let sign = if negative && !zero { "-" } else { "" };
        Ok(Decimal(format!("{sign}{int}.{frac}")))
    }
}

impl TryFrom<String> for Decimal {
    type Error = LexicalError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<Decimal> for String {
    fn from(d: Decimal) -> String {
        d.0
    }
}

impl fmt::Display for Decimal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A UTC timestamp rendered as canonical `xsd:dateTime` (`T` separator,
/// `Z` suffix, fractional seconds only when non-zero).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Timestamp(pub DateTime<Utc>);

impl FromStr for Timestamp {
    type Err = LexicalError;

    /// Accepts RFC 3339 with an offset, or a naive date-time which is taken
    /// to be UTC.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if let Ok(dt) = DateTime::parse_from_rfc3339(t) {
            return Ok(Timestamp(dt.with_timezone(&Utc)));
        }
        for fmt in ["%Y-%m-%dT%H:%M:%S%.f", "%Y-%m-%d %H:%M:%S%.f"] {
            if let Ok(naive) = NaiveDateTime::parse_from_str(t, fmt) {
                return Ok(Timestamp(naive.and_utc()));
            }
        }
        Err(LexicalError::DateTime(s.to_owned()))
    }
}

impl fmt::Display for Timestamp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.to_rfc3339_opts(SecondsFormat::AutoSi, true))
    }
}

/// An `xsd:date` (`YYYY-MM-DD`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Date(pub NaiveDate);

impl FromStr for Date {
    type Err = LexicalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        NaiveDate::parse_from_str(s.trim(), "%Y-%m-%d")
            .map(Date)
            .map_err(|_| LexicalError::Date(s.to_owned()))
    }
}

impl fmt::Display for Date {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.format("%Y-%m-%d"))
    }
}
