//! Exact decimal values with a canonical text form.
//!
//! Graph literals and confidence thresholds are decimal strings, not binary
//! floats, so serialized output is byte-stable. A value is stored in its
//! canonical form: optional leading `-`, an integer part without leading
//! zeros, and a fractional part without trailing zeros (`"0.80"` parses to
//! `"0.8"`, `"1.0"` to `"1"`, `"-0"` to `"0"`). Ordering and equality are
//! numeric.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecimalError {
    #[error("invalid decimal literal {0:?}")]
    Invalid(String),
}

/// An exact decimal in canonical text form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Decimal {
    text: String,
}

impl Decimal {
    pub fn parse(s: &str) -> Result<Decimal, DecimalError> {
        let err = || DecimalError::Invalid(s.to_owned());
        let mut rest = s;
        let mut negative = false;
        match rest.as_bytes().first() {
            Some(b'-') => {
                negative = true;
                rest = &rest[1..];
            }
            Some(b'+') => rest = &rest[1..],
            _ => {}
        }
        let (int_part, frac_part) = match rest.split_once('.') {
            Some((i, f)) => (i, f),
            None => (rest, ""),
        };
        if int_part.is_empty() || !int_part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err());
        }
        if rest.contains('.') && (frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit())) {
            return Err(err());
        }
        let int_trimmed = int_part.trim_start_matches('0');
        let int_norm = if int_trimmed.is_empty() { "0" } else { int_trimmed };
        let frac_norm = frac_part.trim_end_matches('0');
        let is_zero = int_norm == "0" && frac_norm.is_empty();
        let mut text = String::new();
        if negative && !is_zero {
            text.push('-');
        }
        text.push_str(int_norm);
        if !frac_norm.is_empty() {
            text.push('.');
            text.push_str(frac_norm);
        }
        Ok(Decimal { text })
    }

    pub fn zero() -> Decimal {
        Decimal { text: "0".to_owned() }
    }

    pub fn one() -> Decimal {
        Decimal { text: "1".to_owned() }
    }

    pub fn as_str(&self) -> &str {
        &self.text
    }

    pub fn is_negative(&self) -> bool {
        self.text.starts_with('-')
    }

    /// True when the value lies in the closed interval [0, 1].
    pub fn in_unit_range(&self) -> bool {
        !self.is_negative() && *self <= Decimal::one()
    }

    fn parts(&self) -> (bool, &str, &str) {
        let (neg, rest) = match self.text.strip_prefix('-') {
            Some(r) => (true, r),
            None => (false, self.text.as_str()),
        };
        match rest.split_once('.') {
            Some((i, f)) => (neg, i, f),
            None => (neg, rest, ""),
        }
    }

    pub fn to_rational(&self) -> BigRational {
        let (neg, int_part, frac_part) = self.parts();
        let digits: String = format!("{int_part}{frac_part}");
        let mut numer: BigInt = digits.parse().expect("canonical digits");
        if neg {
            numer = -numer;
        }
        let denom = BigInt::from(10u32).pow(frac_part.len() as u32);
        BigRational::new(numer, denom)
    }

    /// Renders a rational as a decimal, rounding half-to-even at
    /// `max_frac_digits` fractional digits, then canonicalizing.
    pub fn from_rational_rounded(value: &BigRational, max_frac_digits: u32) -> Decimal {
        let negative = value.is_negative();
        let abs = value.abs();
        let scale = BigInt::from(10u32).pow(max_frac_digits);
        let scaled_num = abs.numer() * &scale;
        let denom = abs.denom().clone();
        let mut quot = &scaled_num / &denom;
        let rem = &scaled_num % &denom;
        let twice = &rem * BigInt::from(2u32);
        match twice.cmp(&denom) {
            Ordering::Greater => quot += 1,
            Ordering::Equal => {
                if &quot % BigInt::from(2u32) != BigInt::zero() {
                    quot += 1;
                }
            }
            Ordering::Less => {}
        }
        let digits = quot.to_string();
        let width = max_frac_digits as usize;
        let padded = if digits.len() <= width {
            format!("{}{}", "0".repeat(width + 1 - digits.len()), digits)
        } else {
            digits
        };
        let split = padded.len() - width;
        let (int_part, frac_part) = padded.split_at(split);
        let raw = if negative {
            format!("-{int_part}.{frac_part}")
        } else {
            format!("{int_part}.{frac_part}")
        };
        Decimal::parse(&raw).expect("rendered decimal is valid")
    }

    pub fn to_f64(&self) -> f64 {
        self.text.parse().expect("canonical decimal parses as f64")
    }
}

impl PartialOrd for Decimal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Decimal {
    fn cmp(&self, other: &Self) -> Ordering {
        let (an, ai, af) = self.parts();
        let (bn, bi, bf) = other.parts();
        match (an, bn) {
            (true, false) => return Ordering::Less,
            (false, true) => return Ordering::Greater,
            _ => {}
        }
        let magnitude = ai
            .len()
            .cmp(&bi.len())
            .then_with(|| ai.cmp(bi))
            // No trailing zeros, so a longer fraction with an equal prefix is larger.
            .then_with(|| af.cmp(bf));
        if an {
            magnitude.reverse()
        } else {
            magnitude
        }
    }
}

impl fmt::Display for Decimal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

impl FromStr for Decimal {
    type Err = DecimalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Decimal::parse(s)
    }
}

impl TryFrom<String> for Decimal {
    type Error = DecimalError;

    fn try_from(value: String) -> Result<Self, Self::Error> {
        Decimal::parse(&value)
    }
}

impl From<Decimal> for String {
    fn from(value: Decimal) -> String {
        value.text
    }
}
