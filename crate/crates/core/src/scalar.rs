//! Numeric kinds used for probabilities.
//!
//! Two kinds exist: exact rationals for everything on the hidden-variable side,
//! and `f64` for the quantum predictions (cos²α is generically irrational).
//! Containers are generic over [`Scalar`] and hold a single kind.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Slack used by every real-mode invariant check.
pub const REAL_TOLERANCE: f64 = 1e-12;

pub trait Scalar: Num + Signed + Clone + PartialOrd + Debug {
    /// `self == 0`, up to [`REAL_TOLERANCE`] for reals.
    fn is_negligible(&self) -> bool;

    /// `self >= 0`, up to [`REAL_TOLERANCE`] for reals.
    fn is_nonnegative(&self) -> bool;

    fn to_f64(&self) -> f64;

    fn approx_eq(&self, other: &Self) -> bool {
        (self.clone() - other.clone()).is_negligible()
    }

    fn is_probability(&self) -> bool {
        self.is_nonnegative() && (Self::one() - self.clone()).is_nonnegative()
    }
}

impl Scalar for f64 {
    fn is_negligible(&self) -> bool {
        self.abs() <= REAL_TOLERANCE
    }

    fn is_nonnegative(&self) -> bool {
        *self >= -REAL_TOLERANCE
    }

    fn to_f64(&self) -> f64 {
        *self
    }
}

impl Scalar for Rational {
    fn is_negligible(&self) -> bool {
        self.is_zero()
    }

    fn is_nonnegative(&self) -> bool {
        !self.is_negative()
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

/// Shorthand for `numer/denom`.
///
/// Panics if `denom` is zero.
pub fn rational(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn rational_from_int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Parses the `p/q` literal format (or a bare integer `n`).
pub fn parse_rational(input: &str) -> Result<Rational> {
    let trimmed = input.trim();
    let parse_err = |reason: &str| Error::Parse {
        what: "rational",
        input: input.to_string(),
        reason: reason.to_string(),
    };
    let (numer, denom) = match trimmed.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (trimmed, "1"),
    };
    let numer: BigInt = numer
        .parse()
        .map_err(|_| parse_err("expected p/q with integer p and q"))?;
    let denom: BigInt = denom
        .parse()
        .map_err(|_| parse_err("expected p/q with integer p and q"))?;
    if denom.is_zero() {
        return Err(parse_err("zero denominator"));
    }
    Ok(Rational::new(numer, denom))
}

/// Formats as `p/q`, or `n` when the denominator is one.
pub fn format_rational(value: &Rational) -> String {
    value.to_string()
}

pub fn one() -> Rational {
    Rational::one()
}

pub fn zero() -> Rational {
    Rational::zero()
}

/// Serde adapters writing rationals as `"p/q"` strings.
pub mod serde_rational {
    use serde::{de, Deserialize, Deserializer, Serializer};

    use super::{format_rational, parse_rational, Rational};

    pub fn serialize<S: Serializer>(value: &Rational, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&format_rational(value))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(deserializer: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(deserializer)?;
        parse_rational(&text).map_err(de::Error::custom)
    }

    pub mod vec {
        use serde::ser::SerializeSeq;
        use serde::{de, Deserialize, Deserializer, Serializer};

        use super::super::{format_rational, parse_rational, Rational};

        pub fn serialize<S: Serializer>(
            values: &[Rational],
            serializer: S,
        ) -> Result<S::Ok, S::Error> {
            let mut seq = serializer.serialize_seq(Some(values.len()))?;
            for v in values {
                seq.serialize_element(&format_rational(v))?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(
            deserializer: D,
        ) -> Result<Vec<Rational>, D::Error> {
            let texts = Vec::<String>::deserialize(deserializer)?;
            texts
                .iter()
                .map(|t| parse_rational(t).map_err(de::Error::custom))
                .collect()
        }
    }
}
