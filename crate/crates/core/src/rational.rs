//! Exact rational arithmetic.
//!
//! Every Bernoulli-type value in this crate is a [`Rat`]: an
//! arbitrary-precision rational kept in lowest terms with a positive
//! denominator. Nothing in the crate ever rounds.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

/// The universal value type: an arbitrary-precision rational.
///
/// `num_rational::BigRational` reduces on construction and keeps the
/// denominator positive, which is exactly the invariant we need.
pub type Rat = BigRational;

/// Builds `num / den` as an exact rational.
///
/// Panics if `den` is zero.
pub fn rat<N: Into<BigInt>, D: Into<BigInt>>(num: N, den: D) -> Rat {
    Rat::new(num.into(), den.into())
}

/// Builds the integer `n` as an exact rational.
pub fn rat_int<N: Into<BigInt>>(n: N) -> Rat {
    Rat::from_integer(n.into())
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("invalid rational literal {literal:?}: expected \"num\" or \"num/den\"")]
pub struct ParseRatError {
    pub literal: String,
}

/// Parses a rational from the `"num/den"` (or plain `"num"`) text form
/// used throughout the CLI and report formats.
pub fn parse_rat(s: &str) -> Result<Rat, ParseRatError> {
    let trimmed = s.trim();
    if let Some((num, den)) = trimmed.split_once('/') {
        let num: BigInt = num.trim().parse().map_err(|_| ParseRatError {
            literal: s.to_owned(),
        })?;
        let den: BigInt = den.trim().parse().map_err(|_| ParseRatError {
            literal: s.to_owned(),
        })?;
        if den.is_zero() {
            return Err(ParseRatError {
                literal: s.to_owned(),
            });
        }
        Ok(Rat::new(num, den))
    } else {
        let num: BigInt = trimmed.parse().map_err(|_| ParseRatError {
            literal: s.to_owned(),
        })?;
        Ok(Rat::from_integer(num))
    }
}

/// Formats a rational as `"num/den"`, or `"num"` when the denominator is 1.
pub fn format_rat(x: &Rat) -> String {
    x.to_string()
}

/// Serde adapter serializing a [`Rat`] as a `"num/den"` string.
///
/// Rationals are never emitted as floats; the string form is lossless.
pub mod rat_serde {
    use super::{format_rat, parse_rat, Rat};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Rat, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&format_rat(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(deserializer: D) -> Result<Rat, D::Error> {
        let s = String::deserialize(deserializer)?;
        parse_rat(&s).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for `Vec<Rat>` fields (each entry a `"num/den"` string).
pub mod rat_vec_serde {
    use super::{format_rat, parse_rat, Rat};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(xs: &[Rat], serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(xs.iter().map(format_rat))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(deserializer: D) -> Result<Vec<Rat>, D::Error> {
        let strings = Vec::<String>::deserialize(deserializer)?;
        strings
            .iter()
            .map(|s| parse_rat(s).map_err(serde::de::Error::custom))
            .collect()
    }
}
