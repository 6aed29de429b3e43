//! p-adic valuations of exact rationals.
//!
//! `ord_p(x)` is the exponent of p in x, with `ord_p(0)` the distinguished
//! infinite value. Congruence of rationals mod p^N is defined as
//! `ord_p(a - b) >= N`, the convention under which scaled differences of
//! Bernoulli-type numbers land in the p-integral rationals.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::rational::Rat;

/// A p-adic valuation: a finite integer or infinity (the valuation of 0).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn is_infinite(self) -> bool {
        matches!(self, Valuation::Infinite)
    }

    /// True iff the valuation is at least `n`; infinity dominates every bound.
    pub fn at_least(self, n: i64) -> bool {
        match self {
            Valuation::Finite(v) => v >= n,
            Valuation::Infinite => true,
        }
    }

    /// Valuation of a product: finite values add, infinity absorbs.
    pub fn plus(self, other: Valuation) -> Valuation {
        match (self, other) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinite,
        }
    }

    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Valuation::Infinite, Valuation::Infinite) => Ordering::Equal,
            (Valuation::Infinite, _) => Ordering::Greater,
            (_, Valuation::Infinite) => Ordering::Less,
            (Valuation::Finite(a), Valuation::Finite(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for Valuation {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Valuation::Finite(v) => serializer.serialize_i64(*v),
            Valuation::Infinite => serializer.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Valuation {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Finite(i64),
            Tag(String),
        }
        match Repr::deserialize(deserializer)? {
            Repr::Finite(v) => Ok(Valuation::Finite(v)),
            Repr::Tag(s) if s == "inf" => Ok(Valuation::Infinite),
            Repr::Tag(s) => Err(D::Error::custom(format!("invalid valuation {s:?}"))),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("{0} is not prime")]
pub struct NotPrimeError(pub u64);

/// A validated prime number.
///
/// Validation is deterministic trial division; the primes in play here are
/// desk-scale, so nothing fancier is warranted.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
#[serde(transparent)]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Self, NotPrimeError> {
        if is_prime(p) {
            Ok(Prime(p))
        } else {
            Err(NotPrimeError(p))
        }
    }

    pub fn get(self) -> u64 {
        self.0
    }

    pub fn is_odd(self) -> bool {
        self.0 != 2
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl FromStr for Prime {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let p: u64 = s
            .trim()
            .parse()
            .map_err(|_| format!("invalid prime {s:?}"))?;
        Prime::new(p).map_err(|e| e.to_string())
    }
}

impl<'de> Deserialize<'de> for Prime {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let p = u64::deserialize(deserializer)?;
        Prime::new(p).map_err(D::Error::custom)
    }
}

/// Deterministic primality by trial division up to sqrt(n).
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Valuation of a big integer.
pub fn ord_int(x: &BigInt, p: Prime) -> Valuation {
    if x.is_zero() {
        return Valuation::Infinite;
    }
    let p = BigInt::from(p.get());
    let mut v = 0i64;
    let mut cur = x.abs();
    loop {
        let (q, r) = num_integer::Integer::div_rem(&cur, &p);
        if !r.is_zero() {
            return Valuation::Finite(v);
        }
        v += 1;
        cur = q;
    }
}

/// ord_p of an exact rational: exponent of p in the numerator minus the
/// exponent in the denominator; infinite for 0.
pub fn ord_p(x: &Rat, p: Prime) -> Valuation {
    if x.is_zero() {
        return Valuation::Infinite;
    }
    let num = match ord_int(x.numer(), p) {
        Valuation::Finite(v) => v,
        Valuation::Infinite => unreachable!("nonzero rational has nonzero numerator"),
    };
    if num > 0 {
        // lowest terms: p cannot also divide the denominator
        return Valuation::Finite(num);
    }
    match ord_int(x.denom(), p) {
        Valuation::Finite(v) => Valuation::Finite(num - v),
        Valuation::Infinite => unreachable!("denominator is nonzero"),
    }
}

/// Congruence of rationals: a = b mod p^N iff ord_p(a - b) >= N.
pub fn congruent_mod_pn(a: &Rat, b: &Rat, p: Prime, n_exp: u32) -> bool {
    ord_p(&(a - b), p).at_least(n_exp as i64)
}

/// ord_p(a!) by Legendre's formula: sum of floor(a / p^i).
pub fn factorial_valuation(a: u64, p: Prime) -> i64 {
    let p = p.get();
    let mut total = 0i64;
    let mut q = a / p;
    while q > 0 {
        total += q as i64;
        q /= p;
    }
    total
}

/// floor(log_p(x)) for x >= 1; the largest e with p^e <= x.
pub fn floor_log(x: u64, p: Prime) -> i64 {
    debug_assert!(x >= 1);
    let p = p.get();
    let mut e = 0i64;
    let mut pow = p;
    while pow <= x {
        e += 1;
        match pow.checked_mul(p) {
            Some(next) => pow = next,
            None => break,
        }
    }
    e
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};

    fn p(v: u64) -> Prime {
        Prime::new(v).unwrap()
    }

    #[test]
    fn primality_by_trial_division() {
        let primes: Vec<u64> = (0..60).filter(|&n| is_prime(n)).collect();
        assert_eq!(
            primes,
            vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]
        );
        assert!(Prime::new(9).is_err());
        assert!(Prime::new(1).is_err());
    }

    #[test]
    fn ord_of_simple_rationals() {
        assert_eq!(ord_p(&rat(5, 2), p(5)), Valuation::Finite(1));
        assert_eq!(ord_p(&rat_int(0), p(3)), Valuation::Infinite);
        assert_eq!(ord_p(&rat_int(12), p(2)), Valuation::Finite(2));
        assert_eq!(ord_p(&rat(1, 25), p(5)), Valuation::Finite(-2));
    }

    #[test]
    fn congruence_examples() {
        assert!(congruent_mod_pn(&rat(1, 6), &rat(1, 6), p(7), 3));
        assert!(congruent_mod_pn(&rat(5, 2), &rat_int(0), p(5), 1));
        // p*B_1 = 5/2 is not divisible by 25
        assert!(!congruent_mod_pn(&rat(5, 2), &rat_int(0), p(5), 2));
    }

    #[test]
    fn infinity_beats_every_requirement() {
        assert!(Valuation::Infinite.at_least(1_000_000));
        assert!(Valuation::Infinite > Valuation::Finite(i64::MAX));
        assert!(congruent_mod_pn(&rat_int(0), &rat_int(0), p(3), 100));
    }

    #[test]
    fn legendre_factorial_valuation() {
        // ord_5(400!) = 80 + 16 + 3 = 99
        assert_eq!(factorial_valuation(400, p(5)), 99);
        assert_eq!(factorial_valuation(4, p(5)), 0);
        assert_eq!(factorial_valuation(10, p(3)), 4);
    }

    #[test]
    fn floor_log_small_cases() {
        assert_eq!(floor_log(1, p(5)), 0);
        assert_eq!(floor_log(5, p(5)), 1);
        assert_eq!(floor_log(24, p(5)), 1);
        assert_eq!(floor_log(25, p(5)), 2);
    }

    #[test]
    fn valuation_serde_round_trip() {
        let fin = serde_json::to_string(&Valuation::Finite(-3)).unwrap();
        assert_eq!(fin, "-3");
        let inf = serde_json::to_string(&Valuation::Infinite).unwrap();
        assert_eq!(inf, "\"inf\"");
        assert_eq!(
            serde_json::from_str::<Valuation>(&fin).unwrap(),
            Valuation::Finite(-3)
        );
        assert_eq!(
            serde_json::from_str::<Valuation>(&inf).unwrap(),
            Valuation::Infinite
        );
    }
}
