//! Multi-poly-Bernoulli numbers by two independent methods.
//!
//! The explicit method evaluates the closed Stirling-number formula over
//! chain sums; the series method divides the composed polylogarithm
//! generating function. They are derived independently and must agree
//! exactly, which is the central cross-check of the whole crate.
//!
//! Families:
//!   B  -> Li_k(1 - e^{-t}) / (1 - e^{-t})
//!   C  -> Li_k(1 - e^{-t}) / (e^t - 1)
//! Star families use the non-strict polylogarithm Li*_k.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::index::Index;
use crate::polylog::{chain_coefficients, ChainVariant};
use crate::rational::{rat_int, Rat};
use crate::series::TruncatedSeries;
use crate::stirling::{binomial, factorial, stirling2};

/// The four Bernoulli-type families.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum Family {
    B,
    C,
    #[serde(rename = "B_star")]
    BStar,
    #[serde(rename = "C_star")]
    CStar,
}

pub const ALL_FAMILIES: [Family; 4] = [Family::B, Family::C, Family::BStar, Family::CStar];

impl Family {
    pub fn variant(self) -> ChainVariant {
        match self {
            Family::B | Family::C => ChainVariant::Strict,
            Family::BStar | Family::CStar => ChainVariant::Star,
        }
    }

    /// C-kind families divide by e^t - 1 and weight chains with S(n+1, m).
    pub fn is_c_kind(self) -> bool {
        matches!(self, Family::C | Family::CStar)
    }

    /// The counterpart in the same variant: B <-> C, B* <-> C*.
    pub fn c_kind(self) -> Family {
        match self.variant() {
            ChainVariant::Strict => Family::C,
            ChainVariant::Star => Family::CStar,
        }
    }

    pub fn b_kind(self) -> Family {
        match self.variant() {
            ChainVariant::Strict => Family::B,
            ChainVariant::Star => Family::BStar,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::B => "B",
            Family::C => "C",
            Family::BStar => "B*",
            Family::CStar => "C*",
        };
        write!(f, "{s}")
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "b" => Ok(Family::B),
            "c" => Ok(Family::C),
            "b*" | "bstar" | "b_star" | "b-star" => Ok(Family::BStar),
            "c*" | "cstar" | "c_star" | "c-star" => Ok(Family::CStar),
            _ => Err(format!("unknown family {s:?} (expected B, C, B*, C*)")),
        }
    }
}

/// Values for n = 0..=n_max by the explicit chain/Stirling formula:
///
///   X_n = (-1)^n * sum over chains with top m <= n+1 of
///         (-1)^{m-1} (m-1)! W(n, m) / (m1^k1 ... m^kr)
///
/// with W(n, m) = S(n, m-1) for B-kind and S(n+1, m) for C-kind, strict or
/// star chains per family.
pub fn explicit_values(k: &Index, family: Family, n_max: usize) -> Vec<Rat> {
    let chain = chain_coefficients(k, n_max + 1, family.variant());
    let mut facts = Vec::with_capacity(n_max + 2);
    facts.push(BigInt::one());
    for m in 1..=(n_max as u64 + 1) {
        let last = facts.last().expect("nonempty").clone();
        facts.push(last * BigInt::from(m));
    }
    (0..=n_max)
        .map(|n| {
            let mut acc = Rat::zero();
            for (m, coeff) in chain.iter().enumerate().take(n + 2).skip(1) {
                if coeff.is_zero() {
                    continue;
                }
                let weight = if family.is_c_kind() {
                    stirling2(n + 1, m as i64)
                } else {
                    stirling2(n, m as i64 - 1)
                };
                if weight.is_zero() {
                    continue;
                }
                let term = rat_int(weight * &facts[m - 1]) * coeff;
                if m % 2 == 1 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            if n % 2 == 1 {
                -acc
            } else {
                acc
            }
        })
        .collect()
}

/// Single value by the explicit method.
pub fn explicit_value(k: &Index, n: usize, family: Family) -> Rat {
    explicit_values(k, family, n)
        .pop()
        .expect("vector has n+1 entries")
}

/// Generating-function evaluator: shares the powers of u = 1 - e^{-t}
/// across indices, so sweeping many indices costs one composition each.
pub struct SeriesEvaluator {
    n_max: usize,
    u_powers: Vec<TruncatedSeries>,
    div_c: TruncatedSeries,
}

impl SeriesEvaluator {
    pub fn new(n_max: usize) -> Self {
        let order = n_max + 1;
        let u = TruncatedSeries::one_minus_exp_neg(order);
        let mut u_powers = Vec::with_capacity(order + 1);
        u_powers.push(TruncatedSeries::one(order));
        for _ in 1..=order {
            let next = u_powers.last().expect("nonempty") * &u;
            u_powers.push(next);
        }
        SeriesEvaluator {
            n_max,
            u_powers,
            div_c: TruncatedSeries::exp_minus_one(order),
        }
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// n! [t^n] of Li_k(u) / (u or e^t - 1) for n = 0..=n_max.
    pub fn values(&self, k: &Index, family: Family) -> Vec<Rat> {
        let order = self.n_max + 1;
        let chain = chain_coefficients(k, order, family.variant());
        let mut numerator = TruncatedSeries::zero(order);
        for (m, c) in chain.iter().enumerate().skip(1) {
            if !c.is_zero() {
                numerator = &numerator + &self.u_powers[m].scale(c);
            }
        }
        let divisor = if family.is_c_kind() {
            &self.div_c
        } else {
            &self.u_powers[1]
        };
        let quotient = numerator
            .div_exact(divisor)
            .expect("numerator valuation is at least the divisor's");
        let mut fact = BigInt::one();
        (0..=self.n_max)
            .map(|n| {
                if n > 0 {
                    fact *= BigInt::from(n);
                }
                quotient.coeff(n) * rat_int(fact.clone())
            })
            .collect()
    }
}

/// Values for n = 0..=n_max by the generating-function method.
pub fn series_values(k: &Index, family: Family, n_max: usize) -> Vec<Rat> {
    SeriesEvaluator::new(n_max).values(k, family)
}

/// Single value by the generating-function method.
pub fn series_value(k: &Index, n: usize, family: Family) -> Rat {
    series_values(k, family, n)
        .pop()
        .expect("vector has n+1 entries")
}

/// Classical Bernoulli number from t e^t / (e^t - 1) = t / (1 - e^{-t}).
///
/// Under this convention B_1 = +1/2 and B_n = 0 for odd n >= 3; the odd
/// case short-circuits so callers can reach desk-scale-large odd orders
/// (the congruence counterexample needs m in the thousands) without an
/// enormous series division.
pub fn bernoulli(n: u64) -> Rat {
    if n % 2 == 1 && n >= 3 {
        return Rat::zero();
    }
    let n = n as usize;
    let numerator = TruncatedSeries::monomial(rat_int(1), 1, n + 1);
    let quotient = numerator
        .div_exact(&TruncatedSeries::one_minus_exp_neg(n + 1))
        .expect("1 - e^{-t} has valuation 1");
    quotient.coeff(n) * rat_int(factorial(n as u64))
}

/// B_n = sum_i C(n, i) C_i, within the strict or star variant.
pub fn relation_b_from_c(k: &Index, n: usize, variant: ChainVariant) -> bool {
    let (b_fam, c_fam) = family_pair(variant);
    let b = explicit_value(k, n, b_fam);
    let c = explicit_values(k, c_fam, n);
    let rhs: Rat = (0..=n)
        .map(|i| rat_int(binomial(n as u64, i as u64)) * &c[i])
        .sum();
    b == rhs
}

/// C_n = sum_i (-1)^{n-i} C(n, i) B_i, within the strict or star variant.
pub fn relation_c_from_b(k: &Index, n: usize, variant: ChainVariant) -> bool {
    let (b_fam, c_fam) = family_pair(variant);
    let c = explicit_value(k, n, c_fam);
    let b = explicit_values(k, b_fam, n);
    let rhs: Rat = (0..=n)
        .map(|i| {
            let term = rat_int(binomial(n as u64, i as u64)) * &b[i];
            if (n - i).is_multiple_of(2) {
                term
            } else {
                -term
            }
        })
        .sum();
    c == rhs
}

/// B_n^{(k1..kr)} = C_n^{(k1..kr)} + C_{n-1}^{(k1..kr-1)}: only the last
/// part of the index is decremented. Requires n >= 1.
pub fn relation_shift(k: &Index, n: usize, variant: ChainVariant) -> bool {
    assert!(n >= 1, "shift relation needs n >= 1");
    let (b_fam, c_fam) = family_pair(variant);
    let lhs = explicit_value(k, n, b_fam);
    let rhs = explicit_value(k, n, c_fam) + explicit_value(&k.decrement_last(), n - 1, c_fam);
    lhs == rhs
}

fn family_pair(variant: ChainVariant) -> (Family, Family) {
    match variant {
        ChainVariant::Strict => (Family::B, Family::C),
        ChainVariant::Star => (Family::BStar, Family::CStar),
    }
}

/// Checks all three B/C relations for every n <= n_max in one pass over
/// shared value vectors; returns the first failing (relation, n) if any.
pub fn check_relations_up_to(
    k: &Index,
    n_max: usize,
    variant: ChainVariant,
) -> Result<(), (String, usize)> {
    let (b_fam, c_fam) = family_pair(variant);
    let b = explicit_values(k, b_fam, n_max);
    let c = explicit_values(k, c_fam, n_max);
    let c_dec = explicit_values(&k.decrement_last(), c_fam, n_max.saturating_sub(1));
    for n in 0..=n_max {
        let binoms: Vec<Rat> = (0..=n)
            .map(|i| rat_int(binomial(n as u64, i as u64)))
            .collect();
        let from_c: Rat = (0..=n).map(|i| &binoms[i] * &c[i]).sum();
        if b[n] != from_c {
            return Err(("B from C".into(), n));
        }
        let from_b: Rat = (0..=n)
            .map(|i| {
                let term = &binoms[i] * &b[i];
                if (n - i) % 2 == 0 {
                    term
                } else {
                    -term
                }
            })
            .sum();
        if c[n] != from_b {
            return Err(("C from B".into(), n));
        }
        if n >= 1 && b[n] != &c[n] + &c_dec[n - 1] {
            return Err(("shift".into(), n));
        }
    }
    Ok(())
}

/// The moment of x^n under the distribution attached to the strict
/// generating function:
///
///   sum_j (-1)^j S(n, j) j! * (chain sum with top j+1)
///
/// which must equal (-1)^n B_n^{(k)}.
pub fn distribution_moment(k: &Index, n: usize) -> Rat {
    let chain = chain_coefficients(k, n + 1, ChainVariant::Strict);
    let mut fact = BigInt::one();
    let mut acc = Rat::zero();
    for (j, c) in chain.iter().enumerate().skip(1).take(n + 1) {
        // j here is the chain top, i.e. the Mahler index + 1
        let idx = j - 1;
        if idx > 0 {
            fact *= BigInt::from(idx);
        }
        if c.is_zero() {
            continue;
        }
        let weight = stirling2(n, idx as i64);
        if weight.is_zero() {
            continue;
        }
        let term = rat_int(weight * &fact) * c;
        if idx % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}
