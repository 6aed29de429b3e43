//! Multiple polylogarithms, strict and non-strict (star), as truncated
//! series with exact chain-sum coefficients.
//!
//! The coefficient of t^m is the sum over chains m1 < ... < m_{r-1} < m
//! (strict) or m1 <= ... <= m_{r-1} <= m (star) of 1/(m1^k1 ... m^kr).
//! Coefficients are computed by iterated prefix sums over the depth, one
//! O(M) accumulation per index part, instead of enumerating chains.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::index::Index;
use crate::rational::{rat_int, Rat};
use crate::series::TruncatedSeries;
use num_traits::{One, Zero};

/// Strict chains use <, star chains use <= between consecutive entries.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChainVariant {
    Strict,
    Star,
}

/// One evaluated chain sum: the coefficient of t^upper in Li_k (or Li*_k).
#[derive(Clone, Debug, PartialEq)]
pub struct ChainSum {
    pub k: Index,
    pub upper: u64,
    pub variant: ChainVariant,
    pub value: Rat,
}

/// m^{-k} as an exact rational; negative k lands the power in the numerator.
pub(crate) fn power_recip(m: u64, k: i64) -> Rat {
    let pow = BigInt::from(m).pow(k.unsigned_abs() as u32);
    if k >= 0 {
        Rat::new(BigInt::one(), pow)
    } else {
        rat_int(pow)
    }
}

/// Coefficients of t^0 .. t^m_max of the multiple polylogarithm for `k`.
///
/// Entry m holds the chain sum with top fixed at m; entry 0 is 0. For depth
/// r and m < r (strict) the chain set is empty and the entry is 0.
pub fn chain_coefficients(k: &Index, m_max: usize, variant: ChainVariant) -> Vec<Rat> {
    let parts = k.parts();
    // level s: sum over chains of depth s+1 ending exactly at m
    let mut level = vec![Rat::zero(); m_max + 1];
    for (m, slot) in level.iter_mut().enumerate().skip(1) {
        *slot = power_recip(m as u64, parts[0]);
    }
    for &part in &parts[1..] {
        let mut next = vec![Rat::zero(); m_max + 1];
        let mut running = Rat::zero();
        for m in 1..=m_max {
            if let ChainVariant::Star = variant {
                running += &level[m];
            }
            if !running.is_zero() {
                next[m] = &running * power_recip(m as u64, part);
            }
            if let ChainVariant::Strict = variant {
                running += &level[m];
            }
        }
        level = next;
    }
    level
}

/// The chain sum with top fixed at m: the coefficient of t^m in Li_k.
///
/// For the strict variant this is also the inner sum of the factorial-
/// weighted h(j) values (with m = j + 1).
pub fn chain_coefficient(k: &Index, m: u64, variant: ChainVariant) -> Rat {
    chain_coefficients(k, m as usize, variant)
        .pop()
        .expect("vector has m+1 entries")
}

pub fn chain_sum(k: &Index, m: u64, variant: ChainVariant) -> ChainSum {
    ChainSum {
        k: k.clone(),
        upper: m,
        variant,
        value: chain_coefficient(k, m, variant),
    }
}

/// Li_k (strict) or Li*_k (star) truncated at `order`; constant term 0.
pub fn multiple_polylog(k: &Index, order: usize, variant: ChainVariant) -> TruncatedSeries {
    TruncatedSeries::from_coeffs(chain_coefficients(k, order, variant))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    /// Brute-force oracle: enumerate every admissible chain.
    pub(crate) fn chain_coefficient_brute(k: &Index, m: u64, variant: ChainVariant) -> Rat {
        fn go(parts: &[i64], pos: usize, lo: u64, top: u64, variant: ChainVariant) -> Rat {
            if pos == parts.len() - 1 {
                return power_recip(top, parts[pos]);
            }
            let mut acc = Rat::zero();
            let hi = match variant {
                ChainVariant::Strict => top.saturating_sub(1),
                ChainVariant::Star => top,
            };
            for v in lo..=hi {
                let next_lo = match variant {
                    ChainVariant::Strict => v + 1,
                    ChainVariant::Star => v,
                };
                acc += power_recip(v, parts[pos]) * go(parts, pos + 1, next_lo, top, variant);
            }
            acc
        }
        go(k.parts(), 0, 1, m, variant)
    }

    #[test]
    fn depth_one_is_a_single_term() {
        assert_eq!(
            chain_coefficient(&Index::of(&[2]), 5, ChainVariant::Strict),
            rat(1, 25)
        );
        assert_eq!(
            chain_coefficient(&Index::of(&[1]), 7, ChainVariant::Star),
            rat(1, 7)
        );
    }

    #[test]
    fn empty_chain_sets_yield_zero() {
        assert_eq!(
            chain_coefficient(&Index::of(&[1, 1]), 1, ChainVariant::Strict),
            Rat::zero()
        );
        assert_eq!(
            chain_coefficient(&Index::of(&[1, 1, 1]), 2, ChainVariant::Strict),
            Rat::zero()
        );
        // star chains allow repeats, so m = 1 already admits (1,1)
        assert_eq!(
            chain_coefficient(&Index::of(&[1, 1]), 1, ChainVariant::Star),
            rat(1, 1)
        );
    }

    #[test]
    fn hand_enumerated_coefficients() {
        // k=(1,1) strict, t^3: 1/(1*3) + 1/(2*3) = 1/2
        assert_eq!(
            chain_coefficient(&Index::of(&[1, 1]), 3, ChainVariant::Strict),
            rat(1, 2)
        );
        // k=(1,1) star, t^2: 1/(1*2) + 1/(2*2) = 3/4
        assert_eq!(
            chain_coefficient(&Index::of(&[1, 1]), 2, ChainVariant::Star),
            rat(3, 4)
        );
        // k=(-1,1) strict, t^3: (1 + 2)/3 = 1
        assert_eq!(
            chain_coefficient(&Index::of(&[-1, 1]), 3, ChainVariant::Strict),
            rat_int(1)
        );
    }

    #[test]
    fn depth_one_polylog_is_minus_log() {
        // Li_1(t) = -log(1-t): coefficient of t^m is 1/m
        let li = multiple_polylog(&Index::of(&[1]), 9, ChainVariant::Strict);
        for m in 1..=9usize {
            assert_eq!(li.coeff(m), &rat(1, m as i64));
        }
        assert!(li.coeff(0).is_zero());
    }

    #[test]
    fn prefix_sums_match_brute_force_enumeration() {
        let range = [-3i64, -1, 0, 2, 3];
        let mut indices = Vec::new();
        for &a in &range {
            indices.push(Index::of(&[a]));
            for &b in &range {
                indices.push(Index::of(&[a, b]));
                for &c in &[-2i64, 1, 3] {
                    indices.push(Index::of(&[a, b, c]));
                }
            }
        }
        for k in &indices {
            for variant in [ChainVariant::Strict, ChainVariant::Star] {
                let fast = chain_coefficients(k, 12, variant);
                for m in 1..=12u64 {
                    assert_eq!(
                        fast[m as usize],
                        chain_coefficient_brute(k, m, variant),
                        "k={k}, m={m}, {variant:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn star_dominates_strict_for_positive_indices() {
        for parts in [&[1i64][..], &[2], &[1, 1], &[2, 1], &[1, 2, 1]] {
            let k = Index::of(parts);
            let strict = chain_coefficients(&k, 12, ChainVariant::Strict);
            let star = chain_coefficients(&k, 12, ChainVariant::Star);
            for m in 0..=12usize {
                assert!(star[m] >= strict[m], "k={k}, m={m}");
            }
        }
    }

    #[test]
    fn series_coefficients_agree_with_point_queries() {
        let k = Index::of(&[2, -1]);
        let li = multiple_polylog(&k, 10, ChainVariant::Star);
        for m in 0..=10u64 {
            assert_eq!(
                li.coeff(m as usize),
                &chain_coefficient(&k, m, ChainVariant::Star)
            );
        }
    }
}
