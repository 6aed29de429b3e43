//! Valuation lower bounds for the factorial-weighted chain sums h(j).
//!
//! h(j) = floor(j/p)! * (chain sum over m1 < ... < m_{r-1} < j+1 with top
//! j+1), understood to be 0 for j <= r-2. The scan checks
//! ord_p(h(j)) >= -2*wt(k+) on a finite prefix; the per-block function
//! F(a) lower-bounds ord_p(h(ap+i)) and is scanned separately.
//!
//! Scans never materialize h(j): the valuation splits exactly as
//! ord(floor(j/p)!) + ord(prefix sum) - k_r * ord(j+1), and the prefix
//! sums are shared across scans with the same leading index parts.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::index::Index;
use crate::padic::{factorial_valuation, floor_log, ord_p, Prime, Valuation};
use crate::polylog::{chain_coefficient, chain_coefficients, ChainVariant};
use crate::rational::{rat_int, rat_serde, Rat};
use crate::stirling::factorial;

/// One factorial-weighted chain sum with its exact value and valuation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HValue {
    pub k: Index,
    pub p: u64,
    pub j: u64,
    #[serde(with = "rat_serde")]
    pub value: Rat,
    pub valuation: Valuation,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScanKind {
    /// Minimum of ord_p(h(j)) over a j-range.
    HValuation,
    /// Minimum of the lower-bound function F(a) over an a-range.
    FLowerBound,
}

/// Outcome of a bound scan, serializable as JSON.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub kind: ScanKind,
    pub k: Index,
    pub p: u64,
    /// Inclusive range scanned (j-range or a-range).
    pub lo: u64,
    pub hi: u64,
    pub min_valuation: Valuation,
    /// Where the minimum was attained.
    pub min_at: u64,
    /// The theoretical bound -2*wt(k+).
    pub bound: i64,
    pub pass: bool,
    /// wt(k+) < p - 1; reports with the hypothesis violated are still
    /// computed, just marked.
    pub hypothesis_ok: bool,
    /// Smallest j0 such that the conservative growth bound alone keeps
    /// ord_p(h(j)) >= -2*wt(k+) for every j >= j0: past this index the
    /// factorial term outgrows every logarithmic loss, which is what
    /// certifies the tail beyond the scanned prefix.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub tail_crossover: Option<u64>,
}

/// Exact h(j) with its valuation. Zero (infinite valuation) for j <= r-2.
pub fn h_value(k: &Index, p: Prime, j: u64) -> HValue {
    let chain = chain_coefficient(k, j + 1, ChainVariant::Strict);
    let value = rat_int(factorial(j / p.get())) * chain;
    let valuation = ord_p(&value, p);
    HValue {
        k: k.clone(),
        p: p.get(),
        j,
        value,
        valuation,
    }
}

/// Prefix sums of the chain machinery: entry j holds the sum over strict
/// chains m1 < ... < m_len <= j of 1/(m1^k1 ... m_len^k_len), which is the
/// inner factor of h(j) for an index whose leading parts are `prefix`.
/// An empty prefix gives the constant 1 (the empty-product chain).
pub fn prefix_chain_sums(prefix: &[i64], j_max: u64) -> Vec<Rat> {
    let j_max = j_max as usize;
    if prefix.is_empty() {
        return vec![rat_int(1); j_max + 1];
    }
    let per_top = chain_coefficients(&Index::of(prefix), j_max, ChainVariant::Strict);
    let mut acc = Rat::zero();
    per_top
        .into_iter()
        .map(|t| {
            acc += t;
            acc.clone()
        })
        .collect()
}

/// Minimum of ord_p(h(j)) over r-1 <= j <= j_max against -2*wt(k+), using
/// precomputed [`prefix_chain_sums`] for `k.prefix()`.
pub fn h_valuation_scan_with(k: &Index, p: Prime, j_max: u64, prefix_sums: &[Rat]) -> BoundReport {
    assert!(
        prefix_sums.len() as u64 > j_max,
        "prefix sums must cover the scanned range"
    );
    let lo = (k.depth() as u64) - 1;
    assert!(j_max >= lo, "scan range is empty");
    let k_last = k.last();
    let mut min_valuation = Valuation::Infinite;
    let mut min_at = lo;
    for j in lo..=j_max {
        let v = match ord_p(&prefix_sums[j as usize], p) {
            Valuation::Finite(v) => v,
            Valuation::Infinite => continue, // h(j) = 0 imposes nothing
        };
        let total = factorial_valuation(j / p.get(), p) + v - k_last * ord_u64(j + 1, p);
        if Valuation::Finite(total) < min_valuation {
            min_valuation = Valuation::Finite(total);
            min_at = j;
        }
    }
    let bound = -2 * k.weight_plus();
    BoundReport {
        kind: ScanKind::HValuation,
        k: k.clone(),
        p: p.get(),
        lo,
        hi: j_max,
        min_valuation,
        min_at,
        bound,
        pass: min_valuation.at_least(bound),
        hypothesis_ok: k.weight_plus() < p.get() as i64 - 1,
        tail_crossover: tail_crossover(k, p, j_max, bound),
    }
}

/// Minimum of ord_p(h(j)) over r-1 <= j <= j_max against -2*wt(k+).
pub fn h_valuation_scan(k: &Index, p: Prime, j_max: u64) -> BoundReport {
    let sums = prefix_chain_sums(k.prefix(), j_max);
    h_valuation_scan_with(k, p, j_max, &sums)
}

/// Conservative per-j lower bound on ord_p(h(j)): the factorial valuation
/// minus the worst case each chain element could lose,
///
///   L(j) = ord_p(floor(j/p)!) - k_r' floor(log_p(j+1))
///          - (k_1' + ... + k_{r-1}') floor(log_p j).
fn conservative_bound(k: &Index, p: Prime, j: u64) -> i64 {
    let k_last_plus = k.last().max(0);
    let prefix_plus: i64 = k.prefix().iter().map(|&x| x.max(0)).sum();
    let prefix_loss = if j == 0 {
        0
    } else {
        prefix_plus * floor_log(j, p)
    };
    factorial_valuation(j / p.get(), p) - k_last_plus * floor_log(j + 1, p) - prefix_loss
}

/// Smallest j0 with L(j) >= bound for every j in [j0, horizon]; the scan
/// horizon extends well past j_max so the crossover is meaningful.
fn tail_crossover(k: &Index, p: Prime, j_max: u64, bound: i64) -> Option<u64> {
    let lo = (k.depth() as u64) - 1;
    let horizon = (4 * j_max).max(100_000);
    let mut last_violation = None;
    for j in lo..=horizon {
        if conservative_bound(k, p, j) < bound {
            last_violation = Some(j);
        }
    }
    match last_violation {
        Some(j) if j >= horizon => None, // still violated at the horizon
        Some(j) => Some(j + 1),
        None => Some(lo),
    }
}

/// Valuation of a small positive integer.
fn ord_u64(mut x: u64, p: Prime) -> i64 {
    debug_assert!(x > 0);
    let p = p.get();
    let mut v = 0;
    while x.is_multiple_of(p) {
        v += 1;
        x /= p;
    }
    v
}

/// The per-block lower bound from the valuation analysis:
///
///   F(a) = ord_p(a!) - k_r' ord_p(a+1)
///          - max over chains 0 < b_1 < ... < b_{r-1} <= a
///              of sum_s k_s' ord_p(b_s)
///          - wt(k+)
///
/// The chain maximum is computed exactly by dynamic programming over the
/// values 1..a in order (position s only ever receives a value larger than
/// position s-1's). When a < r-1 no chain exists and the maximum is taken
/// as 0.
pub fn f_lower_bound(k: &Index, p: Prime, a: u64) -> i64 {
    let k_last_plus = k.last().max(0);
    factorial_valuation(a, p)
        - k_last_plus * ord_u64(a + 1, p)
        - chain_max(k.prefix(), p, a)
        - k.weight_plus()
}

/// Exact maximum of sum_s max(k_s, 0) * ord_p(b_s) over strict chains
/// b_1 < ... < b_len <= a; 0 when no chain exists.
pub(crate) fn chain_max(prefix: &[i64], p: Prime, a: u64) -> i64 {
    let weights: Vec<i64> = prefix.iter().map(|&x| x.max(0)).collect();
    if weights.is_empty() {
        return 0;
    }
    const UNSET: i64 = i64::MIN;
    let mut dp = vec![UNSET; weights.len() + 1];
    dp[0] = 0;
    for v in 1..=a {
        let o = ord_u64(v, p);
        for s in (1..=weights.len()).rev() {
            if dp[s - 1] != UNSET {
                dp[s] = dp[s].max(dp[s - 1] + weights[s - 1] * o);
            }
        }
    }
    let best = dp[weights.len()];
    if best == UNSET {
        0
    } else {
        best
    }
}

/// Minimum of F(a) over 1 <= a <= a_max against -2*wt(k+).
pub fn f_min_scan(k: &Index, p: Prime, a_max: u64) -> BoundReport {
    assert!(a_max >= 1);
    let mut min_value = i64::MAX;
    let mut min_at = 1;
    for a in 1..=a_max {
        let f = f_lower_bound(k, p, a);
        if f < min_value {
            min_value = f;
            min_at = a;
        }
    }
    let bound = -2 * k.weight_plus();
    BoundReport {
        kind: ScanKind::FLowerBound,
        k: k.clone(),
        p: p.get(),
        lo: 1,
        hi: a_max,
        min_valuation: Valuation::Finite(min_value),
        min_at,
        bound,
        pass: min_value >= bound,
        hypothesis_ok: k.weight_plus() < p.get() as i64 - 1,
        tail_crossover: None,
    }
}
