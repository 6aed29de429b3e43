//! Kummer-type congruence verification.
//!
//! For the multi-poly families the check is
//!
//!   ord_p( p^{2 wt(k+)} (X_m - X_n) ) >= N
//!
//! whenever m, n >= N, wt(k+) < p - 1 and m = n mod (p-1)p^{N-1}; the
//! classical check uses the Euler-factor-corrected quotients
//! (1 - p^{m-1}) B_m / m. Hypotheses are flagged, never enforced, so a
//! scan can probe what happens when each one is dropped.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::index::Index;
use crate::mpb::{bernoulli, explicit_value, explicit_values, Family};
use crate::padic::{ord_p, Prime, Valuation};
use crate::rational::{rat_int, rat_serde, Rat};

/// Which congruence family a report belongs to.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ReportFamily {
    Mpb(Family),
    Classical,
}

impl fmt::Display for ReportFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReportFamily::Mpb(fam) => write!(f, "{fam}"),
            ReportFamily::Classical => write!(f, "classical"),
        }
    }
}

impl Serialize for ReportFamily {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            ReportFamily::Mpb(fam) => fam.serialize(serializer),
            ReportFamily::Classical => serializer.serialize_str("classical"),
        }
    }
}

impl<'de> Deserialize<'de> for ReportFamily {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        if s == "classical" {
            return Ok(ReportFamily::Classical);
        }
        s.parse::<Family>()
            .map(ReportFamily::Mpb)
            .map_err(serde::de::Error::custom)
    }
}

/// Hypothesis flags, recorded even when violated so sharpness can be
/// explored. `weight_below_p_minus_1` applies to the multi-poly theorem;
/// `classical_nondegenerate` (orders even and not divisible by p-1) applies
/// to the classical congruence.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct HypothesisFlags {
    pub orders_at_least_n: bool,
    pub orders_congruent: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub weight_below_p_minus_1: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub classical_nondegenerate: Option<bool>,
}

impl HypothesisFlags {
    pub fn all_satisfied(&self) -> bool {
        self.orders_at_least_n
            && self.orders_congruent
            && self.weight_below_p_minus_1.unwrap_or(true)
            && self.classical_nondegenerate.unwrap_or(true)
    }
}

/// One verified congruence cell.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CongruenceReport {
    pub family: ReportFamily,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub k: Option<Index>,
    pub p: u64,
    pub m: u64,
    pub n: u64,
    /// The modulus exponent N: the congruence must hold mod p^N.
    #[serde(rename = "N")]
    pub required: u32,
    /// Exponent of the p-power scaling applied to both sides.
    pub scale_exp: u32,
    #[serde(with = "rat_serde")]
    pub lhs: Rat,
    #[serde(with = "rat_serde")]
    pub rhs: Rat,
    /// ord_p(lhs - rhs).
    pub achieved: Valuation,
    pub pass: bool,
    pub hypotheses: HypothesisFlags,
}

impl CongruenceReport {
    /// achieved - required, when finite; the sharpness margin.
    pub fn margin(&self) -> Option<i64> {
        self.achieved.finite().map(|v| v - self.required as i64)
    }

    /// A failure that matters: hypotheses hold yet the congruence fails.
    pub fn counts_as_failure(&self) -> bool {
        !self.pass && self.hypotheses.all_satisfied()
    }

    /// Compact cell key used for deterministic ordering and summaries.
    pub fn cell_key(&self) -> String {
        match &self.k {
            Some(k) => format!(
                "{} k={} p={} N={} m={} n={}",
                self.family, k, self.p, self.required, self.m, self.n
            ),
            None => format!(
                "{} p={} N={} m={} n={}",
                self.family, self.p, self.required, self.m, self.n
            ),
        }
    }
}

fn congruence_step(p: Prime, n_exp: u32) -> u64 {
    (p.get() - 1) * p.get().pow(n_exp - 1)
}

/// Classical check: (1 - p^{m-1}) B_m / m vs (1 - p^{n-1}) B_n / n mod p^N.
///
/// The congruence needs even orders not divisible by p-1 (otherwise the
/// denominators carry a pole at p); both conditions are recorded in
/// `classical_nondegenerate` rather than enforced.
pub fn classical_kummer(p: Prime, m: u64, n: u64, n_exp: u32) -> CongruenceReport {
    assert!(m >= 1 && n >= 1 && n_exp >= 1);
    let side = |ord: u64| {
        let euler = rat_int(1) - rat_int(BigInt::from(p.get()).pow(ord as u32 - 1));
        euler * bernoulli(ord) / rat_int(ord)
    };
    let lhs = side(m);
    let rhs = side(n);
    let achieved = ord_p(&(&lhs - &rhs), p);
    let step = congruence_step(p, n_exp);
    let hypotheses = HypothesisFlags {
        orders_at_least_n: true,
        orders_congruent: m % step == n % step,
        weight_below_p_minus_1: None,
        classical_nondegenerate: Some(
            m.is_multiple_of(2)
                && n.is_multiple_of(2)
                && !m.is_multiple_of(p.get() - 1)
                && !n.is_multiple_of(p.get() - 1),
        ),
    };
    CongruenceReport {
        family: ReportFamily::Classical,
        k: None,
        p: p.get(),
        m,
        n,
        required: n_exp,
        scale_exp: 0,
        pass: achieved.at_least(n_exp as i64),
        achieved,
        lhs,
        rhs,
        hypotheses,
    }
}

/// Multi-poly check with precomputed value vectors (values[i] = X_i).
fn mpb_kummer_from_values(
    k: &Index,
    family: Family,
    p: Prime,
    m: u64,
    n: u64,
    n_exp: u32,
    values: &[Rat],
) -> CongruenceReport {
    let wt_plus = k.weight_plus();
    let scale_exp = 2 * wt_plus as u32;
    let scale = rat_int(BigInt::from(p.get()).pow(scale_exp));
    let lhs = &scale * &values[m as usize];
    let rhs = &scale * &values[n as usize];
    let achieved = ord_p(&(&lhs - &rhs), p);
    let step = congruence_step(p, n_exp);
    let hypotheses = HypothesisFlags {
        orders_at_least_n: m >= n_exp as u64 && n >= n_exp as u64,
        orders_congruent: m % step == n % step,
        weight_below_p_minus_1: Some(wt_plus < p.get() as i64 - 1),
        classical_nondegenerate: None,
    };
    CongruenceReport {
        family: ReportFamily::Mpb(family),
        k: Some(k.clone()),
        p: p.get(),
        m,
        n,
        required: n_exp,
        scale_exp,
        pass: achieved.at_least(n_exp as i64),
        achieved,
        lhs,
        rhs,
        hypotheses,
    }
}

/// ord_p( p^{2 wt(k+)} (X_m - X_n) ) compared against N for one family.
pub fn mpb_kummer(
    k: &Index,
    family: Family,
    p: Prime,
    m: u64,
    n: u64,
    n_exp: u32,
) -> CongruenceReport {
    let values = explicit_values(k, family, m.max(n) as usize);
    mpb_kummer_from_values(k, family, p, m, n, n_exp, &values)
}

/// The documented failure of the p^1-scaled congruence: with k = (1),
/// m = (p-1)p^N + 1 and N >= 2,
///
///   p B_1^{(1)} = p/2  is not congruent to  p B_m^{(1)} = 0  mod p^N
///
/// even though m = 1 mod (p-1)p^N. The large-order side goes through the
/// classical odd-order vanishing rather than an explicit sum with
/// thousands of terms; B_n^{(1)} = B_n is itself a tested identity.
pub fn counterexample(p: Prime, n_exp: u32) -> CongruenceReport {
    assert!(n_exp >= 2, "the failure needs N >= 2");
    let m_big = (p.get() - 1) * p.get().pow(n_exp) + 1;
    let scale = rat_int(p.get());
    let k = Index::of(&[1]);
    let lhs = &scale * explicit_value(&k, 1, Family::B);
    let rhs = &scale * bernoulli(m_big);
    let achieved = ord_p(&(&lhs - &rhs), p);
    CongruenceReport {
        family: ReportFamily::Mpb(Family::B),
        k: Some(k),
        p: p.get(),
        m: 1,
        n: m_big,
        required: n_exp,
        scale_exp: 1,
        pass: achieved.at_least(n_exp as i64),
        achieved,
        lhs,
        rhs,
        // the claimed hypotheses hold by construction: p odd and
        // 1 = m mod (p-1)p^N; that is what makes this a counterexample
        hypotheses: HypothesisFlags {
            orders_at_least_n: true,
            orders_congruent: true,
            weight_below_p_minus_1: Some(true),
            classical_nondegenerate: None,
        },
    }
}

/// How (m, n) pairs are generated for a scan.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairStrategy {
    /// n = m + (p-1)p^{N-1} d for m in [m_min, m_max], d in [1, d_max].
    Arithmetic { m_min: u64, m_max: u64, d_max: u64 },
    /// Pairs given verbatim.
    Explicit(Vec<(u64, u64)>),
}

impl PairStrategy {
    fn pairs(&self, p: Prime, n_exp: u32) -> Vec<(u64, u64)> {
        match self {
            PairStrategy::Arithmetic {
                m_min,
                m_max,
                d_max,
            } => {
                let step = congruence_step(p, n_exp);
                let mut out = Vec::new();
                for m in *m_min..=*m_max {
                    for d in 1..=*d_max {
                        out.push((m, m + step * d));
                    }
                }
                out
            }
            PairStrategy::Explicit(pairs) => pairs.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanConfig {
    pub families: Vec<Family>,
    pub indices: Vec<Index>,
    pub primes: Vec<u64>,
    /// Inclusive range of modulus exponents N.
    pub n_exps: (u32, u32),
    pub pairs: PairStrategy,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanError {
    pub cell: String,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanSummary {
    pub cells: usize,
    pub hypothesis_satisfied: usize,
    /// pass = false among hypothesis-satisfying cells: real failures.
    pub failures: usize,
    /// pass = false among cells with some hypothesis violated.
    pub informational_failures: usize,
    /// Sharpness: minimum achieved - required over hypothesis-satisfying
    /// cells with finite valuation.
    pub min_margin: Option<i64>,
    pub min_margin_cell: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanOutcome {
    pub reports: Vec<CongruenceReport>,
    pub errors: Vec<ScanError>,
    pub summary: ScanSummary,
}

impl ScanOutcome {
    pub fn has_failures(&self) -> bool {
        self.summary.failures > 0 || !self.errors.is_empty()
    }
}

/// Runs the whole grid. Cells are independent and evaluated in parallel;
/// the report order is the deterministic nested enumeration order
/// (family, index, prime, N, pair) regardless of worker count. Per-cell
/// problems (a non-prime entry in the prime list) are collected, never
/// fatal.
pub fn scan(config: &ScanConfig) -> ScanOutcome {
    let mut errors = Vec::new();
    let mut primes = Vec::new();
    for &p in &config.primes {
        match Prime::new(p) {
            Ok(prime) => primes.push(prime),
            Err(e) => errors.push(ScanError {
                cell: format!("p={p}"),
                message: e.to_string(),
            }),
        }
    }
    let (n_lo, n_hi) = config.n_exps;

    // (k, family, p, N, m, n) in deterministic order
    let mut cells = Vec::new();
    let mut n_needed: u64 = 0;
    for family in &config.families {
        for k in &config.indices {
            for &p in &primes {
                for n_exp in n_lo..=n_hi {
                    for (m, n) in config.pairs.pairs(p, n_exp) {
                        n_needed = n_needed.max(m.max(n));
                        cells.push((k.clone(), *family, p, n_exp, m, n));
                    }
                }
            }
        }
    }

    // one value vector per (family, index), shared by every cell
    let mut keys: Vec<(Index, Family)> = Vec::new();
    for family in &config.families {
        for k in &config.indices {
            keys.push((k.clone(), *family));
        }
    }
    let values: HashMap<(Index, Family), Vec<Rat>> = keys
        .into_par_iter()
        .map(|(k, family)| {
            let v = explicit_values(&k, family, n_needed as usize);
            ((k, family), v)
        })
        .collect();

    let reports: Vec<CongruenceReport> = cells
        .par_iter()
        .map(|(k, family, p, n_exp, m, n)| {
            let vec = &values[&(k.clone(), *family)];
            mpb_kummer_from_values(k, *family, *p, *m, *n, *n_exp, vec)
        })
        .collect();

    let mut summary = ScanSummary {
        cells: reports.len(),
        hypothesis_satisfied: 0,
        failures: 0,
        informational_failures: 0,
        min_margin: None,
        min_margin_cell: None,
    };
    for report in &reports {
        if report.hypotheses.all_satisfied() {
            summary.hypothesis_satisfied += 1;
            if !report.pass {
                summary.failures += 1;
            }
            if let Some(margin) = report.margin() {
                if summary.min_margin.is_none_or(|cur| margin < cur) {
                    summary.min_margin = Some(margin);
                    summary.min_margin_cell = Some(report.cell_key());
                }
            }
        } else if !report.pass {
            summary.informational_failures += 1;
        }
    }
    ScanOutcome {
        reports,
        errors,
        summary,
    }
}
