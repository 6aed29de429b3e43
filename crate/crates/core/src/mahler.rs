//! Expansions of (x^m - x^n)/p^N in the basis floor(j/p)! * C(x, j),
//! with per-coefficient p-integrality verdicts.
//!
//! Since x^m = sum_j S(m, j) j! C(x, j), the coefficients come out in
//! closed form:
//!
//!   a_j = j! (S(m, j) - S(n, j)) / (p^N floor(j/p)!)
//!
//! The polynomial has degree max(m, n), so coefficients vanish beyond and
//! the expansion is finite. The iterated finite-difference route stays in
//! the tests as the independent oracle.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::padic::{ord_p, Prime, Valuation};
use crate::rational::{rat_int, rat_vec_serde, Rat};
use crate::stirling::{binomial, stirling2};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MahlerError {
    #[error("integrality hypotheses violated: need m, n >= N >= 1 and m = n mod (p-1)p^(N-1), got m={m}, n={n}, N={n_exp}, p={p}")]
    HypothesisViolation { m: u64, n: u64, n_exp: u32, p: u64 },
}

/// The finite expansion of (x^m - x^n)/p^N with integrality flags.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MahlerExpansion {
    pub m: u64,
    pub n: u64,
    #[serde(rename = "N")]
    pub n_exp: u32,
    pub p: u64,
    /// a_j for j = 0 ..= max(m, n); later coefficients are provably zero.
    #[serde(with = "rat_vec_serde")]
    pub coeffs: Vec<Rat>,
    /// Whether each a_j is p-integral (ord_p >= 0).
    pub integrality: Vec<bool>,
    /// m, n >= N and m = n mod (p-1)p^(N-1).
    pub hypothesis_ok: bool,
}

/// True iff m, n >= N >= 1 and m = n mod (p-1)p^(N-1).
pub fn hypotheses_hold(m: u64, n: u64, n_exp: u32, p: Prime) -> bool {
    if n_exp < 1 || m < n_exp as u64 || n < n_exp as u64 {
        return false;
    }
    let modulus = (p.get() - 1) * p.get().pow(n_exp - 1);
    m % modulus == n % modulus
}

/// Expands (x^m - x^n)/p^N in the basis floor(j/p)! C(x, j).
///
/// Always computable; the hypotheses are recorded, not enforced, so the
/// necessity of the congruence condition can be probed.
pub fn mahler_expand(m: u64, n: u64, n_exp: u32, p: Prime) -> MahlerExpansion {
    assert!(m >= 1 && n >= 1 && n_exp >= 1);
    let degree = m.max(n) as usize;
    let p_power = rat_int(BigInt::from(p.get()).pow(n_exp));
    let mut j_fact = BigInt::one();
    let mut floor_fact = BigInt::one();
    let mut coeffs = Vec::with_capacity(degree + 1);
    for j in 0..=degree {
        if j > 0 {
            j_fact *= BigInt::from(j);
            if j % p.get() as usize == 0 {
                floor_fact *= BigInt::from(j / p.get() as usize);
            }
        }
        let diff = stirling2(m as usize, j as i64) - stirling2(n as usize, j as i64);
        if diff.is_zero() {
            coeffs.push(Rat::zero());
        } else {
            coeffs.push(Rat::new(&j_fact * diff, floor_fact.clone()) / &p_power);
        }
    }
    let integrality = coeffs.iter().map(|a| ord_p(a, p).at_least(0)).collect();
    MahlerExpansion {
        m,
        n,
        n_exp,
        p: p.get(),
        coeffs,
        integrality,
        hypothesis_ok: hypotheses_hold(m, n, n_exp, p),
    }
}

impl MahlerExpansion {
    pub fn all_integral(&self) -> bool {
        self.integrality.iter().all(|&b| b)
    }

    /// Valuation of the least integral coefficient, for sharpness reports.
    pub fn min_valuation(&self) -> Valuation {
        self.coeffs
            .iter()
            .map(|a| ord_p(a, Prime::new(self.p).expect("stored prime is valid")))
            .min()
            .unwrap_or(Valuation::Infinite)
    }

    /// Checks the reconstruction identity
    /// sum_j a_j floor(j/p)! C(x, j) = (x^m - x^n)/p^N
    /// pointwise at x = 0..=max(m, n); agreement on degree+1 points is
    /// agreement as polynomials.
    pub fn verify_reconstruction(&self) -> bool {
        let p = self.p;
        let p_power = rat_int(BigInt::from(p).pow(self.n_exp));
        let degree = self.m.max(self.n);
        for x in 0..=degree {
            let direct =
                rat_int(BigInt::from(x).pow(self.m as u32) - BigInt::from(x).pow(self.n as u32))
                    / &p_power;
            let mut floor_fact = BigInt::one();
            let mut rebuilt = Rat::zero();
            for (j, a) in self.coeffs.iter().enumerate() {
                if j > 0 && j % p as usize == 0 {
                    floor_fact *= BigInt::from(j / p as usize);
                }
                if a.is_zero() {
                    continue;
                }
                let basis = &floor_fact * binomial(x, j as u64);
                if basis.is_zero() {
                    continue;
                }
                rebuilt += a * rat_int(basis);
            }
            if rebuilt != direct {
                return false;
            }
        }
        true
    }
}

/// The integrality verdict under the stated hypotheses: every a_j of
/// [`mahler_expand`] is p-integral. Rejects tuples that violate the
/// hypotheses; probing those is what [`mahler_expand`] itself is for.
pub fn integrality_check(m: u64, n: u64, n_exp: u32, p: Prime) -> Result<bool, MahlerError> {
    if !hypotheses_hold(m, n, n_exp, p) {
        return Err(MahlerError::HypothesisViolation {
            m,
            n,
            n_exp,
            p: p.get(),
        });
    }
    Ok(mahler_expand(m, n, n_exp, p).all_integral())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn p(v: u64) -> Prime {
        Prime::new(v).unwrap()
    }

    #[test]
    fn equal_exponents_give_the_zero_expansion() {
        let e = mahler_expand(5, 5, 3, p(7));
        assert!(e.coeffs.iter().all(Rat::is_zero));
        assert!(e.all_integral());
        assert!(e.verify_reconstruction());
        assert_eq!(integrality_check(5, 5, 3, p(7)), Ok(true));
    }

    #[test]
    fn hand_checked_expansion() {
        // a_j = j!(S(3,j) - S(1,j)) / (3 * floor(j/3)!)
        let e = mahler_expand(3, 1, 1, p(3));
        assert_eq!(
            e.coeffs,
            vec![Rat::zero(), Rat::zero(), rat_int(2), rat_int(2)]
        );
        assert!(e.all_integral());
        assert!(e.hypothesis_ok);
        assert!(e.verify_reconstruction());
    }

    #[test]
    fn hypothesis_failure_shows_up_as_non_integrality() {
        // m=2, n=1 are not congruent mod (p-1) = 2: a_2 = 2/3
        let e = mahler_expand(2, 1, 1, p(3));
        assert_eq!(e.coeffs[2], rat(2, 3));
        assert!(!e.integrality[2]);
        assert!(!e.hypothesis_ok);
        assert!(e.verify_reconstruction());
        assert_eq!(
            integrality_check(2, 1, 1, p(3)),
            Err(MahlerError::HypothesisViolation {
                m: 2,
                n: 1,
                n_exp: 1,
                p: 3
            })
        );
    }

    #[test]
    fn integral_under_hypotheses() {
        // 21 = 1 mod 4 with N = 1
        assert_eq!(integrality_check(21, 1, 1, p(5)), Ok(true));
        assert!(mahler_expand(21, 1, 1, p(5)).verify_reconstruction());
        // 41 = 21 mod 20 with both orders >= N = 2
        assert_eq!(integrality_check(41, 21, 2, p(5)), Ok(true));
    }

    #[test]
    fn order_hypothesis_is_necessary() {
        // 21 = 1 mod 20 but n = 1 < N = 2: (x^21 - x)/25 already fails to
        // be 25-divisible at x = 5, so some coefficient must be fractional
        let e = mahler_expand(21, 1, 2, p(5));
        assert!(!e.hypothesis_ok);
        assert!(!e.all_integral());
        assert!(e.verify_reconstruction());
        assert!(integrality_check(21, 1, 2, p(5)).is_err());
    }

    /// Independent oracle: Mahler coefficient of f at j is the j-th finite
    /// difference at 0, and the basis rescaling divides by floor(j/p)!.
    fn expansion_by_finite_differences(m: u64, n: u64, n_exp: u32, q: Prime) -> Vec<Rat> {
        let degree = m.max(n);
        let p_power = rat_int(BigInt::from(q.get()).pow(n_exp));
        let f = |x: u64| {
            rat_int(BigInt::from(x).pow(m as u32) - BigInt::from(x).pow(n as u32)) / &p_power
        };
        let mut floor_fact = BigInt::one();
        (0..=degree)
            .map(|j| {
                if j > 0 && j % q.get() == 0 {
                    floor_fact *= BigInt::from(j / q.get());
                }
                let mut delta = Rat::zero();
                for i in 0..=j {
                    let term = rat_int(binomial(j, i)) * f(i);
                    if (j - i) % 2 == 0 {
                        delta += term;
                    } else {
                        delta -= term;
                    }
                }
                delta / rat_int(floor_fact.clone())
            })
            .collect()
    }

    #[test]
    fn closed_form_matches_finite_differences() {
        for (m, n, n_exp, q) in [
            (3u64, 1u64, 1u32, 3u64),
            (2, 1, 1, 3),
            (21, 1, 2, 5),
            (10, 4, 1, 7),
            (9, 3, 2, 3),
        ] {
            assert_eq!(
                mahler_expand(m, n, n_exp, p(q)).coeffs,
                expansion_by_finite_differences(m, n, n_exp, p(q)),
                "m={m}, n={n}, N={n_exp}, p={q}"
            );
        }
    }

    #[test]
    fn expansion_serde_round_trip() {
        let e = mahler_expand(7, 3, 1, p(3));
        let json = serde_json::to_string(&e).unwrap();
        let back: MahlerExpansion = serde_json::from_str(&json).unwrap();
        assert_eq!(e, back);
    }
}
