//! Stirling numbers of the second kind and small combinatorial helpers.
//!
//! S(a, b) counts partitions of an a-set into b nonempty blocks and obeys
//! S(a+1, b) = S(a, b-1) + b * S(a, b) with S(0, 0) = 1 and S(a, b) = 0
//! for a < b. Out-of-range b (negative or above a) yields 0 rather than an
//! error: the explicit Bernoulli formulas index S(n, m-1) with m-1 > n.

use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::rational::{rat_int, Rat};

/// Memoized triangular table of S(a, b), grown on demand.
///
/// Growth takes the write lock once per extension; lookups take the read
/// lock. A single process-wide table backs [`stirling2`].
pub struct StirlingTable {
    rows: RwLock<Vec<Vec<BigInt>>>,
}

impl StirlingTable {
    pub fn new() -> Self {
        StirlingTable {
            rows: RwLock::new(vec![vec![BigInt::one()]]),
        }
    }

    pub fn value(&self, a: usize, b: i64) -> BigInt {
        if b < 0 || b as usize > a {
            return BigInt::zero();
        }
        let b = b as usize;
        {
            let rows = self.rows.read().expect("stirling table poisoned");
            if a < rows.len() {
                return rows[a][b].clone();
            }
        }
        let mut rows = self.rows.write().expect("stirling table poisoned");
        // grow amortized: at least double so scans do not re-lock per row
        let target = a.max(2 * rows.len());
        while rows.len() <= target {
            let prev = rows.last().expect("table starts nonempty");
            let n = rows.len();
            let mut next = vec![BigInt::zero(); n + 1];
            for (b, slot) in next.iter_mut().enumerate() {
                let mut v = if b > 0 {
                    prev[b - 1].clone()
                } else {
                    BigInt::zero()
                };
                if b < prev.len() {
                    v += BigInt::from(b) * &prev[b];
                }
                *slot = v;
            }
            rows.push(next);
        }
        rows[a][b].clone()
    }
}

impl Default for StirlingTable {
    fn default() -> Self {
        Self::new()
    }
}

static TABLE: OnceLock<StirlingTable> = OnceLock::new();

/// S(a, b) from the shared memoized table; 0 outside 0 <= b <= a.
pub fn stirling2(a: usize, b: i64) -> BigInt {
    TABLE.get_or_init(StirlingTable::new).value(a, b)
}

/// Coefficients c_j with x^n = sum_j c_j * C(x, j), i.e. c_j = S(n, j) * j!.
pub fn falling_basis_expand(n: usize) -> Vec<Rat> {
    let mut fact = BigInt::one();
    (0..=n)
        .map(|j| {
            if j > 0 {
                fact *= BigInt::from(j);
            }
            rat_int(stirling2(n, j as i64) * &fact)
        })
        .collect()
}

/// n! as a big integer.
pub fn factorial(n: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= BigInt::from(i);
    }
    acc
}

/// Binomial coefficient C(n, k); 0 for k > n.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    num_integer::binomial(BigInt::from(n), BigInt::from(k))
}
