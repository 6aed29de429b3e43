//! Truncated formal power series over exact rationals.
//!
//! A series carries coefficients of t^0 .. t^M for an explicit truncation
//! order M. Mixed-order operations truncate to the minimum order silently;
//! nothing ever extrapolates past what both operands determine. Storage is
//! dense: desk-scale orders make anything sparser pointless.

use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use thiserror::Error;

use crate::rational::{rat, rat_int, Rat};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SeriesError {
    /// Division where the divisor's valuation exceeds the dividend's (or the
    /// divisor is identically zero to its order): the factor t^v does not
    /// cancel exactly.
    #[error("degenerate series division: divisor valuation exceeds dividend valuation")]
    DegenerateDivision,
    /// Composition g(f) requires f to have zero constant term.
    #[error("composition requires inner series with zero constant term")]
    NonzeroConstantTerm,
}

/// Coefficients of t^0 .. t^M; the order M is `coeffs.len() - 1`.
#[derive(Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    coeffs: Vec<Rat>,
}

impl TruncatedSeries {
    pub fn from_coeffs(coeffs: Vec<Rat>) -> Self {
        assert!(!coeffs.is_empty(), "a series carries at least t^0");
        TruncatedSeries { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        TruncatedSeries {
            coeffs: vec![Rat::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = Rat::one();
        s
    }

    /// c * t^k, truncated at `order`. Panics if k > order.
    pub fn monomial(c: Rat, k: usize, order: usize) -> Self {
        assert!(k <= order, "monomial degree beyond truncation order");
        let mut s = Self::zero(order);
        s.coeffs[k] = c;
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of t^i. Panics beyond the truncation order: coefficients
    /// past M are unknown, not zero.
    pub fn coeff(&self, i: usize) -> &Rat {
        assert!(
            i <= self.order(),
            "coefficient t^{i} beyond truncation order"
        );
        &self.coeffs[i]
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn truncate(&self, order: usize) -> Self {
        assert!(order <= self.order(), "cannot extend a truncated series");
        TruncatedSeries {
            coeffs: self.coeffs[..=order].to_vec(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Rat::is_zero)
    }

    /// Index of the lowest nonzero coefficient, if any within the order.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn scale(&self, c: &Rat) -> Self {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// Exact quotient q with q * rhs = self up to truncation. The common
    /// factor t^v (v = valuation of rhs) must cancel exactly; the result has
    /// order min(orders) - v.
    pub fn div_exact(&self, rhs: &TruncatedSeries) -> Result<TruncatedSeries, SeriesError> {
        let m = self.order().min(rhs.order());
        let v = match rhs.valuation() {
            Some(v) if v <= m => v,
            _ => return Err(SeriesError::DegenerateDivision),
        };
        if self.coeffs[..v].iter().any(|c| !c.is_zero()) {
            return Err(SeriesError::DegenerateDivision);
        }
        let a = &self.coeffs[v..=m];
        let b = &rhs.coeffs[v..=m];
        let lead = &b[0];
        let mut q = vec![Rat::zero(); m - v + 1];
        for i in 0..q.len() {
            let mut acc = a[i].clone();
            for j in 0..i {
                if !q[j].is_zero() && !b[i - j].is_zero() {
                    acc -= &q[j] * &b[i - j];
                }
            }
            q[i] = acc / lead;
        }
        Ok(TruncatedSeries { coeffs: q })
    }

    /// Horner-style composition self(inner); inner must kill the constant
    /// term so the result is determined to the shared order.
    pub fn compose(&self, inner: &TruncatedSeries) -> Result<TruncatedSeries, SeriesError> {
        if !inner.coeffs[0].is_zero() {
            return Err(SeriesError::NonzeroConstantTerm);
        }
        let m = self.order().min(inner.order());
        let inner = inner.truncate(m);
        let mut acc = TruncatedSeries::zero(m);
        for c in self.coeffs[..=m].iter().rev() {
            acc = &acc * &inner;
            if !c.is_zero() {
                acc.coeffs[0] += c;
            }
        }
        Ok(acc)
    }

    /// e^t - 1 = sum_{m>=1} t^m / m!.
    pub fn exp_minus_one(order: usize) -> Self {
        let mut coeffs = vec![Rat::zero(); order + 1];
        let mut fact = rat_int(1);
        for (m, slot) in coeffs.iter_mut().enumerate().skip(1) {
            fact /= rat_int(m as i64);
            *slot = fact.clone();
        }
        TruncatedSeries { coeffs }
    }

    /// 1 - e^{-t} = sum_{m>=1} (-1)^{m-1} t^m / m!.
    pub fn one_minus_exp_neg(order: usize) -> Self {
        let mut s = Self::exp_minus_one(order);
        for (m, c) in s.coeffs.iter_mut().enumerate() {
            if m % 2 == 0 {
                *c = -std::mem::take(c);
            }
        }
        s
    }

    /// log(1 + t) = sum_{m>=1} (-1)^{m-1} t^m / m.
    pub fn log_one_plus(order: usize) -> Self {
        let mut coeffs = vec![Rat::zero(); order + 1];
        for (m, slot) in coeffs.iter_mut().enumerate().skip(1) {
            let sign = if m % 2 == 1 { 1 } else { -1 };
            *slot = rat(sign, m as i64);
        }
        TruncatedSeries { coeffs }
    }
}

impl Add for &TruncatedSeries {
    type Output = TruncatedSeries;

    fn add(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        let m = self.order().min(rhs.order());
        TruncatedSeries {
            coeffs: (0..=m).map(|i| &self.coeffs[i] + &rhs.coeffs[i]).collect(),
        }
    }
}

impl Sub for &TruncatedSeries {
    type Output = TruncatedSeries;

    fn sub(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        let m = self.order().min(rhs.order());
        TruncatedSeries {
            coeffs: (0..=m).map(|i| &self.coeffs[i] - &rhs.coeffs[i]).collect(),
        }
    }
}

impl Mul for &TruncatedSeries {
    type Output = TruncatedSeries;

    /// Cauchy product to the minimum order.
    fn mul(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        let m = self.order().min(rhs.order());
        let mut coeffs = vec![Rat::zero(); m + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(m + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(m + 1 - i) {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        TruncatedSeries { coeffs }
    }
}

impl Neg for &TruncatedSeries {
    type Output = TruncatedSeries;

    fn neg(self) -> TruncatedSeries {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl std::fmt::Debug for TruncatedSeries {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})t^{i}")?;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(t^{})", self.order() + 1)
    }
}
