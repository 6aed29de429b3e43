//! Integer index vectors k = (k1, ..., kr).
//!
//! An index is a nonempty tuple of integers. Entries may be negative.
//! The derived quantities are the weight (entry sum), the clamped index
//! k+ (entrywise max with 0), and its weight wt(k+).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A nonempty tuple of integers (k1, ..., kr).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Index(Vec<i64>);

#[derive(Debug, Error, PartialEq, Eq)]
pub enum IndexError {
    #[error("an index needs at least one part")]
    Empty,
    #[error("invalid index part {token:?} at position {position}")]
    BadPart { token: String, position: usize },
}

impl Index {
    pub fn new(parts: Vec<i64>) -> Result<Self, IndexError> {
        if parts.is_empty() {
            return Err(IndexError::Empty);
        }
        Ok(Index(parts))
    }

    /// Convenience constructor for literal indices; panics on an empty slice.
    pub fn of(parts: &[i64]) -> Self {
        Index::new(parts.to_vec()).expect("index literal must be nonempty")
    }

    pub fn parts(&self) -> &[i64] {
        &self.0
    }

    /// The depth r.
    pub fn depth(&self) -> usize {
        self.0.len()
    }

    /// The last part k_r.
    pub fn last(&self) -> i64 {
        *self.0.last().expect("index is nonempty")
    }

    /// All parts but the last: (k1, ..., k_{r-1}).
    pub fn prefix(&self) -> &[i64] {
        &self.0[..self.0.len() - 1]
    }

    /// wt(k) = k1 + ... + kr.
    pub fn weight(&self) -> i64 {
        self.0.iter().sum()
    }

    /// k+ = (max(k1,0), ..., max(kr,0)).
    pub fn plus_part(&self) -> Index {
        Index(self.0.iter().map(|&k| k.max(0)).collect())
    }

    /// wt(k+) = sum of max(ki, 0); always non-negative.
    pub fn weight_plus(&self) -> i64 {
        self.0.iter().map(|&k| k.max(0)).sum()
    }

    /// The index with the last part decremented: (k1, ..., kr - 1).
    pub fn decrement_last(&self) -> Index {
        let mut parts = self.0.clone();
        *parts.last_mut().expect("index is nonempty") -= 1;
        Index(parts)
    }
}

impl FromStr for Index {
    type Err = IndexError;

    /// Parses the CLI/config text syntax: comma-separated integers with
    /// optional whitespace, e.g. `"1,-2, 3"`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.trim().is_empty() {
            return Err(IndexError::Empty);
        }
        let mut parts = Vec::new();
        for (position, token) in s.split(',').enumerate() {
            let trimmed = token.trim();
            let part = trimmed.parse::<i64>().map_err(|_| IndexError::BadPart {
                token: trimmed.to_owned(),
                position,
            })?;
            parts.push(part);
        }
        Index::new(parts)
    }
}

impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, part) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{part}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
