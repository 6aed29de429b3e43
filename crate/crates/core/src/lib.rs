//! Exact-arithmetic multi-poly-Bernoulli numbers and Kummer-type
//! congruence verification.
//!
//! The crate computes the four Bernoulli-type families B, C, B*, C*
//! attached to an integer index k = (k1, ..., kr) by two independent
//! methods (a closed Stirling-number formula and a generating-function
//! series division), and verifies at desk scale:
//!
//! - the Kummer-type congruence p^{2wt(k+)} X_m = p^{2wt(k+)} X_n mod p^N
//!   for all four families, plus the classical congruence for Bernoulli
//!   numbers;
//! - p-integrality of the Mahler-basis coefficients of (x^m - x^n)/p^N;
//! - the valuation lower bound ord_p(h(j)) >= -2 wt(k+) for the
//!   factorial-weighted chain sums, together with its per-block lower
//!   bound function F(a);
//! - the documented counterexample showing that a single-power scaling
//!   p^1 is not enough.
//!
//! Everything is exact: values are arbitrary-precision rationals and all
//! checks are equalities or integer valuation comparisons.

pub mod congruence;
pub mod index;
pub mod mahler;
pub mod mpb;
pub mod padic;
pub mod padic_bounds;
pub mod polylog;
pub mod rational;
pub mod series;
pub mod stirling;

pub use index::Index;
pub use mpb::Family;
pub use padic::{congruent_mod_pn, ord_p, Prime, Valuation};
pub use polylog::ChainVariant;
pub use rational::{format_rat, parse_rat, Rat};
pub use series::TruncatedSeries;
