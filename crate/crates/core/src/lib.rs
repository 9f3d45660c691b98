//! Exact product-to-recurrence engine.
//!
//! An infinite product `x^s ∏_i ∏_{n ∈ A_i} (1 - x^n)^{-f_i(n)/n}` has
//! coefficients satisfying `n p(n) = Σ_{k=1}^{n} p(n-k) Σ_i Σ_{d | k, d ∈ A_i} f_i(d)`.
//! This crate computes those coefficients both through that recurrence and
//! by direct expansion, and checks a catalog of divisor-sum identities
//! derived from it against brute-force oracles. All arithmetic is exact.

pub mod catalog;
pub mod divisor;
pub mod error;
pub mod product;
pub mod recurrence;
pub mod scalar;
pub mod series;

use num_bigint::BigInt;
use num_rational::BigRational;

pub use catalog::{Failure, IdentityReport};
pub use error::{Error, Result};
pub use product::{Factor, ProductSpec, Residue, SetDescriptor, WeightSpec};
pub use recurrence::{
    coeffs_via_expansion, coeffs_via_recurrence, cross_check, weight_table, DivisorWeightTable,
};
pub use scalar::Coefficient;
pub use series::{binomial_factor, TruncatedSeries};

/// Exact rational coefficient.
pub type Rational = BigRational;
/// Series over the rationals, the reference domain.
pub type RationalSeries = TruncatedSeries<BigRational>;
/// Series over the integers, the fast path for integral products.
pub type IntegerSeries = TruncatedSeries<BigInt>;
