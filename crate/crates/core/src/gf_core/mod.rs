//! Finite fields, polynomials and rational functions over them, places of
//! F_q(t), valuations, local expansions and local unit counts.

pub mod field;
pub mod place;
pub mod poly;
pub mod ratfunc;
pub mod series;
pub mod trunc;
pub mod units;

use thiserror::Error;

pub use field::{
    field_of_order, make_field, prime_power, ExtField, Field, FiniteField, Gf, Ring,
};
pub use place::{divisor, places_of_degree, valuation, LocalCtx, Place, ResElem};
pub use ratfunc::{RatField, RatFunc};
pub use series::{local_expand, LocalSeries};
pub use trunc::TruncRing;
pub use units::{unit_quotient_card, UnitQuotient};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GfError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("field {p}^{k} exceeds the configured size bound")]
    SizeBound { p: u64, k: u32 },
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("precision {requested} requested, {available} available")]
    PrecisionBound { requested: i64, available: i64 },
    #[error("p = {p} does not divide m = {m}")]
    DivisibilityViolation { p: u64, m: u32 },
    #[error("enumeration of {size} elements exceeds bound {bound}")]
    EnumerationBound { size: u128, bound: u128 },
    #[error("independent computations disagree: {0}")]
    Disagreement(String),
}

/// Factorization of a nonzero polynomial over F_q into monic irreducibles.
pub fn factor(f: &Gf, a: &[u32]) -> Result<Vec<(Vec<u32>, u32)>, GfError> {
    poly::factor(f, a).ok_or(GfError::ZeroPolynomial)
}
