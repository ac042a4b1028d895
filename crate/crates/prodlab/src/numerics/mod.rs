//! Exact rationals, arbitrary-precision reals with an accuracy contract,
//! and symbolic constant expressions.
//!
//! Three layers:
//! - [`Rational`]: exact arbitrary-size fractions (always reduced, positive
//!   denominator), used for partial products, residues, and exponents.
//! - [`PrecisionReal`]: an arbitrary-precision real paired with the precision
//!   `p` it was computed at. Every producing operation guarantees
//!   `|stored - true| <= 2^(-p+2) * max(1, |true|)`.
//! - [`ConstExpr`]: closed-form expression trees over pi, e, integers and
//!   rationals, evaluated on demand ([`const_eval`]).

mod expr;
mod real;

pub use expr::{const_eval, ConstExpr};
pub use real::{parse_decimal_or_fraction, CompareOutcome, PrecisionReal, Tolerance};

#[allow(unused_imports)]
pub(crate) use real::kernel;

use num::bigint::{BigInt, Sign};
use num::BigRational;
use thiserror::Error;

/// Exact fraction type used throughout the crate. Values are kept reduced
/// with a positive denominator by construction.
pub type Rational = BigRational;

/// Shorthand constructor for small rationals. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Rational from an integer.
pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// True if `r` is a (possibly negative) integer.
pub fn is_integer(r: &Rational) -> bool {
    r.is_integer()
}

/// True if `r > 0`.
pub fn is_positive(r: &Rational) -> bool {
    r.numer().sign() == Sign::Plus
}

/// Errors raised while evaluating constant expressions.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumericsError {
    /// A divisor subexpression evaluated to zero.
    #[error("division by zero in constant expression")]
    DivisionByZero,
    /// A square root (or fractional power) of a negative value.
    #[error("square root or fractional power of a negative value")]
    NegativeSqrt,
}
