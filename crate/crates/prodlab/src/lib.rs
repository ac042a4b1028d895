//! prodlab: define, evaluate, and cross-verify Wallis- and Catalan-type
//! infinite products.
//!
//! The crate is organized around the pipeline:
//!
//! - [`numerics`]: exact rationals, precision-tracked reals, constant
//!   expressions.
//! - [`gamma`]: Bernoulli numbers, Stirling-series ln-gamma, sin(pi x), and
//!   the gamma-ratio closed form for balanced periodic products.
//! - [`model`]: the product data model, the builtin catalog, canonical
//!   factor forms, and the general-base constructors.
//! - [`eval`]: exact partial products, extrapolated limits, log-space block
//!   evaluation, and factorial closed-form partials.
//! - [`identity`]: structural and numeric verification of product
//!   factorization claims.
//! - [`conjecture`]: limit estimation and constant recognition for the
//!   general-base exponential products.
//! - [`dsl`]: the textual product/claim language (parser and printer).
//! - [`cli`]: command implementations backing the `prodlab` binary.

pub mod cli;
pub mod conjecture;
pub mod dsl;
pub mod eval;
pub mod gamma;
pub mod identity;
pub mod model;
pub mod numerics;

pub use numerics::{const_eval, ConstExpr, PrecisionReal, Rational};
