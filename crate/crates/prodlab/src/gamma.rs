//! Arbitrary-precision ln-gamma, sin(pi x), and the gamma-ratio closed form
//! for balanced periodic products.
//!
//! ln-gamma uses the Stirling asymptotic series with exact Bernoulli-number
//! coefficients after lifting the argument above a precision-dependent
//! threshold with the factorial recurrence `Gamma(x+1) = x Gamma(x)`. On the
//! positive real axis the truncation error is bounded by the first omitted
//! term, so the term loop simply runs until terms drop below the target.

use std::sync::Mutex;

use astro_float::BigFloat;
use num::{BigInt, One, Zero};
use thiserror::Error;

use crate::model::WallisProduct;
use crate::numerics::{kernel, rat, ConstExpr, PrecisionReal, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GammaError {
    #[error("ln-gamma requires a positive argument")]
    NonpositiveArgument,
    #[error("residue sums must balance for the gamma-ratio formula to apply")]
    UnbalancedProduct,
}

/// Parameters of the Stirling evaluation for a given bit target.
///
/// `shift_threshold` is the argument magnitude below which the factorial
/// recurrence lifts the argument; `series_terms` caps the series so that the
/// first omitted term is below `2^-(target)` at the shifted argument.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StirlingConfig {
    pub shift_threshold: u64,
    pub series_terms: usize,
}

impl StirlingConfig {
    /// Configuration reaching an absolute truncation target of `2^-bits`.
    ///
    /// At argument `y` the smallest Stirling term is about `e^(-2 pi y)`, so
    /// `y >= bits/8` leaves comfortable headroom, reached after at most
    /// about `0.4 * bits` terms.
    pub fn for_target_bits(bits: usize) -> Self {
        StirlingConfig {
            shift_threshold: (bits as u64 / 8 + 2).max(8),
            series_terms: 2 * bits / 5 + 16,
        }
    }
}

fn bernoulli_cache() -> &'static Mutex<Vec<Rational>> {
    static CACHE: Mutex<Vec<Rational>> = Mutex::new(Vec::new());
    &CACHE
}

/// Exact Bernoulli number `B_n` for even `n >= 2`, from the defining
/// recurrence `sum_{k=0..n} C(n+1, k) B_k = 0`. Computed values are cached
/// append-only.
#[allow(clippy::assign_op_pattern)]
pub fn bernoulli(n: u32) -> Rational {
    assert!(n >= 2 && n.is_multiple_of(2), "defined for even n >= 2");
    let mut cache = bernoulli_cache().lock().unwrap();
    if cache.is_empty() {
        cache.push(Rational::one());
    }
    while cache.len() <= n as usize {
        let m = cache.len(); // computing B_m
        let mut acc = Rational::zero();
        let mut binom = BigInt::one(); // C(m+1, k), starting at k = 0
        for (k, b) in cache.iter().enumerate() {
            if !b.is_zero() {
                acc += Rational::from_integer(binom.clone()) * b;
            }
            binom = binom * BigInt::from(m + 1 - k) / BigInt::from(k + 1);
        }
        let next = -acc / Rational::from_integer(BigInt::from(m + 1));
        cache.push(next);
    }
    cache[n as usize].clone()
}

/// ln Gamma at a raw working precision, without the final contract rounding.
pub(crate) fn lngamma_wp(x: &Rational, wp: usize) -> Result<BigFloat, GammaError> {
    if !crate::numerics::is_positive(x) {
        return Err(GammaError::NonpositiveArgument);
    }
    let target_bits = wp + 8;
    let cfg = StirlingConfig::for_target_bits(target_bits);
    let threshold = Rational::from_integer(BigInt::from(cfg.shift_threshold));
    let lift = if *x < threshold {
        let floor = x.floor().numer().clone();
        (BigInt::from(cfg.shift_threshold) - floor)
            .try_into()
            .unwrap_or(0u64)
    } else {
        0
    };
    // Gamma(x) = Gamma(x + m) / prod_{i<m} (x + i).
    let mut shifted = x.clone();
    let mut lifted_product = Rational::one();
    for _ in 0..lift {
        lifted_product *= &shifted;
        shifted += Rational::one();
    }
    let y = kernel::from_rational(&shifted, wp);
    let ln_y = kernel::ln(&y, wp);
    let half = kernel::from_rational(&rat(1, 2), wp);
    let two_pi = kernel::pi(wp).mul(&kernel::from_u64(2, wp), wp, kernel::RM);
    let mut sum = y
        .sub(&half, wp, kernel::RM)
        .mul(&ln_y, wp, kernel::RM)
        .sub(&y, wp, kernel::RM)
        .add(&kernel::ln(&two_pi, wp).mul(&half, wp, kernel::RM), wp, kernel::RM);
    let inv_y = kernel::one(wp).div(&y, wp, kernel::RM);
    let inv_y2 = inv_y.mul(&inv_y, wp, kernel::RM);
    let mut power = inv_y;
    let mut converged = false;
    for k in 1..=cfg.series_terms {
        let b = bernoulli(2 * k as u32);
        let coeff = kernel::from_rational(&b, wp)
            .div(&kernel::from_u64((2 * k as u64) * (2 * k as u64 - 1), wp), wp, kernel::RM);
        let term = coeff.mul(&power, wp, kernel::RM);
        sum = sum.add(&term, wp, kernel::RM);
        if kernel::abs_below_pow2(&term, -(target_bits as i64)) {
            converged = true;
            break;
        }
        power = power.mul(&inv_y2, wp, kernel::RM);
    }
    debug_assert!(converged, "series term budget exhausted before the target");
    if lift > 0 {
        let lifted = kernel::from_rational(&lifted_product, wp);
        sum = sum.sub(&kernel::ln(&lifted, wp), wp, kernel::RM);
    }
    Ok(sum)
}

/// ln Gamma(x) for rational `x > 0` under the precision contract.
pub fn lngamma(x: &Rational, p: usize) -> Result<PrecisionReal, GammaError> {
    let v = lngamma_wp(x, kernel::wp(p))?;
    Ok(PrecisionReal::from_bigfloat_rounded(v, p))
}

/// sin(pi x) for rational `x`, by reduction modulo 2 and a power series in
/// `pi x` on `[0, 1/4]` (cosine series on the complementary range).
pub fn sin_pi(x: &Rational, p: usize) -> PrecisionReal {
    let v = kernel::sin_pi(x, kernel::wp(p));
    PrecisionReal::from_bigfloat_rounded(v, p)
}

/// Radical form of sin(pi x) for the handful of arguments with classical
/// nested-radical values; everything else is numeric-only.
pub fn exact_sin_expr(x: &Rational) -> Option<ConstExpr> {
    use ConstExpr as C;
    let table: [(Rational, fn() -> ConstExpr); 6] = [
        (rat(1, 2), || C::int(1)),
        (rat(1, 3), || C::div(C::sqrt(C::int(3)), C::int(2))),
        (rat(1, 4), || C::div(C::int(1), C::sqrt(C::int(2)))),
        (rat(1, 6), || C::Rational(rat(1, 2))),
        (rat(1, 8), || {
            C::div(C::int(1), C::sqrt(C::add(C::int(4), C::sqrt(C::int(8)))))
        }),
        (rat(3, 8), || {
            C::div(C::int(1), C::sqrt(C::sub(C::int(4), C::sqrt(C::int(8)))))
        }),
    ];
    table.iter().find(|(q, _)| q == x).map(|(_, f)| f())
}

/// Value of a balanced periodic product from the gamma-ratio closed form:
/// with `a_j = u_j / P` and `b_j = v_j / P`,
/// `prod_n prod_j (n + a_j)/(n + b_j) = prod_j Gamma(b_j) / prod_j Gamma(a_j)`.
///
/// Computed entirely from ln-gamma, never from partial products.
pub fn eq21_eval(prod: &WallisProduct, p: usize) -> Result<PrecisionReal, GammaError> {
    let num_sum: u128 = prod.num_residues().iter().map(|&r| r as u128).sum();
    let den_sum: u128 = prod.den_residues().iter().map(|&r| r as u128).sum();
    if num_sum != den_sum {
        return Err(GammaError::UnbalancedProduct);
    }
    let wp = kernel::wp(p) + 16;
    let period = BigInt::from(prod.period());
    let mut log_sum = kernel::zero();
    for &v in prod.den_residues() {
        let arg = Rational::new(BigInt::from(v), period.clone());
        log_sum = log_sum.add(&lngamma_wp(&arg, wp)?, wp, kernel::RM);
    }
    for &u in prod.num_residues() {
        let arg = Rational::new(BigInt::from(u), period.clone());
        log_sum = log_sum.sub(&lngamma_wp(&arg, wp)?, wp, kernel::RM);
    }
    Ok(PrecisionReal::from_bigfloat_rounded(
        kernel::exp(&log_sum, wp),
        p,
    ))
}

/// Closed form `(pi/K) / sin(pi/K)` of the general balanced product, using
/// the radical sine values for `K` in {2, 3, 4, 6} and an evaluable
/// `sin(pi/K)` node otherwise.
pub fn eq13_closed_form(k: u64) -> ConstExpr {
    use ConstExpr as C;
    assert!(k >= 2, "defined for K >= 2");
    match k {
        2 => C::div(C::Pi, C::int(2)),
        3 => C::div(C::mul(C::int(2), C::Pi), C::mul(C::int(3), C::sqrt(C::int(3)))),
        4 => C::div(C::mul(C::Pi, C::sqrt(C::int(2))), C::int(4)),
        6 => C::div(C::Pi, C::int(3)),
        _ => C::div(
            C::div(C::Pi, C::Integer(BigInt::from(k))),
            C::SinPi(Rational::new(BigInt::one(), BigInt::from(k))),
        ),
    }
}
