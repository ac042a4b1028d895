//! Independent fixed-point constant oracle for the acceptance suite.
//!
//! Values are big integers scaled by `2^SCALE`, computed with classical
//! integer-only algorithms (Machin's arctangent formula for pi, the
//! factorial series for e, integer Newton roots). Nothing here touches the
//! crate's float stack, so agreements are genuine cross-checks.

use num::bigint::BigInt;
use num::{BigRational, One, Signed, Zero};
use prodlab::PrecisionReal;

/// Scale bits: ~84 decimal digits, comfortably past every tolerance used.
pub const SCALE: u32 = 280;

pub fn fx_one() -> BigInt {
    BigInt::one() << SCALE
}

pub fn fx_from_u64(v: u64) -> BigInt {
    BigInt::from(v) << SCALE
}

pub fn fx_mul(a: &BigInt, b: &BigInt) -> BigInt {
    (a * b) >> SCALE
}

pub fn fx_div(a: &BigInt, b: &BigInt) -> BigInt {
    (a << SCALE) / b
}

/// Floor square root in fixed point.
pub fn fx_sqrt(a: &BigInt) -> BigInt {
    (a << SCALE).sqrt()
}

/// Floor n-th root in fixed point.
pub fn fx_nth_root(a: &BigInt, n: u32) -> BigInt {
    (a << (SCALE * (n - 1))).nth_root(n)
}

/// arctan(1/x) by the alternating integer series.
fn atan_inv(x: u64) -> BigInt {
    let x2 = BigInt::from(x) * BigInt::from(x);
    let mut power = fx_one() / BigInt::from(x);
    let mut sum = power.clone();
    let mut k = 1u64;
    loop {
        power /= &x2;
        if power.is_zero() {
            break;
        }
        let term = &power / BigInt::from(2 * k + 1);
        if k % 2 == 1 {
            sum -= term;
        } else {
            sum += term;
        }
        k += 1;
    }
    sum
}

/// pi = 16 arctan(1/5) - 4 arctan(1/239).
pub fn fx_pi() -> BigInt {
    BigInt::from(16) * atan_inv(5) - BigInt::from(4) * atan_inv(239)
}

/// e = sum 1/k!.
pub fn fx_e() -> BigInt {
    let mut term = fx_one();
    let mut sum = fx_one();
    let mut k = 1u64;
    while !term.is_zero() {
        term /= BigInt::from(k);
        sum += &term;
        k += 1;
    }
    sum
}

/// sin(y) for 0 <= y <= 2 by the alternating power series.
pub fn fx_sin(y: &BigInt) -> BigInt {
    assert!(!y.is_negative() && *y <= fx_from_u64(2));
    let y2 = fx_mul(y, y);
    let mut term = y.clone();
    let mut sum = y.clone();
    let mut k = 1u64;
    while !term.is_zero() {
        term = fx_mul(&term, &y2) / BigInt::from((2 * k) * (2 * k + 1));
        if k % 2 == 1 {
            sum -= &term;
        } else {
            sum += &term;
        }
        k += 1;
    }
    sum
}

/// Exact rational view of a fixed-point value.
pub fn fx_rational(v: &BigInt) -> BigRational {
    BigRational::new(v.clone(), BigInt::one() << SCALE)
}

/// Lift a fixed-point value into the crate's tracked-precision type.
pub fn fx_real(v: &BigInt, p: usize) -> PrecisionReal {
    PrecisionReal::from_rational(&fx_rational(v), p)
}

