//! Numeric evaluation of both product families.
//!
//! Wallis-type products get exact rational partials (periods are multiplied
//! as big-integer product trees and reduced once) and Richardson-extrapolated
//! limits. Catalan-type products are evaluated in log space throughout: block
//! logs are summed with their scheduled exponents and exponentiated once at
//! the end, so the tiny block exponents never underflow a fixed-precision
//! product. Large blocks of a periodic stream are summed through the
//! ln-gamma form of the finite product `prod_{n=a..b-1} (Pn+u) =
//! P^(b-a) Gamma(b+u/P) / Gamma(a+u/P)`, which keeps deep tails affordable.

use astro_float::BigFloat;
use num::{BigInt, One};
use thiserror::Error;

use crate::gamma::lngamma_wp;
use crate::model::{BlockSchedule, CatalanProduct, FactorStream, WallisProduct};
use crate::numerics::{kernel, rat, PrecisionReal, Rational};

/// How an [`EvalReport`] value was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalMethod {
    ExactPartial,
    Extrapolated,
    Gamma,
    StirlingClosed,
    BlockSum,
}

impl EvalMethod {
    pub fn name(&self) -> &'static str {
        match self {
            EvalMethod::ExactPartial => "exact-partial",
            EvalMethod::Extrapolated => "extrapolated",
            EvalMethod::Gamma => "gamma",
            EvalMethod::StirlingClosed => "stirling-closed",
            EvalMethod::BlockSum => "block-sum",
        }
    }
}

/// Error bound attached to a report: a computed bound, or a heuristic
/// estimate marker for extrapolated values.
#[derive(Debug, Clone)]
pub enum ErrorBound {
    Bound(PrecisionReal),
    Heuristic,
}

/// Result of a numeric evaluation.
#[derive(Debug, Clone)]
pub struct EvalReport {
    pub value: PrecisionReal,
    pub terms_or_blocks_used: u64,
    pub method: EvalMethod,
    pub error_bound: ErrorBound,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("not enough terms for the requested extrapolation depth")]
    InsufficientTerms,
    #[error("tail bound is not decreasing; the block schedule does not converge")]
    NoConvergence,
}

/// Direct per-factor evaluation is used for blocks up to this size; larger
/// blocks of a periodic stream go through the ln-gamma product form.
const DIRECT_BLOCK_THRESHOLD: u128 = 8192;

/// Hard cap on evaluated blocks (the u128 stream positions and tail
/// machinery are comfortable far beyond any practical tolerance).
const MAX_BLOCKS: u64 = 96;

fn product_tree(values: &mut [BigInt]) -> BigInt {
    match values.len() {
        0 => BigInt::one(),
        1 => values[0].clone(),
        n => {
            let (a, b) = values.split_at_mut(n / 2);
            product_tree(a) * product_tree(b)
        }
    }
}

/// Exact partial product over `n_periods` complete periods.
pub fn wallis_partial(prod: &WallisProduct, n_periods: u64) -> Rational {
    wallis_partial_fractions(prod, n_periods * prod.factors_per_period() as u64)
}

/// Exact partial product over the first `n_fractions` printed fractions.
pub fn wallis_partial_fractions(prod: &WallisProduct, n_fractions: u64) -> Rational {
    let k = prod.factors_per_period() as u64;
    let p = prod.period() as u128;
    let mut num: Vec<BigInt> = Vec::with_capacity(n_fractions as usize);
    let mut den: Vec<BigInt> = Vec::with_capacity(n_fractions as usize);
    for t in 0..n_fractions {
        let n = (t / k) as u128;
        let j = (t % k) as usize;
        num.push(BigInt::from(p * n + prod.num_residues()[j] as u128));
        den.push(BigInt::from(p * n + prod.den_residues()[j] as u128));
    }
    Rational::new(product_tree(&mut num), product_tree(&mut den))
}

/// Richardson-extrapolated limit from period partials at `N, N/2, N/4, ...`,
/// assuming the model `P_N = L (1 + c1/N + c2/N^2 + ...)` guaranteed by the
/// balance condition. `levels` is capped at 4; `N` is truncated to a
/// multiple of `2^levels` so the halving is exact.
pub fn wallis_limit_extrapolated(
    prod: &WallisProduct,
    n_periods: u64,
    levels: u32,
    p: usize,
) -> Result<EvalReport, EvalError> {
    let levels = levels.clamp(1, 4);
    let n_eff = n_periods >> levels << levels;
    if n_eff == 0 {
        return Err(EvalError::InsufficientTerms);
    }
    let wp = kernel::wp(p);
    let mut snapshots: Vec<BigFloat> = Vec::with_capacity(levels as usize + 1);
    let targets: Vec<u64> = (0..=levels).rev().map(|j| n_eff >> j).collect();
    let mut acc = kernel::one(wp);
    let mut next_target = 0usize;
    let pp = prod.period() as u128;
    for n in 0..n_eff {
        let mut num: u128 = 1;
        let mut den: u128 = 1;
        let mut overflow = false;
        for j in 0..prod.factors_per_period() {
            let a = pp * n as u128 + prod.num_residues()[j] as u128;
            let b = pp * n as u128 + prod.den_residues()[j] as u128;
            match (num.checked_mul(a), den.checked_mul(b)) {
                (Some(x), Some(y)) => {
                    num = x;
                    den = y;
                }
                _ => {
                    overflow = true;
                    break;
                }
            }
        }
        let step = if overflow {
            let mut num_terms: Vec<BigInt> = (0..prod.factors_per_period())
                .map(|j| BigInt::from(pp * n as u128 + prod.num_residues()[j] as u128))
                .collect();
            let mut den_terms: Vec<BigInt> = (0..prod.factors_per_period())
                .map(|j| BigInt::from(pp * n as u128 + prod.den_residues()[j] as u128))
                .collect();
            kernel::from_bigint(&product_tree(&mut num_terms), wp)
                .div(&kernel::from_bigint(&product_tree(&mut den_terms), wp), wp, kernel::RM)
        } else {
            kernel::from_bigint(&BigInt::from(num), wp)
                .div(&kernel::from_bigint(&BigInt::from(den), wp), wp, kernel::RM)
        };
        acc = acc.mul(&step, wp, kernel::RM);
        if n + 1 == targets[next_target] {
            snapshots.push(acc.clone());
            next_target += 1;
        }
    }
    // Neville-style elimination of successive 1/N powers.
    let mut table = snapshots;
    let levels = levels as usize;
    for k in 1..=levels {
        let factor = kernel::pow2(k as i64, wp);
        let denom = factor.sub(&kernel::one(wp), wp, kernel::RM);
        for j in (k..=levels).rev() {
            table[j] = factor
                .mul(&table[j], wp, kernel::RM)
                .sub(&table[j - 1], wp, kernel::RM)
                .div(&denom, wp, kernel::RM);
        }
    }
    Ok(EvalReport {
        value: PrecisionReal::from_bigfloat_rounded(table[levels].clone(), p),
        terms_or_blocks_used: n_eff,
        method: EvalMethod::Extrapolated,
        error_bound: ErrorBound::Heuristic,
    })
}

/// Log of the product of `size` stream factors starting at position `start`.
fn block_log(stream: &FactorStream, start: u128, size: u128, wp: usize) -> BigFloat {
    match stream {
        FactorStream::Const(c) => {
            let count = kernel::from_bigint(&BigInt::from(size), wp);
            kernel::ln(&kernel::from_rational(c, wp), wp).mul(&count, wp, kernel::RM)
        }
        FactorStream::Pairs { .. } if size <= DIRECT_BLOCK_THRESHOLD => {
            let mut total = kernel::zero();
            let mut acc = kernel::one(wp);
            let mut in_chunk = 0u32;
            for t in start..start + size {
                let (num, den) = stream.factor_terms(t);
                let f = kernel::from_bigint(&num, wp).div(&kernel::from_bigint(&den, wp), wp, kernel::RM);
                acc = acc.mul(&f, wp, kernel::RM);
                in_chunk += 1;
                if in_chunk == 4096 {
                    total = total.add(&kernel::ln(&acc, wp), wp, kernel::RM);
                    acc = kernel::one(wp);
                    in_chunk = 0;
                }
            }
            if in_chunk > 0 {
                total = total.add(&kernel::ln(&acc, wp), wp, kernel::RM);
            }
            total
        }
        FactorStream::Pairs {
            period,
            pairs,
            start_offset,
        } => {
            // Split the block by pair index and collapse each arithmetic run
            // prod_{n=a..b-1} (Pn + r) = P^(b-a) Gamma(b + r/P) / Gamma(a + r/P);
            // the P powers cancel between numerator and denominator runs.
            let s0 = start + *start_offset as u128;
            let s1 = s0 + size;
            let m = pairs.len() as u128;
            // The gamma arguments reach ~s1/m, so pad the working precision by
            // their magnitude: the block log is a small difference of large
            // ln-gamma values.
            let arg_bits = 128 - (s1 / m + 2).leading_zeros() as usize;
            let wpg = wp + 2 * arg_bits + 16;
            let mut total = kernel::zero();
            for (i, &(u, v)) in pairs.iter().enumerate() {
                let i = i as u128;
                let n_lo = (s0 + m - 1 - i) / m; // ceil((s0 - i) / m)
                let n_hi = (s1 + m - 1 - i) / m;
                if n_lo >= n_hi {
                    continue;
                }
                let run = |r: u64, a: u128, b: u128| -> BigFloat {
                    let frac = Rational::new(BigInt::from(r), BigInt::from(*period));
                    let hi = lngamma_wp(&(Rational::from_integer(BigInt::from(b)) + &frac), wpg)
                        .expect("positive argument");
                    let lo = lngamma_wp(&(Rational::from_integer(BigInt::from(a)) + &frac), wpg)
                        .expect("positive argument");
                    hi.sub(&lo, wpg, kernel::RM)
                };
                let num = run(u, n_lo, n_hi);
                let den = run(v, n_lo, n_hi);
                total = total.add(&num.sub(&den, wpg, kernel::RM), wpg, kernel::RM);
            }
            let mut out = total;
            let _ = out.set_precision(wp, kernel::RM);
            out
        }
    }
}

/// Upper bound on `max |ln factor|` over a block starting at `start`, from
/// the bound `|ln(a/b)| <= |a-b| / min(a,b)` applied at the block's first
/// period index (later factors in the block are closer to 1).
fn block_log_bound(stream: &FactorStream, start: u128, wp: usize) -> BigFloat {
    match stream {
        FactorStream::Const(c) => kernel::ln(&kernel::from_rational(c, wp), wp).abs(),
        FactorStream::Pairs {
            period,
            pairs,
            start_offset,
        } => {
            let s = start + *start_offset as u128;
            let n0 = s / pairs.len() as u128;
            let mut best = kernel::zero();
            for &(u, v) in pairs {
                let a = *period as u128 * n0 + u as u128;
                let b = *period as u128 * n0 + v as u128;
                let diff = a.abs_diff(b);
                if diff == 0 {
                    continue;
                }
                let bound = kernel::from_bigint(&BigInt::from(diff), wp).div(
                    &kernel::from_bigint(&BigInt::from(a.min(b)), wp),
                    wp,
                    kernel::RM,
                );
                best = best.max(&bound);
            }
            best
        }
    }
}

/// Tail bound after `n` blocks: `T_n = sum_{k>n} exponent_k * size_k * L_k`
/// with `L_k` the block's factor-log bound. Exact geometric closure where
/// the schedule allows it; otherwise summed term by term and closed with the
/// observed decay ratio (a documented heuristic, conservative for the
/// catalog schedules whose ratios approach `1/K`).
fn tail_bound(prod: &CatalanProduct, after_block: u64, wp: usize) -> Result<BigFloat, EvalError> {
    let schedule = prod.schedule();
    let stream = prod.stream();
    match schedule {
        BlockSchedule::Explicit(_) => {
            let mut total = kernel::zero();
            for block in schedule.blocks().skip(after_block as usize) {
                let l = block_log_bound(stream, block.start, wp);
                let w = kernel::from_rational(&block.exponent, wp);
                let s = kernel::from_bigint(&BigInt::from(block.size), wp);
                total = total.add(&w.mul(&s, wp, kernel::RM).mul(&l, wp, kernel::RM), wp, kernel::RM);
            }
            Ok(total)
        }
        BlockSchedule::Geometric { ratio } => {
            let next = schedule
                .blocks()
                .nth(after_block as usize)
                .expect("geometric schedules are infinite");
            let l = block_log_bound(stream, next.start, wp);
            if l.is_zero() {
                return Ok(kernel::zero());
            }
            if *ratio >= Rational::one() {
                return Err(EvalError::NoConvergence);
            }
            // sum_{k>n} r^k L_k <= L_{n+1} r^(n+1) / (1 - r): exact for a
            // constant stream, an upper bound for periodic ones.
            let r = kernel::from_rational(ratio, wp);
            let first = kernel::from_rational(&next.exponent, wp);
            let denom = kernel::one(wp).sub(&r, wp, kernel::RM);
            Ok(first.mul(&l, wp, kernel::RM).div(&denom, wp, kernel::RM))
        }
        BlockSchedule::Pippenger { .. } => {
            let mut total = kernel::zero();
            let mut prev_term: Option<BigFloat> = None;
            let mut ratio = kernel::one(wp);
            let mut closed = false;
            for block in schedule.blocks().skip(after_block as usize).take(400) {
                let l = block_log_bound(stream, block.start, wp);
                let w = kernel::from_rational(&block.exponent, wp);
                let s = kernel::from_bigint(&BigInt::from(block.size), wp);
                let term = w.mul(&s, wp, kernel::RM).mul(&l, wp, kernel::RM);
                total = total.add(&term, wp, kernel::RM);
                if let Some(prev) = &prev_term {
                    if !prev.is_zero() {
                        ratio = term.div(prev, wp, kernel::RM);
                    }
                }
                if term.is_zero() {
                    closed = true;
                    break;
                }
                // Negligible remainder relative to what is already summed.
                let rel = term.div(&total.clone().max(&kernel::pow2(-(wp as i64 * 2), wp)), wp, kernel::RM);
                if kernel::abs_below_pow2(&rel, -48) {
                    closed = true;
                    // Close with a geometric estimate at the observed ratio.
                    let safety = kernel::from_rational(&rat(21, 20), wp);
                    let r = ratio.mul(&safety, wp, kernel::RM);
                    if r.cmp(&kernel::from_rational(&rat(19, 20), wp)).unwrap_or(1) < 0 {
                        let rem = term.mul(&r, wp, kernel::RM).div(
                            &kernel::one(wp).sub(&r, wp, kernel::RM),
                            wp,
                            kernel::RM,
                        );
                        total = total.add(&rem, wp, kernel::RM);
                    }
                    break;
                }
                prev_term = Some(term);
            }
            if !closed {
                return Err(EvalError::NoConvergence);
            }
            Ok(total)
        }
    }
}

enum StopRule {
    Blocks(u64),
    TailBelow(Rational),
}

fn catalan_eval(prod: &CatalanProduct, stop: StopRule, p: usize) -> Result<EvalReport, EvalError> {
    let wp = kernel::wp(p);
    let bound_wp = 96;
    let mut log_sum = kernel::zero();
    for (factor, exponent) in prod.prefix() {
        let lf = kernel::ln(&kernel::from_rational(factor, wp), wp);
        log_sum = log_sum.add(&kernel::from_rational(exponent, wp).mul(&lf, wp, kernel::RM), wp, kernel::RM);
    }
    let tol = match &stop {
        StopRule::TailBelow(t) => Some(kernel::from_rational(t, bound_wp).abs()),
        StopRule::Blocks(_) => None,
    };
    let mut used = 0u64;
    let mut prev_tail: Option<BigFloat> = None;
    let mut blocks = prod.schedule().blocks();
    let final_tail = loop {
        match &stop {
            StopRule::Blocks(n) => {
                if used >= *n {
                    break tail_bound(prod, used, bound_wp)?;
                }
            }
            StopRule::TailBelow(t) => {
                let tail = tail_bound(prod, used, bound_wp)?;
                if matches!(tail.cmp(tol.as_ref().unwrap()), Some(c) if c <= 0) {
                    break tail;
                }
                if used >= MAX_BLOCKS {
                    return Err(EvalError::NoConvergence);
                }
                if let Some(prev) = &prev_tail {
                    // A non-decreasing bound means the schedule cannot reach
                    // the tolerance.
                    if matches!(tail.cmp(prev), Some(c) if c >= 0) {
                        return Err(EvalError::NoConvergence);
                    }
                }
                let _ = t;
                prev_tail = Some(tail);
            }
        }
        let Some(block) = blocks.next() else {
            break kernel::zero();
        };
        let bl = block_log(prod.stream(), block.start, block.size, wp);
        let w = kernel::from_rational(&block.exponent, wp);
        log_sum = log_sum.add(&w.mul(&bl, wp, kernel::RM), wp, kernel::RM);
        used += 1;
    };
    let value = kernel::exp(&log_sum, wp);
    // Tail bound on the value scale: |exp(S) - exp(S - T)| <= v (e^T - 1)
    // <= v T (1 + T) for T <= 1.
    let t = final_tail;
    let one = kernel::one(wp);
    let bound = value
        .mul(&t, wp, kernel::RM)
        .mul(&one.add(&t, wp, kernel::RM), wp, kernel::RM)
        .abs();
    Ok(EvalReport {
        value: PrecisionReal::from_bigfloat_rounded(value, p),
        terms_or_blocks_used: used,
        method: EvalMethod::BlockSum,
        error_bound: ErrorBound::Bound(PrecisionReal::from_bigfloat_rounded(bound, p)),
    })
}

/// Partial product over the first `n_blocks` blocks (plus the prefix), in
/// log space at working precision.
pub fn catalan_block_partial(prod: &CatalanProduct, n_blocks: u64, p: usize) -> EvalReport {
    catalan_eval(prod, StopRule::Blocks(n_blocks), p)
        .expect("block-partial evaluation needs no tail convergence")
}

/// Evaluate blocks until the tail bound falls below `tol`; the report's
/// error bound is the final tail bound (on the value scale).
pub fn catalan_limit(prod: &CatalanProduct, tol: &Rational, p: usize) -> Result<EvalReport, EvalError> {
    assert!(crate::numerics::is_positive(tol), "tolerance must be positive");
    catalan_eval(prod, StopRule::TailBelow(tol.clone()), p)
}

/// Cumulative block exponent of the ternary construction:
/// `E_n = sum_{k=1..n} 3^(n-k) (2 * 3^(k-1) - 1)`, in closed form
/// `2 n 3^(n-1) - (3^n - 1) / 2`.
pub fn exponent_e(n: u32) -> BigInt {
    assert!(n >= 1);
    let three = BigInt::from(3);
    BigInt::from(2 * n as u64) * three.pow(n - 1) - (three.pow(n) - BigInt::one()) / BigInt::from(2)
}

pub(crate) fn stirling_lnfactorial_wp(n: u64, wp: usize) -> BigFloat {
    if n < 256 {
        let mut terms: Vec<BigInt> = (2..=n).map(BigInt::from).collect();
        let fact = product_tree(&mut terms);
        kernel::ln(&kernel::from_bigint(&fact, wp), wp)
    } else {
        lngamma_wp(&Rational::from_integer(BigInt::from(n) + BigInt::one()), wp)
            .expect("positive argument")
    }
}

/// ln(N!): exact product below 256, Stirling series above.
pub fn stirling_lnfactorial(n: u64, p: usize) -> PrecisionReal {
    assert!(n >= 1);
    PrecisionReal::from_bigfloat_rounded(stirling_lnfactorial_wp(n, kernel::wp(p)), p)
}

/// n-th partial of the square-root-of-e product via its factorial closed
/// form `2^((n+1)/2) ((2^n!)^2 / (2^(n-1)! 2^(n+1)!))^(1/2^n)`, evaluated
/// with ln-factorials in log space.
pub fn closed_partial_sqrt_e(n: u32, p: usize) -> PrecisionReal {
    assert!((1..=62).contains(&n), "power-of-two factorials must fit u64");
    let wp = kernel::wp(p);
    let ln2 = kernel::ln(&kernel::from_u64(2, wp), wp);
    let lead = kernel::from_rational(&rat(n as i64 + 1, 2), wp).mul(&ln2, wp, kernel::RM);
    let mid = stirling_lnfactorial_wp(1 << n, wp);
    let lo = stirling_lnfactorial_wp(1 << (n - 1), wp);
    let hi = stirling_lnfactorial_wp(1 << (n + 1), wp);
    let inner = mid
        .mul(&kernel::from_u64(2, wp), wp, kernel::RM)
        .sub(&lo, wp, kernel::RM)
        .sub(&hi, wp, kernel::RM);
    let scaled = inner.mul(&kernel::pow2(-(n as i64), wp), wp, kernel::RM);
    PrecisionReal::from_bigfloat_rounded(kernel::exp(&lead.add(&scaled, wp, kernel::RM), wp), p)
}

/// n-th partial of the ternary product via
/// `3^(1/3) (3^(E_n) 3^(n-1)! / 3^n!)^(1/3^n)`.
pub fn closed_partial_base3(n: u32, p: usize) -> PrecisionReal {
    assert!((1..=40).contains(&n), "powers of three must fit u64");
    let wp = kernel::wp(p);
    let ln3 = kernel::ln(&kernel::from_u64(3, wp), wp);
    let lead = ln3.div(&kernel::from_u64(3, wp), wp, kernel::RM);
    let e_n = kernel::from_bigint(&exponent_e(n), wp);
    let lo = stirling_lnfactorial_wp(3u64.pow(n - 1), wp);
    let hi = stirling_lnfactorial_wp(3u64.pow(n), wp);
    let inner = e_n
        .mul(&ln3, wp, kernel::RM)
        .add(&lo, wp, kernel::RM)
        .sub(&hi, wp, kernel::RM);
    let scale = kernel::from_rational(
        &Rational::new(BigInt::one(), BigInt::from(3).pow(n)),
        wp,
    );
    let scaled = inner.mul(&scale, wp, kernel::RM);
    PrecisionReal::from_bigfloat_rounded(kernel::exp(&lead.add(&scaled, wp, kernel::RM), wp), p)
}
