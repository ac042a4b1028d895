//! Numeric exploration of the general-base exponential products: estimate
//! the limit of the base-K construction, then search for a closed form of
//! shape `e^x * K^y * r` with small rational `x`, `y`, `r`.
//!
//! The recognition basis deliberately excludes pi: a pi-valued input should
//! fail loudly (empty candidate list) rather than be force-fitted.

use num::{BigInt, One, ToPrimitive, Zero};
use thiserror::Error;

use crate::eval::{catalan_block_partial, ErrorBound, EvalError, EvalReport};
use crate::model::pippenger_general;
use crate::numerics::{kernel, rat, ConstExpr, PrecisionReal, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConjectureError {
    #[error("factor budget exceeded: {total} factors requested, limit {limit}")]
    BudgetExceeded { total: u128, limit: u128 },
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Hard cap on the number of stream factors an estimation may touch.
pub const FACTOR_BUDGET: u128 = 10_000_000;

/// Default block count for limit estimation (deep enough for a sub-1e-5
/// tail at every base from 4 up, while staying within budget at base 5).
pub const DEFAULT_BLOCKS: u64 = 10;
/// Default denominator bound of the recognition search.
pub const DEFAULT_Q_MAX: u32 = 12;
/// Default numerator/denominator bound for the rational multiplier.
pub const DEFAULT_R_MAX: u32 = 64;

/// One closed-form candidate `e^x * K^y * r` with its log-scale residual.
#[derive(Debug, Clone)]
pub struct RecognitionCandidate {
    pub base: u64,
    pub x: Rational,
    pub y: Rational,
    pub r: Rational,
    pub residual: PrecisionReal,
}

impl RecognitionCandidate {
    /// Denominator complexity used for ranking.
    pub fn complexity(&self) -> u64 {
        let d = |q: &Rational| q.denom().to_u64().unwrap_or(u64::MAX);
        d(&self.x) + d(&self.y) + d(&self.r)
    }

    /// The candidate as an expression, with unit factors dropped.
    pub fn expr(&self) -> ConstExpr {
        use ConstExpr as C;
        let mut parts: Vec<ConstExpr> = Vec::new();
        if !self.x.is_zero() {
            if self.x.is_one() {
                parts.push(C::E);
            } else {
                parts.push(C::pow(C::E, self.x.clone()));
            }
        }
        if !self.y.is_zero() {
            parts.push(C::pow(C::Integer(BigInt::from(self.base)), self.y.clone()));
        }
        if !self.r.is_one() || parts.is_empty() {
            parts.push(C::Rational(self.r.clone()));
        }
        let mut iter = parts.into_iter();
        let first = iter.next().expect("at least one part");
        iter.fold(first, ConstExpr::mul)
    }
}

/// Estimate the limit of the base-K construction truncated at `n_blocks`,
/// with its tail bound, enforcing the factor budget
/// `1 + sum_{k=2..n} 2(K-1)K^(k-2) <= 10^7`.
pub fn estimate_general_limit(k: u64, n_blocks: u64, p: usize) -> Result<EvalReport, ConjectureError> {
    assert!(k >= 2, "base must be at least 2");
    let total: Option<u128> = (k as u128)
        .checked_pow(n_blocks.saturating_sub(1) as u32)
        .and_then(|v| v.checked_mul(2))
        .map(|v| v - 1);
    match total {
        Some(total) if total <= FACTOR_BUDGET => {}
        _ => {
            return Err(ConjectureError::BudgetExceeded {
                total: total.unwrap_or(u128::MAX),
                limit: FACTOR_BUDGET,
            })
        }
    }
    Ok(catalan_block_partial(&pippenger_general(k), n_blocks, p))
}

/// Exhaustive search for `e^x * K^y * r` with `x = p1/q1`, `y = p2/q2`,
/// `|x|, |y| <= 4`, `q <= q_max`, and `r` a positive rational with numerator
/// and denominator at most `r_max`, matching `ln value` within `10^-30`.
/// Candidates are sorted by denominator complexity, then residual, then
/// lexicographically on `(x, y, r)`.
pub fn recognize_constant(
    value: &PrecisionReal,
    k: u64,
    q_max: u32,
    r_max: u32,
) -> Vec<RecognitionCandidate> {
    recognize_with_threshold(value, k, q_max, r_max, &rat(1, 10).pow(30))
}

/// [`recognize_constant`] with an explicit residual threshold (used by the
/// report generator, whose inputs carry block-truncation error far above
/// the strict default).
pub fn recognize_with_threshold(
    value: &PrecisionReal,
    k: u64,
    q_max: u32,
    r_max: u32,
    threshold: &Rational,
) -> Vec<RecognitionCandidate> {
    assert!(k >= 2 && q_max >= 1 && r_max >= 1);
    let wp = kernel::wp(value.precision_bits().max(192));
    let ln_value = kernel::ln(value.bigfloat(), wp);
    let ln_k = kernel::ln(&kernel::from_u64(k, wp), wp);
    let ln_value_f = kernel::approx_f64(&ln_value);
    let ln_k_f = (k as f64).ln();
    let threshold_f = threshold
        .to_f64()
        .unwrap_or(1e-30)
        .max(1e-30);
    let prefilter = threshold_f * 1.5 + 1e-13;

    let fractions: Vec<(i64, i64, f64)> = {
        let mut out = Vec::new();
        for q in 1..=q_max as i64 {
            for p in -4 * q..=4 * q {
                if p == 0 && q != 1 {
                    continue;
                }
                if num::integer::gcd(p.unsigned_abs(), q as u64) != 1 {
                    continue;
                }
                out.push((p, q, p as f64 / q as f64));
            }
        }
        out
    };

    // Coarse f64 scan over (x, y), solving for the rational multiplier.
    let mut survivors: Vec<(i64, i64, i64, i64, u64, u64, f64)> = Vec::new();
    for &(p1, q1, xf) in &fractions {
        for &(p2, q2, yf) in &fractions {
            let t = ln_value_f - xf - yf * ln_k_f;
            let r = t.exp();
            if !(1.0 / (r_max as f64 + 1.0)..=r_max as f64 + 1.0).contains(&r) {
                continue;
            }
            for q3 in 1..=r_max as u64 {
                let p3 = (r * q3 as f64).round() as u64;
                if p3 < 1 || p3 > r_max as u64 || num::integer::gcd(p3, q3) != 1 {
                    continue;
                }
                let err = (t - (p3 as f64 / q3 as f64).ln()).abs();
                if err <= prefilter {
                    survivors.push((p1, q1, p2, q2, p3, q3, err));
                }
            }
        }
    }
    // Rank cheap, verify exactly, cap the exact pass for loose thresholds.
    survivors.sort_by(|a, b| {
        let ca = a.1 as u64 + a.3 as u64 + a.5;
        let cb = b.1 as u64 + b.3 as u64 + b.5;
        ca.cmp(&cb).then(a.6.total_cmp(&b.6))
    });
    survivors.truncate(500);

    let threshold_bf = kernel::from_rational(threshold, wp).abs();
    let mut seen = std::collections::BTreeSet::new();
    let mut out: Vec<RecognitionCandidate> = Vec::new();
    for (p1, q1, p2, q2, p3, q3, _) in survivors {
        let x = rat(p1, q1);
        let raw_y = rat(p2, q2);
        let raw_r = Rational::new(BigInt::from(p3), BigInt::from(q3));
        // Powers of the base hiding inside r duplicate candidates
        // (e.g. e * 2^-3 * 4 is e * 2^-1); canonicalize r to be coprime to K.
        let (shift, r) = strip_base_powers(&raw_r, k);
        let y = raw_y + Rational::from_integer(BigInt::from(shift));
        if !seen.insert((x.clone(), y.clone(), r.clone())) {
            continue;
        }
        let residual = ln_value
            .sub(&kernel::from_rational(&x, wp), wp, kernel::RM)
            .sub(
                &kernel::from_rational(&y, wp).mul(&ln_k, wp, kernel::RM),
                wp,
                kernel::RM,
            )
            .sub(&kernel::ln(&kernel::from_rational(&r, wp), wp), wp, kernel::RM)
            .abs();
        if matches!(residual.cmp(&threshold_bf), Some(c) if c < 0) {
            out.push(RecognitionCandidate {
                base: k,
                x,
                y,
                r,
                residual: PrecisionReal::from_bigfloat_rounded(residual, value.precision_bits()),
            });
        }
    }
    out.sort_by(|a, b| {
        a.complexity()
            .cmp(&b.complexity())
            .then_with(|| {
                a.residual
                    .bigfloat()
                    .cmp(b.residual.bigfloat())
                    .unwrap_or(0)
                    .cmp(&0)
            })
            .then_with(|| a.x.cmp(&b.x))
            .then_with(|| a.y.cmp(&b.y))
            .then_with(|| a.r.cmp(&b.r))
    });
    out
}

/// Split `r` into `K^shift * r'` with `r'` coprime to `K`.
fn strip_base_powers(r: &Rational, k: u64) -> (i64, Rational) {
    let k_big = BigInt::from(k);
    let strip = |mut v: BigInt| -> (i64, BigInt) {
        let mut count = 0i64;
        while !v.is_zero() && (&v % &k_big).is_zero() {
            v /= &k_big;
            count += 1;
        }
        (count, v)
    };
    let (a, num) = strip(r.numer().clone());
    let (b, den) = strip(r.denom().clone());
    (a - b, Rational::new(num, den))
}

/// One row of the exploration report.
#[derive(Debug, Clone)]
pub struct ConjectureRow {
    pub base: u64,
    pub estimate: PrecisionReal,
    pub tail_bound: PrecisionReal,
    pub blocks_used: u64,
    /// False only for the two bases whose closed forms are established.
    pub conjectural: bool,
    pub recognition_threshold: Rational,
    pub candidates: Vec<RecognitionCandidate>,
}

/// Fitted dependence of the recognized exponents on the base, when one rule
/// covers every recognized row. Always labelled conjectural.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrendFit {
    pub x_rule: Option<String>,
    pub y_rule: Option<String>,
}

#[derive(Debug, Clone)]
pub struct ConjectureReport {
    pub precision_bits: usize,
    pub rows: Vec<ConjectureRow>,
    pub trend: Option<TrendFit>,
}

/// Estimate, recognize, and fit trends across a range of bases.
pub fn conjecture_report(
    bases: &[u64],
    n_blocks: u64,
    p: usize,
) -> Result<ConjectureReport, ConjectureError> {
    let mut rows = Vec::new();
    for &k in bases {
        let report = estimate_general_limit(k, n_blocks, p)?;
        let tail = match &report.error_bound {
            ErrorBound::Bound(b) => b.clone(),
            ErrorBound::Heuristic => PrecisionReal::from_rational(&Rational::zero(), p),
        };
        // Loosen the match threshold to the estimate's own accuracy.
        let tail_f = tail.approx_f64().abs();
        let threshold = if tail_f > 0.0 {
            let loose = Rational::from_float(4.0 * tail_f / report.value.approx_f64().abs())
                .unwrap_or_else(|| rat(1, 10).pow(30));
            loose.max(rat(1, 10).pow(30))
        } else {
            rat(1, 10).pow(30)
        };
        let mut candidates =
            recognize_with_threshold(&report.value, k, DEFAULT_Q_MAX, DEFAULT_R_MAX, &threshold);
        candidates.truncate(3);
        rows.push(ConjectureRow {
            base: k,
            estimate: report.value,
            tail_bound: tail,
            blocks_used: report.terms_or_blocks_used,
            conjectural: !(k == 2 || k == 3),
            recognition_threshold: threshold,
            candidates,
        });
    }
    let trend = fit_trend(&rows);
    Ok(ConjectureReport {
        precision_bits: p,
        rows,
        trend,
    })
}

fn fit_rule(points: &[(u64, Rational)]) -> Option<String> {
    if points.len() < 2 {
        return None;
    }
    // Try x = a/K, then a/(K-1), then a + b/K.
    let all = |f: &dyn Fn(u64) -> Rational| points.iter().all(|(k, v)| f(*k) == *v);
    let a = points[0].1.clone() * Rational::from_integer(BigInt::from(points[0].0));
    if all(&|k| a.clone() / Rational::from_integer(BigInt::from(k))) {
        return Some(format!("{a}/K"));
    }
    let a = points[0].1.clone() * Rational::from_integer(BigInt::from(points[0].0 - 1));
    if all(&|k| a.clone() / Rational::from_integer(BigInt::from(k - 1))) {
        return Some(format!("{a}/(K-1)"));
    }
    let (k0, v0) = (&points[0].0, &points[0].1);
    let (k1, v1) = (&points[1].0, &points[1].1);
    // v = a + b/K through the first two points.
    let inv = |k: u64| Rational::new(BigInt::one(), BigInt::from(k));
    let b = (v0.clone() - v1.clone()) / (inv(*k0) - inv(*k1));
    let a = v0.clone() - b.clone() * inv(*k0);
    if all(&|k| a.clone() + b.clone() * inv(k)) {
        return Some(format!("{a} + ({b})/K"));
    }
    None
}

fn fit_trend(rows: &[ConjectureRow]) -> Option<TrendFit> {
    let collect = |established_only: bool| -> Vec<(u64, Rational, Rational)> {
        rows.iter()
            .filter(|row| !established_only || !row.conjectural)
            .filter_map(|row| {
                row.candidates
                    .first()
                    .map(|c| (row.base, c.x.clone(), c.y.clone()))
            })
            .collect()
    };
    // Prefer a rule covering every recognized row; coarse recognitions at
    // unproven bases may be noise, so fall back to the established rows.
    for established_only in [false, true] {
        let recognized = collect(established_only);
        if recognized.len() < 2 {
            continue;
        }
        let x_points: Vec<(u64, Rational)> =
            recognized.iter().map(|(k, x, _)| (*k, x.clone())).collect();
        let y_points: Vec<(u64, Rational)> =
            recognized.iter().map(|(k, _, y)| (*k, y.clone())).collect();
        let fit = TrendFit {
            x_rule: fit_rule(&x_points),
            y_rule: fit_rule(&y_points),
        };
        if fit.x_rule.is_some() || fit.y_rule.is_some() {
            return Some(fit);
        }
    }
    None
}
