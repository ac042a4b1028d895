//! Arbitrary-precision reals with an explicit accuracy contract.
//!
//! [`PrecisionReal`] pairs a value with the precision `p` (in bits) claimed by
//! the operation that produced it. Producing operations evaluate internally at
//! `p + GUARD_BITS` and round once at the end, which keeps the contract
//! `|stored - true| <= 2^(-p+2) * max(1, |true|)` comfortably satisfied.
//!
//! The low-level [`kernel`] module hosts the shared numeric plumbing: the
//! cached pi/e constants, conversions from exact integers and rationals,
//! elementary functions at a requested working precision, and decimal
//! rendering. All rounding uses round-to-even for determinism.

use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign as FloatSign};
use num::bigint::Sign;
use num::{BigInt, ToPrimitive, Zero};
use std::sync::{Mutex, OnceLock};

use super::Rational;

/// Guard bits added to the requested precision for internal evaluation.
pub(crate) const GUARD_BITS: usize = 32;

/// Outcome of a tolerance-aware comparison of two [`PrecisionReal`] values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompareOutcome {
    /// `|a - b|` is within the tolerance even after accounting for the
    /// accuracy slack of both inputs.
    Equal,
    /// `|a - b|` exceeds the tolerance by more than the combined slack.
    Distinct,
    /// The difference falls inside the slack band; the inputs are not
    /// precise enough to decide.
    Inconclusive,
}

/// Tolerance argument accepted by [`PrecisionReal::compare`]: either another
/// tracked real or an exact rational.
#[derive(Debug, Clone)]
pub enum Tolerance {
    Real(PrecisionReal),
    Rational(Rational),
}

impl From<PrecisionReal> for Tolerance {
    fn from(v: PrecisionReal) -> Self {
        Tolerance::Real(v)
    }
}

impl From<Rational> for Tolerance {
    fn from(v: Rational) -> Self {
        Tolerance::Rational(v)
    }
}

impl Tolerance {
    fn to_bigfloat(&self, p: usize) -> BigFloat {
        match self {
            Tolerance::Real(v) => v.bigfloat().clone(),
            Tolerance::Rational(r) => kernel::from_rational(r, p),
        }
    }
}

/// An arbitrary-precision real carrying the precision it was computed to.
#[derive(Debug, Clone)]
pub struct PrecisionReal {
    value: BigFloat,
    prec_bits: usize,
}

#[allow(clippy::should_implement_trait)]
impl PrecisionReal {
    /// Wrap an internally computed value, rounding it to `p` bits.
    pub(crate) fn from_bigfloat_rounded(mut value: BigFloat, p: usize) -> Self {
        let _ = value.set_precision(p.max(1), kernel::RM);
        PrecisionReal {
            value,
            prec_bits: p,
        }
    }

    /// Exact conversion of a rational, rounded to `p` bits.
    pub fn from_rational(r: &Rational, p: usize) -> Self {
        Self::from_bigfloat_rounded(kernel::from_rational(r, kernel::wp(p)), p)
    }

    /// Wrap an `f64` (claims the 53-bit precision of the input unless a
    /// smaller `p` is given).
    pub fn from_f64(v: f64, p: usize) -> Self {
        Self::from_bigfloat_rounded(BigFloat::from_f64(v, p.max(1)), p)
    }

    /// Parse a decimal string at precision `p`.
    pub fn from_decimal_str(s: &str, p: usize) -> Option<Self> {
        let v = kernel::parse_decimal(s, kernel::wp(p))?;
        Some(Self::from_bigfloat_rounded(v, p))
    }

    pub fn precision_bits(&self) -> usize {
        self.prec_bits
    }

    pub fn bigfloat(&self) -> &BigFloat {
        &self.value
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    /// Number of decimal digits justified by the accuracy contract:
    /// `floor(p * log10(2)) - 2`.
    pub fn contract_digits(&self) -> usize {
        let d = (self.prec_bits as f64 * std::f64::consts::LOG10_2).floor() as i64 - 2;
        d.max(1) as usize
    }

    /// Decimal rendering truncated to the contract digit count.
    pub fn decimal(&self) -> String {
        self.to_decimal(self.contract_digits())
    }

    /// Decimal rendering with an explicit significant-digit count.
    pub fn to_decimal(&self, digits: usize) -> String {
        kernel::to_decimal(&self.value, digits)
    }

    /// Lossy `f64` approximation (used for coarse filtering and display).
    pub fn approx_f64(&self) -> f64 {
        kernel::approx_f64(&self.value)
    }

    /// Contract bound on the absolute error: `2^(-p+2) * max(1, |value|)`.
    pub fn abs_error_bound(&self) -> BigFloat {
        let p = self.prec_bits;
        let one = BigFloat::from_word(1, 64);
        let mag = self.value.abs().max(&one);
        let mut scale = BigFloat::from_word(1, p.max(64));
        scale.set_exponent(scale.exponent().unwrap_or(1) - (p as i64 as astro_float::Exponent) + 2);
        mag.mul(&scale, p.max(64), kernel::RM)
    }

    fn binop(&self, other: &PrecisionReal, p: usize, f: impl FnOnce(&BigFloat, &BigFloat, usize) -> BigFloat) -> PrecisionReal {
        let wp = kernel::wp(p.max(self.prec_bits).max(other.prec_bits));
        PrecisionReal::from_bigfloat_rounded(f(&self.value, &other.value, wp), p)
    }

    pub fn add(&self, other: &PrecisionReal, p: usize) -> PrecisionReal {
        self.binop(other, p, |a, b, wp| a.add(b, wp, kernel::RM))
    }

    pub fn sub(&self, other: &PrecisionReal, p: usize) -> PrecisionReal {
        self.binop(other, p, |a, b, wp| a.sub(b, wp, kernel::RM))
    }

    pub fn mul(&self, other: &PrecisionReal, p: usize) -> PrecisionReal {
        self.binop(other, p, |a, b, wp| a.mul(b, wp, kernel::RM))
    }

    pub fn div(&self, other: &PrecisionReal, p: usize) -> PrecisionReal {
        self.binop(other, p, |a, b, wp| a.div(b, wp, kernel::RM))
    }

    pub fn exp(&self, p: usize) -> PrecisionReal {
        let wp = kernel::wp(p.max(self.prec_bits));
        PrecisionReal::from_bigfloat_rounded(kernel::exp(&self.value, wp), p)
    }

    pub fn ln(&self, p: usize) -> PrecisionReal {
        let wp = kernel::wp(p.max(self.prec_bits));
        PrecisionReal::from_bigfloat_rounded(kernel::ln(&self.value, wp), p)
    }

    /// Plain magnitude test `|self - other| <= tol`, computed above both
    /// operands' precision (no slack semantics; see [`Self::compare`] for
    /// the contract-aware version).
    pub fn diff_within(&self, other: &PrecisionReal, tol: &Rational) -> bool {
        let wp = kernel::wp(self.prec_bits.max(other.prec_bits).max(64));
        let diff = self.value.sub(&other.value, wp, kernel::RM).abs();
        let tol = kernel::from_rational(tol, wp).abs();
        matches!(diff.cmp(&tol), Some(c) if c <= 0)
    }

    /// Tolerance-aware comparison honouring both inputs' accuracy slack.
    ///
    /// `Equal` iff `|a-b| <= tol - slack`, `Distinct` iff `|a-b| > tol + slack`
    /// where `slack` is the sum of both contract error bounds; `Inconclusive`
    /// otherwise. Symmetric in `a` and `b`.
    pub fn compare(&self, other: &PrecisionReal, tol: &Tolerance) -> CompareOutcome {
        let p = self.prec_bits.max(other.prec_bits).max(64);
        let wp = kernel::wp(p);
        let diff = self.value.sub(&other.value, wp, kernel::RM).abs();
        let slack = self
            .abs_error_bound()
            .add(&other.abs_error_bound(), wp, kernel::RM);
        let tol = tol.to_bigfloat(wp).abs();
        let lo = tol.sub(&slack, wp, kernel::RM);
        let hi = tol.add(&slack, wp, kernel::RM);
        if matches!(diff.cmp(&lo), Some(c) if c <= 0) {
            CompareOutcome::Equal
        } else if matches!(diff.cmp(&hi), Some(c) if c > 0) {
            CompareOutcome::Distinct
        } else {
            CompareOutcome::Inconclusive
        }
    }
}

/// Parse a tolerance-style argument: `p/q`, plain decimals, or scientific
/// notation (`1e-12`), exactly, into a rational.
pub fn parse_decimal_or_fraction(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let num: BigInt = n.trim().parse().ok()?;
        let den: BigInt = d.trim().parse().ok()?;
        if den.is_zero() {
            return None;
        }
        return Some(Rational::new(num, den));
    }
    let (mant, exp) = match s.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i64>().ok()?),
        None => (s, 0),
    };
    let (int_part, frac_part) = match mant.split_once('.') {
        Some((i, f)) => (i, f),
        None => (mant, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    let digits = format!("{}{}", int_part, frac_part);
    let digits = if digits.is_empty() || digits == "-" || digits == "+" {
        return None;
    } else {
        digits
    };
    let num: BigInt = digits.parse().ok()?;
    let shift = exp - frac_part.len() as i64;
    let ten = BigInt::from(10);
    if shift >= 0 {
        Some(Rational::from_integer(num * ten.pow(shift as u32)))
    } else {
        Some(Rational::new(num, ten.pow((-shift) as u32)))
    }
}

/// Shared low-level numeric plumbing on raw [`BigFloat`] values.
pub(crate) mod kernel {
    use super::*;

    pub(crate) const RM: RoundingMode = RoundingMode::ToEven;

    /// Working precision for a requested precision `p`.
    pub(crate) fn wp(p: usize) -> usize {
        p + GUARD_BITS
    }

    fn consts() -> &'static Mutex<Consts> {
        static CONSTS: OnceLock<Mutex<Consts>> = OnceLock::new();
        CONSTS.get_or_init(|| Mutex::new(Consts::new().expect("constant cache allocation")))
    }

    /// pi at precision `p`; computed once per precision level and cached.
    pub(crate) fn pi(p: usize) -> BigFloat {
        consts().lock().unwrap().pi(p, RM)
    }

    /// e at precision `p`, cached like [`pi`].
    pub(crate) fn e(p: usize) -> BigFloat {
        consts().lock().unwrap().e(p, RM)
    }

    pub(crate) fn zero() -> BigFloat {
        BigFloat::from_word(0, 64)
    }

    pub(crate) fn one(p: usize) -> BigFloat {
        BigFloat::from_word(1, p.max(64))
    }

    pub(crate) fn from_u64(v: u64, p: usize) -> BigFloat {
        BigFloat::from_u64(v, p.max(64))
    }

    /// 2^k as a float (exact).
    pub(crate) fn pow2(k: i64, p: usize) -> BigFloat {
        let mut v = one(p);
        v.set_exponent(1 + k as astro_float::Exponent);
        v
    }

    /// Convert a big integer, keeping at most `p + 64` leading bits (exact
    /// whenever the integer fits).
    pub(crate) fn from_bigint(i: &BigInt, p: usize) -> BigFloat {
        if i.is_zero() {
            return zero();
        }
        let sign = if i.sign() == Sign::Minus {
            FloatSign::Neg
        } else {
            FloatSign::Pos
        };
        let mag = i.magnitude();
        let words: Vec<u64> = mag.iter_u64_digits().collect();
        let total_bits = (words.len() * 64) as i64;
        let keep = (p + 64) / 64 + 1;
        let used = if words.len() > keep {
            &words[words.len() - keep..]
        } else {
            &words[..]
        };
        // from_words treats the slice as an integer scaled by 2^(e - 64*len).
        let e = total_bits
            .min(astro_float::EXPONENT_MAX as i64)
            .max(astro_float::EXPONENT_MIN as i64) as astro_float::Exponent;
        let dropped = words.len() - used.len();
        let mut v = BigFloat::from_words(used, sign, (used.len() * 64) as astro_float::Exponent);
        if dropped > 0 {
            let cur = v.exponent().unwrap_or(0);
            v.set_exponent(cur + (dropped as i64 * 64) as astro_float::Exponent);
        }
        debug_assert!(e as i64 <= i64::from(astro_float::EXPONENT_MAX));
        let _ = v.set_precision(p.max(64), RM);
        v
    }

    /// Exact-as-possible rational conversion at precision `p`.
    pub(crate) fn from_rational(r: &Rational, p: usize) -> BigFloat {
        let num = from_bigint(r.numer(), p + 64);
        let den = from_bigint(r.denom(), p + 64);
        num.div(&den, p.max(64), RM)
    }

    pub(crate) fn ln(x: &BigFloat, p: usize) -> BigFloat {
        x.ln(p, RM, &mut consts().lock().unwrap())
    }

    pub(crate) fn exp(x: &BigFloat, p: usize) -> BigFloat {
        x.exp(p, RM, &mut consts().lock().unwrap())
    }

    pub(crate) fn sqrt(x: &BigFloat, p: usize) -> BigFloat {
        x.sqrt(p, RM)
    }

    /// `x^q` for positive `x` and rational `q`; integer exponents use exact
    /// binary powering.
    pub(crate) fn pow_rational(x: &BigFloat, q: &Rational, p: usize) -> BigFloat {
        if q.is_integer() {
            if let Some(n) = q.numer().to_i64() {
                if n == 0 {
                    return one(p);
                }
                let powed = x.powi(n.unsigned_abs() as usize, p, RM);
                return if n < 0 {
                    powed.reciprocal(p, RM)
                } else {
                    powed
                };
            }
        }
        let qf = from_rational(q, p);
        exp(&qf.mul(&ln(x, p), p, RM), p)
    }

    /// True if `|x| < 2^k` (zero always qualifies).
    pub(crate) fn abs_below_pow2(x: &BigFloat, k: i64) -> bool {
        if x.is_zero() {
            return true;
        }
        match x.exponent() {
            Some(e) => (e as i64) <= k,
            None => false,
        }
    }

    /// sin(pi * x) for rational `x`: reduce modulo 2, fold into [0, 1/4] by
    /// symmetry, then sum the sine or cosine power series in pi*x.
    pub(crate) fn sin_pi(x: &Rational, p: usize) -> BigFloat {
        let two = Rational::from_integer(BigInt::from(2));
        let mut r = x - (x / &two).floor() * &two; // r in [0, 2)
        let mut negate = false;
        if r >= Rational::from_integer(BigInt::from(1)) {
            negate = true;
            r -= Rational::from_integer(BigInt::from(1));
        }
        let half = Rational::new(BigInt::from(1), BigInt::from(2));
        if r > half {
            r = Rational::from_integer(BigInt::from(1)) - r;
        }
        let quarter = Rational::new(BigInt::from(1), BigInt::from(4));
        let pi_v = pi(p);
        let v = if r <= quarter {
            let y = pi_v.mul(&from_rational(&r, p), p, RM);
            sin_series(&y, p)
        } else {
            let y = pi_v.mul(&from_rational(&(half - r), p), p, RM);
            cos_series(&y, p)
        };
        if negate {
            v.neg()
        } else {
            v
        }
    }

    fn sin_series(y: &BigFloat, p: usize) -> BigFloat {
        let y2 = y.mul(y, p, RM);
        let mut term = y.clone();
        let mut sum = y.clone();
        let mut k: u64 = 1;
        while !abs_below_pow2(&term, -((p + 8) as i64)) {
            term = term
                .mul(&y2, p, RM)
                .div(&from_u64((2 * k) * (2 * k + 1), p), p, RM)
                .neg();
            sum = sum.add(&term, p, RM);
            k += 1;
        }
        sum
    }

    fn cos_series(y: &BigFloat, p: usize) -> BigFloat {
        let y2 = y.mul(y, p, RM);
        let mut term = one(p);
        let mut sum = one(p);
        let mut k: u64 = 1;
        while !abs_below_pow2(&term, -((p + 8) as i64)) {
            term = term
                .mul(&y2, p, RM)
                .div(&from_u64((2 * k - 1) * (2 * k), p), p, RM)
                .neg();
            sum = sum.add(&term, p, RM);
            k += 1;
        }
        sum
    }

    /// Lossy f64 approximation from the top mantissa word.
    pub(crate) fn approx_f64(x: &BigFloat) -> f64 {
        if x.is_zero() {
            return 0.0;
        }
        let Some(words) = x.mantissa_digits() else {
            return f64::NAN;
        };
        let Some(&top) = words.last() else {
            return 0.0;
        };
        let e = x.exponent().unwrap_or(0);
        let sign = match x.sign() {
            Some(FloatSign::Neg) => -1.0,
            _ => 1.0,
        };
        sign * (top as f64 / 18446744073709551616.0) * 2f64.powi(e)
    }

    pub(crate) fn parse_decimal(s: &str, p: usize) -> Option<BigFloat> {
        let v = BigFloat::parse(s, Radix::Dec, p.max(64), RM, &mut consts().lock().unwrap());
        if v.is_nan() {
            None
        } else {
            Some(v)
        }
    }

    /// Render with `digits` significant decimal digits (round half up on the
    /// digit after the last kept one).
    pub(crate) fn to_decimal(x: &BigFloat, digits: usize) -> String {
        let digits = digits.max(1);
        if x.is_zero() {
            return "0".into();
        }
        if x.is_nan() {
            return "nan".into();
        }
        if x.is_inf() {
            return if x.is_inf_neg() { "-inf" } else { "inf" }.into();
        }
        let (sign, mut digs, mut e10) = match x.convert_to_radix(Radix::Dec, RM, &mut consts().lock().unwrap())
        {
            Ok(t) => t,
            Err(_) => return "nan".into(),
        };
        // Strip leading zero digits (convert_to_radix may emit them).
        let lead = digs.iter().take_while(|&&d| d == 0).count();
        digs.drain(..lead);
        e10 -= 0; // exponent counts digits before the point; leading zeros do not occur after drain for normalized input
        if digs.is_empty() {
            return "0".into();
        }
        // Round to `digits` significant digits.
        if digs.len() > digits {
            let round_up = digs[digits] >= 5;
            digs.truncate(digits);
            if round_up {
                let mut i = digits;
                loop {
                    if i == 0 {
                        digs.insert(0, 1);
                        e10 += 1;
                        digs.truncate(digits);
                        break;
                    }
                    i -= 1;
                    if digs[i] == 9 {
                        digs[i] = 0;
                    } else {
                        digs[i] += 1;
                        break;
                    }
                }
            }
        }
        let sign_str = if sign == FloatSign::Neg { "-" } else { "" };
        let e10 = e10 as i64;
        // Trailing fractional zeros carry no information here; trim them
        // rather than padding to the requested width.
        let trim = |v: &[u8], keep_min: usize| -> Vec<u8> {
            let mut end = v.len();
            while end > keep_min && v[end - 1] == 0 {
                end -= 1;
            }
            v[..end].to_vec()
        };
        if e10 >= 1 && e10 <= digits as i64 {
            if digs.len() < e10 as usize {
                digs.resize(e10 as usize, 0);
            }
            let digs = trim(&digs, e10 as usize);
            let dstr: String = digs.iter().map(|d| char::from(b'0' + d)).collect();
            let (int_part, frac_part) = dstr.split_at(e10 as usize);
            if frac_part.is_empty() {
                format!("{}{}", sign_str, int_part)
            } else {
                format!("{}{}.{}", sign_str, int_part, frac_part)
            }
        } else if e10 <= 0 && e10 > -4 {
            let digs = trim(&digs, 1);
            let dstr: String = digs.iter().map(|d| char::from(b'0' + d)).collect();
            format!("{}0.{}{}", sign_str, "0".repeat((-e10) as usize), dstr)
        } else {
            let digs = trim(&digs, 1);
            let dstr: String = digs.iter().map(|d| char::from(b'0' + d)).collect();
            let (first, rest) = dstr.split_at(1);
            if rest.is_empty() {
                format!("{}{}e{}", sign_str, first, e10 - 1)
            } else {
                format!("{}{}.{}e{}", sign_str, first, rest, e10 - 1)
            }
        }
    }
}
