//! Symbolic closed-form constant expressions and their evaluation.
//!
//! [`ConstExpr`] carries no simplification pass: expressions are compared by
//! evaluating them, not structurally. The tree covers everything the closed
//! forms in the builtin catalog need (pi, e, integers, rationals, field
//! operations, square roots, rational powers, and `sin(pi * q)` for the
//! general gamma-ratio limits).

use num::BigInt;

use super::real::{kernel, PrecisionReal};
use super::{NumericsError, Rational};
use astro_float::BigFloat;

/// Closed-form constant expression tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConstExpr {
    Pi,
    E,
    Integer(BigInt),
    Rational(Rational),
    Add(Box<ConstExpr>, Box<ConstExpr>),
    Sub(Box<ConstExpr>, Box<ConstExpr>),
    Mul(Box<ConstExpr>, Box<ConstExpr>),
    Div(Box<ConstExpr>, Box<ConstExpr>),
    Sqrt(Box<ConstExpr>),
    /// Base raised to a rational exponent.
    Pow(Box<ConstExpr>, Rational),
    /// `sin(pi * q)` for rational `q`; kept evaluable rather than expanded,
    /// since only a handful of arguments have radical forms.
    SinPi(Rational),
}

#[allow(clippy::should_implement_trait)]
impl ConstExpr {
    pub fn int(v: i64) -> Self {
        ConstExpr::Integer(BigInt::from(v))
    }

    pub fn add(a: ConstExpr, b: ConstExpr) -> Self {
        ConstExpr::Add(Box::new(a), Box::new(b))
    }

    pub fn sub(a: ConstExpr, b: ConstExpr) -> Self {
        ConstExpr::Sub(Box::new(a), Box::new(b))
    }

    pub fn mul(a: ConstExpr, b: ConstExpr) -> Self {
        ConstExpr::Mul(Box::new(a), Box::new(b))
    }

    pub fn div(a: ConstExpr, b: ConstExpr) -> Self {
        ConstExpr::Div(Box::new(a), Box::new(b))
    }

    pub fn sqrt(a: ConstExpr) -> Self {
        ConstExpr::Sqrt(Box::new(a))
    }

    pub fn pow(a: ConstExpr, q: Rational) -> Self {
        ConstExpr::Pow(Box::new(a), q)
    }

    /// Infix rendering: `pi`, `e`, `sqrt(x)`, `x^(p/q)`, e.g.
    /// `pi/(4*sqrt(2-sqrt(2)))`.
    pub fn render(&self) -> String {
        self.render_prec(0)
    }

    // Precedence: 1 additive, 2 multiplicative, 3 power operand, 4 atom.
    fn render_prec(&self, parent: u8) -> String {
        let (s, prec) = match self {
            ConstExpr::Pi => ("pi".to_string(), 4),
            ConstExpr::E => ("e".to_string(), 4),
            ConstExpr::Integer(i) => (i.to_string(), if i.sign() == num::bigint::Sign::Minus { 1 } else { 4 }),
            ConstExpr::Rational(r) => {
                if r.is_integer() {
                    (r.numer().to_string(), if *r < Rational::default() { 1 } else { 4 })
                } else {
                    (format!("{}/{}", r.numer(), r.denom()), 2)
                }
            }
            ConstExpr::Add(a, b) => (format!("{}+{}", a.render_prec(1), b.render_prec(2)), 1),
            ConstExpr::Sub(a, b) => (format!("{}-{}", a.render_prec(1), b.render_prec(2)), 1),
            ConstExpr::Mul(a, b) => (format!("{}*{}", a.render_prec(2), b.render_prec(3)), 2),
            ConstExpr::Div(a, b) => (format!("{}/{}", a.render_prec(2), b.render_prec(3)), 2),
            ConstExpr::Sqrt(a) => (format!("sqrt({})", a.render_prec(0)), 4),
            ConstExpr::Pow(a, q) => {
                let exp = if q.is_integer() && !q.numer().to_string().starts_with('-') {
                    q.numer().to_string()
                } else if q.is_integer() {
                    format!("({})", q.numer())
                } else {
                    format!("({}/{})", q.numer(), q.denom())
                };
                (format!("{}^{}", a.render_prec(4), exp), 3)
            }
            ConstExpr::SinPi(q) => {
                let (n, d) = (q.numer().clone(), q.denom().clone());
                let body = if n == BigInt::from(1) {
                    if d == BigInt::from(1) {
                        "pi".to_string()
                    } else {
                        format!("pi/{}", d)
                    }
                } else if d == BigInt::from(1) {
                    format!("{}*pi", n)
                } else {
                    format!("{}*pi/{}", n, d)
                };
                (format!("sin({})", body), 4)
            }
        };
        if prec < parent {
            format!("({})", s)
        } else {
            s
        }
    }
}

/// Evaluate a constant expression at precision `p` (bits, `p >= 8`).
///
/// pi and e are produced from the shared per-precision cache; the whole tree
/// is evaluated with guard bits and rounded once at the end.
pub fn const_eval(expr: &ConstExpr, p: usize) -> Result<PrecisionReal, NumericsError> {
    assert!(p >= 8, "precision must be at least 8 bits");
    let wp = kernel::wp(p);
    let v = eval(expr, wp)?;
    Ok(PrecisionReal::from_bigfloat_rounded(v, p))
}

fn eval(expr: &ConstExpr, wp: usize) -> Result<BigFloat, NumericsError> {
    Ok(match expr {
        ConstExpr::Pi => kernel::pi(wp),
        ConstExpr::E => kernel::e(wp),
        ConstExpr::Integer(i) => kernel::from_bigint(i, wp),
        ConstExpr::Rational(r) => kernel::from_rational(r, wp),
        ConstExpr::Add(a, b) => eval(a, wp)?.add(&eval(b, wp)?, wp, kernel::RM),
        ConstExpr::Sub(a, b) => eval(a, wp)?.sub(&eval(b, wp)?, wp, kernel::RM),
        ConstExpr::Mul(a, b) => eval(a, wp)?.mul(&eval(b, wp)?, wp, kernel::RM),
        ConstExpr::Div(a, b) => {
            let den = eval(b, wp)?;
            if den.is_zero() {
                return Err(NumericsError::DivisionByZero);
            }
            eval(a, wp)?.div(&den, wp, kernel::RM)
        }
        ConstExpr::Sqrt(a) => {
            let v = eval(a, wp)?;
            if v.is_negative() && !v.is_zero() {
                return Err(NumericsError::NegativeSqrt);
            }
            kernel::sqrt(&v, wp)
        }
        ConstExpr::Pow(a, q) => {
            let base = eval(a, wp)?;
            if q.is_integer() {
                kernel::pow_rational(&base, q, wp)
            } else if base.is_zero() {
                if super::is_positive(q) {
                    kernel::zero()
                } else {
                    return Err(NumericsError::DivisionByZero);
                }
            } else if base.is_negative() {
                return Err(NumericsError::NegativeSqrt);
            } else {
                kernel::pow_rational(&base, q, wp)
            }
        }
        ConstExpr::SinPi(q) => kernel::sin_pi(q, wp),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{rat, CompareOutcome, Tolerance};
    use proptest::prelude::*;

    fn assert_close_digits(v: &PrecisionReal, expected: &str, digits: usize) {
        let oracle = PrecisionReal::from_decimal_str(expected, 200).unwrap();
        let tol = Tolerance::Rational(rat(1, 10).pow(digits as i32));
        assert_eq!(
            v.compare(&oracle, &tol),
            CompareOutcome::Equal,
            "got {} want {}",
            v.to_decimal(digits + 2),
            expected
        );
    }

    #[test]
    fn eval_exact_rational() {
        let v = const_eval(&ConstExpr::Rational(rat(256, 175)), 64).unwrap();
        assert_eq!(v.to_decimal(12), "1.46285714286");
    }

    #[test]
    fn eval_nested_radical() {
        // sqrt(2 + sqrt(2)), checked against an independently computed
        // 50-digit value.
        let e = ConstExpr::sqrt(ConstExpr::add(
            ConstExpr::int(2),
            ConstExpr::sqrt(ConstExpr::int(2)),
        ));
        let v = const_eval(&e, 192).unwrap();
        assert_close_digits(&v, "1.8477590650225735122563663787935765736448332517273", 48);
    }

    #[test]
    fn eval_pi_over_two() {
        let e = ConstExpr::div(ConstExpr::Pi, ConstExpr::int(2));
        let v = const_eval(&e, 192).unwrap();
        assert_close_digits(&v, "1.5707963267948966192313216916397514420985846996876", 48);
    }

    #[test]
    fn division_by_zero_detected() {
        let e = ConstExpr::div(ConstExpr::Pi, ConstExpr::sub(ConstExpr::int(2), ConstExpr::int(2)));
        assert_eq!(const_eval(&e, 64).unwrap_err(), NumericsError::DivisionByZero);
    }

    #[test]
    fn negative_sqrt_detected() {
        let e = ConstExpr::sqrt(ConstExpr::sub(ConstExpr::int(1), ConstExpr::int(3)));
        assert_eq!(const_eval(&e, 64).unwrap_err(), NumericsError::NegativeSqrt);
        let e = ConstExpr::pow(ConstExpr::int(-2), rat(1, 2));
        assert_eq!(const_eval(&e, 64).unwrap_err(), NumericsError::NegativeSqrt);
    }

    #[test]
    fn integer_power_of_negative_base() {
        let e = ConstExpr::pow(ConstExpr::int(-2), rat(3, 1));
        let v = const_eval(&e, 64).unwrap();
        assert_eq!(v.to_decimal(2), "-8");
    }

    #[test]
    fn render_examples() {
        let e = ConstExpr::div(
            ConstExpr::Pi,
            ConstExpr::mul(
                ConstExpr::int(4),
                ConstExpr::sqrt(ConstExpr::sub(ConstExpr::int(2), ConstExpr::sqrt(ConstExpr::int(2)))),
            ),
        );
        assert_eq!(e.render(), "pi/(4*sqrt(2-sqrt(2)))");

        let e = ConstExpr::div(
            ConstExpr::mul(ConstExpr::int(2), ConstExpr::Pi),
            ConstExpr::mul(ConstExpr::int(3), ConstExpr::sqrt(ConstExpr::int(3))),
        );
        assert_eq!(e.render(), "2*pi/(3*sqrt(3))");

        let e = ConstExpr::mul(ConstExpr::E, ConstExpr::pow(ConstExpr::int(2), rat(-1, 1)));
        assert_eq!(e.render(), "e*2^(-1)");

        let e = ConstExpr::mul(
            ConstExpr::pow(ConstExpr::E, rat(2, 3)),
            ConstExpr::pow(ConstExpr::int(3), rat(-1, 2)),
        );
        assert_eq!(e.render(), "e^(2/3)*3^(-1/2)");

        assert_eq!(ConstExpr::SinPi(rat(1, 5)).render(), "sin(pi/5)");
        assert_eq!(ConstExpr::SinPi(rat(3, 8)).render(), "sin(3*pi/8)");
    }

    fn arb_expr() -> impl Strategy<Value = ConstExpr> {
        let leaf = prop_oneof![
            Just(ConstExpr::Pi),
            Just(ConstExpr::E),
            (1i64..50).prop_map(ConstExpr::int),
            (1i64..40, 1i64..40).prop_map(|(n, d)| ConstExpr::Rational(rat(n, d))),
        ];
        leaf.prop_recursive(3, 24, 2, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(a, b)| ConstExpr::add(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| ConstExpr::mul(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| ConstExpr::div(a, b)),
                inner.clone().prop_map(ConstExpr::sqrt),
                (inner.clone(), 1i64..5, 1i64..5).prop_map(|(a, n, d)| ConstExpr::pow(a, rat(n, d))),
            ]
        })
    }

    proptest! {
        // Evaluations at p and 2p agree within 2^(-p+3).
        #[test]
        fn eval_precision_consistency(e in arb_expr()) {
            let p = 64usize;
            let lo = const_eval(&e, p).unwrap();
            let hi = const_eval(&e, 2 * p).unwrap();
            let wp = 3 * p;
            let diff = lo.bigfloat().sub(hi.bigfloat(), wp, kernel::RM).abs();
            let scale = kernel::one(wp).max(&hi.bigfloat().abs());
            let rel = diff.div(&scale, wp, kernel::RM);
            prop_assert!(kernel::abs_below_pow2(&rel, -(p as i64) + 3));
        }
    }
}
