//! Structural and numerical verification of product factorization claims.
//!
//! A claim equates two sides, each a constant times a list of referenced
//! products raised to rational exponents. Wallis-type claims are checked
//! structurally through canonical factor forms. Catalan-type (and mixed)
//! claims first attempt a structural check on exponent-weighted factor maps
//! over a finite window; identities that are true only telescopically fall
//! back to a numeric comparison of evaluated limits.

use std::collections::{BTreeMap, BTreeSet};

use num::{BigInt, One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use astro_float::BigFloat;

use crate::eval::{catalan_limit, ErrorBound, EvalError};
use crate::gamma::eq21_eval;
use crate::model::{
    builtin, canonicalize, disjoint_union, pippenger_general, wallis_general, CanonicalWallisForm,
    CatalanProduct, ModelError, Product, WallisProduct,
};
use crate::numerics::{kernel, rat, Rational};

/// How a claim names a product (claims reference catalog entries and the
/// general constructors, never inline structures).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProductRef {
    Paper(u32),
    WallisGeneral(u64),
    PippengerGeneral(u64),
}

impl ProductRef {
    pub fn resolve(&self) -> Result<Product, ModelError> {
        match self {
            ProductRef::Paper(id) => builtin(*id),
            ProductRef::WallisGeneral(k) => Ok(Product::Wallis(wallis_general(*k))),
            ProductRef::PippengerGeneral(k) => Ok(Product::Catalan(pippenger_general(*k))),
        }
    }

    pub fn render(&self) -> String {
        match self {
            ProductRef::Paper(id) => format!("paper({id})"),
            ProductRef::WallisGeneral(k) => format!("wallis_general({k})"),
            ProductRef::PippengerGeneral(k) => format!("pippenger_general({k})"),
        }
    }
}

/// One referenced product with its exponent.
#[derive(Debug, Clone, PartialEq)]
pub struct ClaimTerm {
    pub reference: ProductRef,
    pub product: Product,
    pub exponent: Rational,
}

impl ClaimTerm {
    pub fn new(reference: ProductRef, exponent: Rational) -> Result<Self, ModelError> {
        Ok(ClaimTerm {
            product: reference.resolve()?,
            reference,
            exponent,
        })
    }
}

/// One side of a claim: an optional rational constant times product powers.
#[derive(Debug, Clone, PartialEq)]
pub struct ClaimSide {
    pub constant: Rational,
    pub terms: Vec<ClaimTerm>,
}

impl ClaimSide {
    pub fn new(constant: Rational, terms: Vec<ClaimTerm>) -> Self {
        ClaimSide { constant, terms }
    }
}

/// A product identity to verify.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityClaim {
    pub lhs: ClaimSide,
    pub rhs: ClaimSide,
}

/// Verification outcome.
#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    /// The sides agree factor for factor; `residual` is the exact head
    /// factor absorbed by the constant multipliers (1 when none).
    StructuralEqual { residual: Rational },
    /// The sides agree numerically within the given tolerance.
    NumericEqual { tolerance: Rational },
    Refuted { witness: String },
    Inconclusive { reason: String },
}

impl Verdict {
    pub fn verified(&self) -> bool {
        matches!(self, Verdict::StructuralEqual { .. } | Verdict::NumericEqual { .. })
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Verdict::StructuralEqual { .. } => "structural",
            Verdict::NumericEqual { .. } => "numeric",
            Verdict::Refuted { .. } => "refuted",
            Verdict::Inconclusive { .. } => "inconclusive",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IdentityError {
    #[error("structural verification over canonical forms needs Wallis-type products with integer exponents: {0}")]
    MixedFamilies(String),
}

/// Options for claim verification.
#[derive(Debug, Clone)]
pub struct VerifyOptions {
    /// Stream positions per product for the structural factor-map window.
    pub positions: u64,
    /// Numeric fallback tolerance.
    pub tolerance: Rational,
    /// Evaluation precision in bits.
    pub precision: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            positions: 256,
            tolerance: rat(1, 10).pow(10),
            precision: 128,
        }
    }
}

/// Verify a claim, dispatching on its shape: pure Wallis claims with unit
/// exponents and constants go through the canonical-form check; everything
/// else goes through the factor-map/numeric pipeline.
pub fn verify_claim(claim: &IdentityClaim, opts: &VerifyOptions) -> Result<Verdict, IdentityError> {
    let plain_wallis = claim
        .lhs
        .terms
        .iter()
        .chain(&claim.rhs.terms)
        .all(|t| matches!(t.product, Product::Wallis(_)) && t.exponent.is_one())
        && claim.lhs.constant.is_one()
        && claim.rhs.constant.is_one();
    if plain_wallis {
        verify_wallis_identity(claim)
    } else {
        Ok(verify_catalan_identity(
            claim,
            opts.positions,
            &opts.tolerance,
            opts.precision,
        ))
    }
}

fn expand_wallis_side(side: &ClaimSide) -> Result<Vec<WallisProduct>, IdentityError> {
    let mut out = Vec::new();
    for term in &side.terms {
        let w = match &term.product {
            Product::Wallis(w) => w,
            Product::Catalan(_) => {
                return Err(IdentityError::MixedFamilies(format!(
                    "{} is Catalan-type",
                    term.reference.render()
                )))
            }
        };
        let e = &term.exponent;
        if !e.is_integer() || !crate::numerics::is_positive(e) {
            return Err(IdentityError::MixedFamilies(format!(
                "{} has non-integer exponent {}",
                term.reference.render(),
                e
            )));
        }
        let reps = e.numer().to_u64().ok_or_else(|| {
            IdentityError::MixedFamilies("exponent too large to expand".into())
        })?;
        for _ in 0..reps {
            out.push(w.clone());
        }
    }
    Ok(out)
}

fn first_difference(a: &CanonicalWallisForm, b: &CanonicalWallisForm) -> Option<String> {
    let diff_map = |x: &BTreeMap<u64, u64>, y: &BTreeMap<u64, u64>, side: &str| -> Option<String> {
        let keys: BTreeSet<u64> = x.keys().chain(y.keys()).copied().collect();
        for r in keys {
            let (cx, cy) = (x.get(&r).copied().unwrap_or(0), y.get(&r).copied().unwrap_or(0));
            if cx != cy {
                return Some(format!(
                    "{side} residue {r} (mod {}): multiplicity {cx} vs {cy}",
                    a.period()
                ));
            }
        }
        None
    };
    if let Some(w) = diff_map(a.num_residues(), b.num_residues(), "numerator") {
        return Some(w);
    }
    if let Some(w) = diff_map(a.den_residues(), b.den_residues(), "denominator") {
        return Some(w);
    }
    if a.boundary() != b.boundary() {
        return Some(format!(
            "boundary corrections differ: {:?} vs {:?}",
            a.boundary(),
            b.boundary()
        ));
    }
    None
}

/// Structural check of a Wallis-type factorization: both sides canonicalize
/// at the lcm of all periods and must match residue-for-residue, boundary
/// included.
pub fn verify_wallis_identity(claim: &IdentityClaim) -> Result<Verdict, IdentityError> {
    let lhs = expand_wallis_side(&claim.lhs)?;
    let rhs = expand_wallis_side(&claim.rhs)?;
    if claim.lhs.constant != claim.rhs.constant {
        return Ok(Verdict::Refuted {
            witness: format!(
                "constant multipliers differ: {} vs {}",
                claim.lhs.constant, claim.rhs.constant
            ),
        });
    }
    let mut all = lhs.clone();
    all.extend(rhs.iter().cloned());
    let q = match disjoint_union(&all) {
        Ok(c) => c.period(),
        Err(e) => return Ok(Verdict::Inconclusive { reason: e.to_string() }),
    };
    let canon = |prods: &[WallisProduct]| -> CanonicalWallisForm {
        let mut acc = canonicalize(&prods[0], q);
        for p in &prods[1..] {
            let c = canonicalize(p, q);
            // Merge through disjoint_union semantics at the fixed q.
            acc = merge_forms(acc, c);
        }
        acc
    };
    let lhs_form = canon(&lhs);
    let rhs_form = canon(&rhs);
    match first_difference(&lhs_form, &rhs_form) {
        None => Ok(Verdict::StructuralEqual {
            residual: Rational::one(),
        }),
        Some(witness) => Ok(Verdict::Refuted { witness }),
    }
}

fn merge_forms(a: CanonicalWallisForm, b: CanonicalWallisForm) -> CanonicalWallisForm {
    let mut out = a;
    out.merge(&b);
    out
}

/// Exponent-weighted factor map of a Catalan product over its prefix plus
/// the first `positions` stream positions.
pub fn factor_exponent_map(prod: &CatalanProduct, positions: u64) -> BTreeMap<Rational, Rational> {
    let mut map: BTreeMap<Rational, Rational> = BTreeMap::new();
    for (factor, exponent) in prod.prefix() {
        add_exp(&mut map, factor.clone(), exponent.clone());
    }
    let mut t: u128 = 0;
    'outer: for block in prod.schedule().blocks() {
        for _ in 0..block.size {
            if t >= positions as u128 {
                break 'outer;
            }
            add_exp(&mut map, prod.stream().factor(t), block.exponent.clone());
            t += 1;
        }
    }
    map
}

fn add_exp(map: &mut BTreeMap<Rational, Rational>, factor: Rational, exponent: Rational) {
    let e = map.entry(factor).or_insert_with(Rational::zero);
    *e += exponent;
    if e.is_zero() {
        let key: Vec<Rational> = map
            .iter()
            .filter(|(_, v)| v.is_zero())
            .map(|(k, _)| k.clone())
            .collect();
        for k in key {
            map.remove(&k);
        }
    }
}

/// Factor map of any product family over a value-aligned window: include
/// every factor whose reduced parts stay at or below `max_term`, weighting
/// by block exponents (Wallis factors carry exponent 1).
fn windowed_map(product: &Product, max_term: &BigInt) -> BTreeMap<Rational, Rational> {
    let mut map: BTreeMap<Rational, Rational> = BTreeMap::new();
    let in_window = |f: &Rational| -> bool { f.numer().abs() <= *max_term && f.denom().abs() <= *max_term };
    match product {
        Product::Wallis(w) => {
            // Reduced terms grow at least linearly (the gcd of the two linear
            // parts divides the residue difference), so a bounded scan
            // terminates.
            let k = w.factors_per_period();
            let mut n = 0u64;
            loop {
                let mut any_small = false;
                for j in 0..k {
                    let f = w.fraction(n, j);
                    if in_window(&f) {
                        any_small = true;
                        add_exp(&mut map, f, Rational::one());
                    }
                }
                let raw_min = BigInt::from(w.period() as u128 * n as u128 + 1);
                let max_diff = w
                    .num_residues()
                    .iter()
                    .zip(w.den_residues())
                    .map(|(&u, &v)| u.abs_diff(v))
                    .max()
                    .unwrap_or(1)
                    .max(1);
                if !any_small && raw_min > max_term * BigInt::from(max_diff) {
                    break;
                }
                n += 1;
            }
        }
        Product::Catalan(c) => {
            for (factor, exponent) in c.prefix() {
                if in_window(factor) {
                    add_exp(&mut map, factor.clone(), exponent.clone());
                }
            }
            match c.stream() {
                crate::model::FactorStream::Const(v) => {
                    // Every position shows the same factor. Explicit
                    // schedules aggregate exactly; infinite schedules are
                    // scanned over a deep window, which leaves a nonzero
                    // remainder in the difference map and correctly routes
                    // such claims to the numeric path (their equality is
                    // telescopic, never per-factor).
                    if in_window(v) {
                        let cap = match c.schedule() {
                            crate::model::BlockSchedule::Explicit(blocks) => blocks.len(),
                            _ => 512,
                        };
                        let mut total = Rational::zero();
                        for block in c.schedule().blocks().take(cap) {
                            total += block.exponent.clone()
                                * Rational::from_integer(BigInt::from(block.size));
                        }
                        add_exp(&mut map, v.clone(), total);
                    }
                }
                crate::model::FactorStream::Pairs { pairs, .. } => {
                    let max_diff = pairs
                        .iter()
                        .map(|&(u, v)| u.abs_diff(v))
                        .max()
                        .unwrap_or(1)
                        .max(1);
                    let mut t: u128 = 0;
                    'outer: for block in c.schedule().blocks() {
                        for _ in 0..block.size {
                            let f = c.stream().factor(t);
                            if in_window(&f) {
                                add_exp(&mut map, f, block.exponent.clone());
                            } else {
                                let (raw_n, _) = c.stream().factor_terms(t);
                                if raw_n > max_term * BigInt::from(max_diff) {
                                    break 'outer;
                                }
                            }
                            t += 1;
                        }
                    }
                }
            }
        }
    }
    map
}

/// Largest linear term reached within `positions` stream positions, across
/// all products of the claim; the structural window includes every factor
/// up to that size so the two sides stay value-aligned.
fn window_limit(claim: &IdentityClaim, positions: u64) -> BigInt {
    let mut max_term = BigInt::from(4);
    for term in claim.lhs.terms.iter().chain(&claim.rhs.terms) {
        let candidate = match &term.product {
            Product::Wallis(w) => {
                let periods = positions / w.factors_per_period() as u64 + 2;
                BigInt::from(w.period()) * BigInt::from(periods)
                    + BigInt::from(*w.num_residues().iter().chain(w.den_residues()).max().unwrap())
            }
            Product::Catalan(c) => {
                let (n, d) = c.stream().factor_terms(positions as u128);
                n.max(d)
            }
        };
        max_term = max_term.max(candidate);
    }
    max_term
}

/// Factor values considered "head" factors: product prefixes plus the first
/// pattern row of each stream. A difference map confined to these with
/// integer exponents is an exact finite head mismatch; anything else falls
/// back to numerics.
fn prefix_region(claim: &IdentityClaim) -> BTreeSet<Rational> {
    let mut set = BTreeSet::new();
    for term in claim.lhs.terms.iter().chain(&claim.rhs.terms) {
        match &term.product {
            Product::Wallis(w) => {
                for j in 0..w.factors_per_period() {
                    set.insert(w.fraction(0, j));
                }
            }
            Product::Catalan(c) => {
                for (f, _) in c.prefix() {
                    set.insert(f.clone());
                }
                match c.stream() {
                    crate::model::FactorStream::Const(v) => {
                        set.insert(v.clone());
                    }
                    crate::model::FactorStream::Pairs { pairs, .. } => {
                        for t in 0..pairs.len() as u128 {
                            set.insert(c.stream().factor(t));
                        }
                    }
                }
            }
        }
    }
    set
}

fn side_window_map(side: &ClaimSide, max_term: &BigInt) -> BTreeMap<Rational, Rational> {
    let mut map: BTreeMap<Rational, Rational> = BTreeMap::new();
    for term in &side.terms {
        for (factor, exponent) in windowed_map(&term.product, max_term) {
            add_exp(&mut map, factor, exponent * &term.exponent);
        }
    }
    map
}

/// Value of one claim side together with an absolute error bound.
fn eval_side(side: &ClaimSide, tol: &Rational, p: usize) -> Result<(BigFloat, BigFloat), EvalError> {
    let wp = kernel::wp(p);
    let exp_budget: Rational = side
        .terms
        .iter()
        .map(|t| if t.exponent.is_negative() { -t.exponent.clone() } else { t.exponent.clone() })
        .sum();
    let scale = exp_budget.max(Rational::one()) * Rational::from_integer(BigInt::from(32));
    let per_product_tol = tol / scale;
    let mut log_sum = kernel::ln(&kernel::from_rational(&side.constant, wp), wp);
    let mut log_err = kernel::zero();
    for term in &side.terms {
        let (value, err_log) = match &term.product {
            Product::Wallis(w) => {
                let v = eq21_eval(w, p).map_err(|_| EvalError::NoConvergence)?;
                let b = v.abs_error_bound();
                let rel = b.div(&v.bigfloat().abs(), wp, kernel::RM);
                (v.bigfloat().clone(), rel)
            }
            Product::Catalan(c) => {
                let r = catalan_limit(c, &per_product_tol, p)?;
                let b = match &r.error_bound {
                    ErrorBound::Bound(b) => b.bigfloat().clone(),
                    ErrorBound::Heuristic => kernel::zero(),
                };
                let rel = b.div(&r.value.bigfloat().abs(), wp, kernel::RM).abs();
                (r.value.bigfloat().clone(), rel)
            }
        };
        let e = kernel::from_rational(&term.exponent, wp);
        log_sum = log_sum.add(&e.mul(&kernel::ln(&value, wp), wp, kernel::RM), wp, kernel::RM);
        log_err = log_err.add(&e.abs().mul(&err_log, wp, kernel::RM), wp, kernel::RM);
    }
    let value = kernel::exp(&log_sum, wp);
    // |exp(S +- d) - exp(S)| <= v * d * (1 + d) for d <= 1.
    let err = value
        .abs()
        .mul(&log_err, wp, kernel::RM)
        .mul(&kernel::one(wp).add(&log_err, wp, kernel::RM), wp, kernel::RM);
    Ok((value, err))
}

/// Verify a Catalan-type (or mixed) claim: structural factor-map comparison
/// over a value-aligned window first, numeric limit comparison as fallback.
pub fn verify_catalan_identity(
    claim: &IdentityClaim,
    positions: u64,
    tol: &Rational,
    p: usize,
) -> Verdict {
    let positions = positions.max(16);
    let max_term = window_limit(claim, positions);
    let lhs_map = side_window_map(&claim.lhs, &max_term);
    let rhs_map = side_window_map(&claim.rhs, &max_term);
    let mut diff: BTreeMap<Rational, Rational> = rhs_map;
    for (factor, exponent) in lhs_map {
        add_exp(&mut diff, factor, -exponent);
    }
    let required = claim.lhs.constant.clone() / claim.rhs.constant.clone();
    if diff.is_empty() {
        return if required.is_one() {
            Verdict::StructuralEqual {
                residual: Rational::one(),
            }
        } else {
            Verdict::Refuted {
                witness: format!(
                    "sides share every factor but constants differ by {required}"
                ),
            }
        };
    }
    let region = prefix_region(claim);
    let head_only = diff
        .iter()
        .all(|(f, e)| e.is_integer() && region.contains(f));
    if head_only {
        let mut residual = Rational::one();
        for (factor, exponent) in &diff {
            let k = exponent.numer().to_i32().unwrap_or(0);
            residual *= factor.pow(k);
        }
        return if residual == required {
            Verdict::StructuralEqual { residual }
        } else {
            Verdict::Refuted {
                witness: format!(
                    "head factors leave residual {residual}, constants require {required}"
                ),
            }
        };
    }
    // Telescopic or genuinely different: compare evaluated limits.
    let wp = kernel::wp(p);
    let (lv, le) = match eval_side(&claim.lhs, tol, p) {
        Ok(v) => v,
        Err(e) => {
            return Verdict::Inconclusive {
                reason: format!("left side evaluation failed: {e}"),
            }
        }
    };
    let (rv, re) = match eval_side(&claim.rhs, tol, p) {
        Ok(v) => v,
        Err(e) => {
            return Verdict::Inconclusive {
                reason: format!("right side evaluation failed: {e}"),
            }
        }
    };
    let diff_v = lv.sub(&rv, wp, kernel::RM).abs();
    let slack = le.add(&re, wp, kernel::RM);
    let tol_f = kernel::from_rational(tol, wp).abs();
    let lo = tol_f.sub(&slack, wp, kernel::RM);
    let hi = tol_f.add(&slack, wp, kernel::RM);
    if matches!(diff_v.cmp(&lo), Some(c) if c <= 0) {
        Verdict::NumericEqual { tolerance: tol.clone() }
    } else if matches!(diff_v.cmp(&hi), Some(c) if c > 0) {
        Verdict::Refuted {
            witness: format!(
                "limits differ by about {}",
                kernel::to_decimal(&diff_v, 6)
            ),
        }
    } else {
        Verdict::Inconclusive {
            reason: "difference falls inside the evaluation slack".into(),
        }
    }
}
