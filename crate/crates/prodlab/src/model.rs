//! Data model for both product families, the builtin catalog, canonical
//! factor forms with boundary corrections, and the general-base constructors.
//!
//! A [`WallisProduct`] is a periodic product of linear fractions
//! `prod_n prod_j (P n + u_j) / (P n + v_j)` whose residue sums balance.
//! A [`CatalanProduct`] groups a factor stream into blocks raised to
//! scheduled fractional exponents. The catalog (`builtin`) carries the
//! classical products this crate ships with, keyed by their customary
//! equation numbers, together with their known closed-form values.

use std::collections::BTreeMap;

use num::{BigInt, One};
use thiserror::Error;

use crate::numerics::{rat, ConstExpr, Rational};

/// Errors from product constructors and catalog lookup.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("unknown builtin product id {0}")]
    UnknownBuiltin(u32),
    #[error("numerator and denominator residue counts differ ({num} vs {den})")]
    ResidueCountMismatch { num: usize, den: usize },
    #[error("residue sums must balance: {num_sum} != {den_sum}")]
    UnbalancedResidues { num_sum: u128, den_sum: u128 },
    #[error("{0}")]
    InvalidProduct(String),
    #[error("{0}")]
    BadSchedule(String),
}

/// Periodic linear-factor product with balanced residues.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WallisProduct {
    period: u64,
    num_residues: Vec<u64>,
    den_residues: Vec<u64>,
}

impl WallisProduct {
    /// Build a product, enforcing the residue invariants: equal counts,
    /// positivity, and the balance condition `sum(u) == sum(v)` required for
    /// convergence.
    pub fn new(period: u64, num_residues: Vec<u64>, den_residues: Vec<u64>) -> Result<Self, ModelError> {
        if period == 0 {
            return Err(ModelError::InvalidProduct("period must be positive".into()));
        }
        if num_residues.is_empty() {
            return Err(ModelError::InvalidProduct("residue lists must be nonempty".into()));
        }
        if num_residues.len() != den_residues.len() {
            return Err(ModelError::ResidueCountMismatch {
                num: num_residues.len(),
                den: den_residues.len(),
            });
        }
        if num_residues.iter().chain(&den_residues).any(|&r| r == 0) {
            return Err(ModelError::InvalidProduct("residues must be >= 1".into()));
        }
        let num_sum: u128 = num_residues.iter().map(|&r| r as u128).sum();
        let den_sum: u128 = den_residues.iter().map(|&r| r as u128).sum();
        if num_sum != den_sum {
            return Err(ModelError::UnbalancedResidues { num_sum, den_sum });
        }
        Ok(WallisProduct {
            period,
            num_residues,
            den_residues,
        })
    }

    /// Constructor bypassing validation, for exercising downstream
    /// invariant checks in tests.
    #[cfg(test)]
    pub(crate) fn new_unchecked(period: u64, num_residues: Vec<u64>, den_residues: Vec<u64>) -> Self {
        WallisProduct {
            period,
            num_residues,
            den_residues,
        }
    }

    pub fn period(&self) -> u64 {
        self.period
    }

    pub fn num_residues(&self) -> &[u64] {
        &self.num_residues
    }

    pub fn den_residues(&self) -> &[u64] {
        &self.den_residues
    }

    /// Number of linear factors per period.
    pub fn factors_per_period(&self) -> usize {
        self.num_residues.len()
    }

    /// The `j`-th printed fraction of period `n`.
    pub fn fraction(&self, n: u64, j: usize) -> Rational {
        let p = self.period as u128;
        let num = p * n as u128 + self.num_residues[j] as u128;
        let den = p * n as u128 + self.den_residues[j] as u128;
        Rational::new(BigInt::from(num), BigInt::from(den))
    }

    /// Fractions in printed order (period by period).
    pub fn fractions(&self) -> impl Iterator<Item = Rational> + '_ {
        (0u64..).flat_map(move |n| (0..self.factors_per_period()).map(move |j| self.fraction(n, j)))
    }
}

/// Ordered factor source for Catalan-type products.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FactorStream {
    /// Periodic linear fractions `(P n + u_i) / (P n + v_i)` enumerated in
    /// pair order; `start_offset` skips that many leading elements.
    Pairs {
        period: u64,
        pairs: Vec<(u64, u64)>,
        start_offset: u64,
    },
    /// A constant positive factor.
    Const(Rational),
}

impl FactorStream {
    fn validate(&self) -> Result<(), ModelError> {
        match self {
            FactorStream::Pairs { period, pairs, .. } => {
                if *period == 0 {
                    return Err(ModelError::InvalidProduct("stream period must be positive".into()));
                }
                if pairs.is_empty() {
                    return Err(ModelError::InvalidProduct("stream pair list must be nonempty".into()));
                }
                if pairs.iter().any(|&(u, v)| u == 0 || v == 0) {
                    return Err(ModelError::InvalidProduct("stream residues must be >= 1".into()));
                }
                Ok(())
            }
            FactorStream::Const(c) => {
                if crate::numerics::is_positive(c) {
                    Ok(())
                } else {
                    Err(ModelError::InvalidProduct("constant stream factor must be positive".into()))
                }
            }
        }
    }

    /// The `t`-th factor after the offset.
    pub fn factor(&self, t: u128) -> Rational {
        match self {
            FactorStream::Pairs {
                period,
                pairs,
                start_offset,
            } => {
                let s = t + *start_offset as u128;
                let n = s / pairs.len() as u128;
                let i = (s % pairs.len() as u128) as usize;
                let (u, v) = pairs[i];
                let num = *period as u128 * n + u as u128;
                let den = *period as u128 * n + v as u128;
                Rational::new(BigInt::from(num), BigInt::from(den))
            }
            FactorStream::Const(c) => c.clone(),
        }
    }

    /// Raw numerator/denominator linear terms of the `t`-th factor (constant
    /// streams report the reduced fraction's parts).
    pub fn factor_terms(&self, t: u128) -> (BigInt, BigInt) {
        match self {
            FactorStream::Pairs {
                period,
                pairs,
                start_offset,
            } => {
                let s = t + *start_offset as u128;
                let n = s / pairs.len() as u128;
                let i = (s % pairs.len() as u128) as usize;
                let (u, v) = pairs[i];
                (
                    BigInt::from(*period as u128 * n + u as u128),
                    BigInt::from(*period as u128 * n + v as u128),
                )
            }
            FactorStream::Const(c) => (c.numer().clone(), c.denom().clone()),
        }
    }
}

/// The `t`-th factor of a stream (free-function form of
/// [`FactorStream::factor`]).
pub fn stream_factor(stream: &FactorStream, t: u128) -> Rational {
    stream.factor(t)
}

/// Rule assigning each block its factor count and exponent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BlockSchedule {
    /// Block 1 has size 1 and exponent `1/K`; block `k >= 2` has size
    /// `2(K-1) K^(k-2)` and exponent `K^(-k)`.
    Pippenger { base: u64 },
    /// Every block has size 1; block `k` has exponent `ratio^k`.
    Geometric { ratio: Rational },
    /// Explicit finite list of `(size, exponent)` blocks.
    Explicit(Vec<(u64, Rational)>),
}

/// One schedule entry: 1-based index, starting stream position, factor
/// count, and exponent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub index: u64,
    pub start: u128,
    pub size: u128,
    pub exponent: Rational,
}

impl BlockSchedule {
    fn validate(&self) -> Result<(), ModelError> {
        match self {
            BlockSchedule::Pippenger { base } => {
                if *base < 2 {
                    return Err(ModelError::BadSchedule(format!(
                        "pippenger base must be >= 2, got {base}"
                    )));
                }
            }
            BlockSchedule::Geometric { ratio } => {
                if !crate::numerics::is_positive(ratio) {
                    return Err(ModelError::BadSchedule("geometric ratio must be positive".into()));
                }
            }
            BlockSchedule::Explicit(blocks) => {
                for (size, exponent) in blocks {
                    if *size == 0 {
                        return Err(ModelError::BadSchedule("explicit block size must be >= 1".into()));
                    }
                    if !crate::numerics::is_positive(exponent) {
                        return Err(ModelError::BadSchedule(
                            "explicit block exponent must be positive".into(),
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    /// Size and exponent of 1-based block `k`, or `None` past the end of an
    /// explicit schedule.
    pub fn block(&self, k: u64) -> Option<(u128, Rational)> {
        assert!(k >= 1, "blocks are 1-based");
        match self {
            BlockSchedule::Pippenger { base } => {
                let kk = BigInt::from(*base).pow(k as u32);
                let exponent = Rational::new(BigInt::one(), kk);
                if k == 1 {
                    return Some((1, exponent));
                }
                // Sizes beyond u128 are unreachable by any evaluation budget;
                // the schedule simply ends there.
                (*base as u128)
                    .checked_pow(k as u32 - 2)
                    .and_then(|p| p.checked_mul(2 * (*base as u128 - 1)))
                    .map(|size| (size, exponent))
            }
            BlockSchedule::Geometric { ratio } => Some((1, ratio.pow(k as i32))),
            BlockSchedule::Explicit(blocks) => blocks
                .get(k as usize - 1)
                .map(|(size, exponent)| (*size as u128, exponent.clone())),
        }
    }

    /// Iterate blocks with cumulative start positions. The stream is consumed
    /// sequentially with no gaps or overlaps by construction.
    pub fn blocks(&self) -> BlockIter<'_> {
        BlockIter {
            schedule: self,
            next_index: 1,
            next_start: 0,
        }
    }
}

pub struct BlockIter<'a> {
    schedule: &'a BlockSchedule,
    next_index: u64,
    next_start: u128,
}

impl Iterator for BlockIter<'_> {
    type Item = Block;

    fn next(&mut self) -> Option<Block> {
        let (size, exponent) = self.schedule.block(self.next_index)?;
        let block = Block {
            index: self.next_index,
            start: self.next_start,
            size,
            exponent,
        };
        self.next_index += 1;
        self.next_start = self.next_start.checked_add(size)?;
        Some(block)
    }
}

/// Prefix factors plus a scheduled factor stream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalanProduct {
    prefix: Vec<(Rational, Rational)>,
    stream: FactorStream,
    schedule: BlockSchedule,
}

impl CatalanProduct {
    pub fn new(
        prefix: Vec<(Rational, Rational)>,
        stream: FactorStream,
        schedule: BlockSchedule,
    ) -> Result<Self, ModelError> {
        for (factor, exponent) in &prefix {
            if !crate::numerics::is_positive(factor) || !crate::numerics::is_positive(exponent) {
                return Err(ModelError::InvalidProduct(
                    "prefix factors and exponents must be positive".into(),
                ));
            }
        }
        stream.validate()?;
        schedule.validate()?;
        Ok(CatalanProduct {
            prefix,
            stream,
            schedule,
        })
    }

    pub fn prefix(&self) -> &[(Rational, Rational)] {
        &self.prefix
    }

    pub fn stream(&self) -> &FactorStream {
        &self.stream
    }

    pub fn schedule(&self) -> &BlockSchedule {
        &self.schedule
    }

    /// The same product with its prefix factors dropped.
    pub fn without_prefix(&self) -> CatalanProduct {
        CatalanProduct {
            prefix: Vec::new(),
            stream: self.stream.clone(),
            schedule: self.schedule.clone(),
        }
    }
}

/// Either product family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Product {
    Wallis(WallisProduct),
    Catalan(CatalanProduct),
}

impl Product {
    pub fn family_name(&self) -> &'static str {
        match self {
            Product::Wallis(_) => "wallis",
            Product::Catalan(_) => "catalan",
        }
    }
}

/// Ids of the Wallis-type catalog entries.
pub const WALLIS_BUILTIN_IDS: [u32; 10] = [1, 2, 3, 6, 7, 8, 9, 10, 11, 12];
/// Ids of the Catalan-type catalog entries.
pub const CATALAN_BUILTIN_IDS: [u32; 7] = [4, 5, 15, 16, 17, 18, 20];
/// All catalog ids.
pub const BUILTIN_IDS: [u32; 17] = [1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 15, 16, 17, 18, 20];

fn wallis(period: u64, num: &[u64], den: &[u64]) -> Product {
    Product::Wallis(WallisProduct::new(period, num.to_vec(), den.to_vec()).expect("catalog entry"))
}

fn catalan(prefix: &[(i64, i64)], stream: FactorStream, schedule: BlockSchedule) -> Product {
    let prefix = prefix.iter().map(|&(n, d)| (rat(n, d), rat(1, 1))).collect();
    Product::Catalan(CatalanProduct::new(prefix, stream, schedule).expect("catalog entry"))
}

fn pairs(period: u64, pairs: &[(u64, u64)], start_offset: u64) -> FactorStream {
    FactorStream::Pairs {
        period,
        pairs: pairs.to_vec(),
        start_offset,
    }
}

/// Look up a catalog product by its id.
pub fn builtin(id: u32) -> Result<Product, ModelError> {
    Ok(match id {
        1 => wallis(2, &[2, 2], &[1, 3]),
        2 => wallis(4, &[4, 4], &[3, 5]),
        3 => wallis(4, &[2, 2], &[1, 3]),
        6 => wallis(8, &[2, 6, 8, 8], &[3, 5, 7, 9]),
        7 => wallis(8, &[2, 4, 4, 6], &[1, 3, 5, 7]),
        8 => wallis(8, &[8, 8], &[7, 9]),
        9 => wallis(8, &[2, 6], &[3, 5]),
        10 => wallis(8, &[2, 4, 4, 6, 8, 8], &[3, 3, 5, 5, 7, 9]),
        11 => wallis(8, &[2, 6], &[1, 7]),
        12 => wallis(3, &[3, 3], &[2, 4]),
        4 => catalan(
            &[(2, 1)],
            pairs(2, &[(4, 3)], 0),
            BlockSchedule::Pippenger { base: 2 },
        ),
        5 => Product::Catalan(pippenger_general(2)),
        15 => catalan(&[], pairs(2, &[(2, 3)], 0), BlockSchedule::Pippenger { base: 2 }),
        16 => catalan(
            &[(2, 1)],
            pairs(8, &[(2, 1), (2, 3), (6, 5), (6, 7)], 1),
            BlockSchedule::Pippenger { base: 2 },
        ),
        17 => catalan(
            &[(2, 1)],
            pairs(4, &[(4, 3), (4, 5)], 0),
            BlockSchedule::Pippenger { base: 2 },
        ),
        18 => Product::Catalan(pippenger_general(3)),
        20 => catalan(
            &[],
            FactorStream::Const(rat(2, 1)),
            BlockSchedule::Geometric { ratio: rat(1, 2) },
        ),
        _ => return Err(ModelError::UnknownBuiltin(id)),
    })
}

/// Known closed-form value of a catalog product, when one is established.
pub fn builtin_closed_form(id: u32) -> Option<ConstExpr> {
    use ConstExpr as C;
    let sqrt_int = |n: i64| C::sqrt(C::int(n));
    Some(match id {
        1 => C::div(C::Pi, C::int(2)),
        2 => C::div(C::Pi, C::mul(C::int(2), sqrt_int(2))),
        3 => sqrt_int(2),
        6 => C::div(C::Pi, C::int(4)),
        7 => C::int(2),
        8 => C::div(
            C::Pi,
            C::mul(C::int(4), C::sqrt(C::sub(C::int(2), sqrt_int(2)))),
        ),
        9 => C::sqrt(C::sub(C::int(2), sqrt_int(2))),
        10 => C::div(
            C::Pi,
            C::mul(C::int(2), C::sqrt(C::add(C::int(2), sqrt_int(2)))),
        ),
        11 => C::sqrt(C::add(C::int(2), sqrt_int(2))),
        12 => C::div(C::mul(C::int(2), C::Pi), C::mul(C::int(3), sqrt_int(3))),
        4 => C::E,
        5 => C::div(C::E, C::int(2)),
        15 => C::div(C::E, C::int(4)),
        16 => C::pow(C::E, rat(1, 2)),
        17 => C::div(C::pow(C::E, rat(3, 2)), C::int(2)),
        18 => C::div(C::pow(C::E, rat(2, 3)), C::sqrt(C::int(3))),
        20 => C::int(2),
        _ => return None,
    })
}

/// The balanced product `prod (Kn+K)^2 / ((Kn+K-1)(Kn+K+1))` for `K >= 2`.
pub fn wallis_general(k: u64) -> WallisProduct {
    assert!(k >= 2, "general constructor requires K >= 2");
    WallisProduct::new(k, vec![k, k], vec![k - 1, k + 1]).expect("balanced by construction")
}

/// Exponential-block analogue of [`wallis_general`]: its factor stream in
/// printed order under the Pippenger block rule for base `K`.
pub fn pippenger_general(k: u64) -> CatalanProduct {
    assert!(k >= 2, "general constructor requires K >= 2");
    CatalanProduct::new(
        Vec::new(),
        FactorStream::Pairs {
            period: k,
            pairs: vec![(k, k - 1), (k, k + 1)],
            start_offset: 0,
        },
        BlockSchedule::Pippenger { base: k },
    )
    .expect("valid by construction")
}

/// A Wallis-type product rewritten at a common period `Q` as residue
/// multisets plus a finite signed boundary correction.
///
/// A residue above `Q` reduces into `(0, Q]`; the finitely many initial
/// integers its shifted enumeration skips are recorded in `boundary` with
/// sign `+1` per skip on the numerator side and `-1` on the denominator
/// side. Entries of equal value and opposite sign cancel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalWallisForm {
    period: u64,
    num: BTreeMap<u64, u64>,
    den: BTreeMap<u64, u64>,
    boundary: BTreeMap<u64, i64>,
}

impl CanonicalWallisForm {
    pub fn period(&self) -> u64 {
        self.period
    }

    pub fn num_residues(&self) -> &BTreeMap<u64, u64> {
        &self.num
    }

    pub fn den_residues(&self) -> &BTreeMap<u64, u64> {
        &self.den
    }

    pub fn boundary(&self) -> &BTreeMap<u64, i64> {
        &self.boundary
    }

    fn empty(period: u64) -> Self {
        CanonicalWallisForm {
            period,
            num: BTreeMap::new(),
            den: BTreeMap::new(),
            boundary: BTreeMap::new(),
        }
    }

    fn add_residue(&mut self, raw: u128, numerator_side: bool) {
        let q = self.period as u128;
        // Reduce into (0, Q], recording each skipped initial integer.
        let m = (raw - 1) / q;
        let r = (raw - m * q) as u64;
        assert!(
            m <= 1 << 20,
            "residue {raw} exceeds the canonical period by more than the supported bound"
        );
        let side = if numerator_side { 1 } else { -1 };
        for i in 0..m {
            let skipped = (r as u128 + i * q) as u64;
            let e = self.boundary.entry(skipped).or_insert(0);
            *e += side;
            if *e == 0 {
                self.boundary.remove(&skipped);
            }
        }
        let map = if numerator_side { &mut self.num } else { &mut self.den };
        *map.entry(r).or_insert(0) += 1;
    }

    pub(crate) fn merge(&mut self, other: &CanonicalWallisForm) {
        assert_eq!(self.period, other.period);
        for (&r, &c) in &other.num {
            *self.num.entry(r).or_insert(0) += c;
        }
        for (&r, &c) in &other.den {
            *self.den.entry(r).or_insert(0) += c;
        }
        for (&x, &s) in &other.boundary {
            let e = self.boundary.entry(x).or_insert(0);
            *e += s;
            if *e == 0 {
                self.boundary.remove(&x);
            }
        }
    }

    /// Re-express this form at a larger period `q2` (a multiple of the
    /// current period).
    pub fn refine(&self, q2: u64) -> CanonicalWallisForm {
        assert!(q2 >= self.period && q2.is_multiple_of(self.period), "period must divide the target");
        let mut out = CanonicalWallisForm::empty(q2);
        let steps = q2 / self.period;
        for (&r, &c) in &self.num {
            for j in 0..steps {
                let raw = r as u128 + j as u128 * self.period as u128;
                for _ in 0..c {
                    out.add_residue(raw, true);
                }
            }
        }
        for (&r, &c) in &self.den {
            for j in 0..steps {
                let raw = r as u128 + j as u128 * self.period as u128;
                for _ in 0..c {
                    out.add_residue(raw, false);
                }
            }
        }
        for (&x, &s) in &self.boundary {
            let e = out.boundary.entry(x).or_insert(0);
            *e += s;
            if *e == 0 {
                out.boundary.remove(&x);
            }
        }
        out
    }

    /// Multiset of linear terms `<= limit` on one side, after applying the
    /// boundary exclusions. Used to check that a canonical form regenerates
    /// its source product.
    pub fn terms_up_to(&self, limit: u64, numerator_side: bool) -> BTreeMap<u64, i64> {
        let mut out: BTreeMap<u64, i64> = BTreeMap::new();
        let map = if numerator_side { &self.num } else { &self.den };
        for (&r, &c) in map {
            let mut t = r;
            while t <= limit {
                *out.entry(t).or_insert(0) += c as i64;
                match t.checked_add(self.period) {
                    Some(next) => t = next,
                    None => break,
                }
            }
        }
        let sign = if numerator_side { 1 } else { -1 };
        for (&x, &s) in &self.boundary {
            if x <= limit && s.signum() == sign {
                let e = out.entry(x).or_insert(0);
                *e -= s.abs();
                if *e == 0 {
                    out.remove(&x);
                }
            }
        }
        out
    }
}

/// Rewrite `prod` at period `q` (a multiple of its period) as residue
/// multisets with boundary corrections.
pub fn canonicalize(prod: &WallisProduct, q: u64) -> CanonicalWallisForm {
    assert!(
        q >= prod.period() && q.is_multiple_of(prod.period()),
        "target period must be a positive multiple of the product period"
    );
    let mut out = CanonicalWallisForm::empty(q);
    let steps = q / prod.period();
    for &u in prod.num_residues() {
        for j in 0..steps {
            out.add_residue(u as u128 + j as u128 * prod.period() as u128, true);
        }
    }
    for &v in prod.den_residues() {
        for j in 0..steps {
            out.add_residue(v as u128 + j as u128 * prod.period() as u128, false);
        }
    }
    out
}

/// Canonicalize every product at the lcm of the periods and merge the
/// residue and boundary multisets.
pub fn disjoint_union(prods: &[WallisProduct]) -> Result<CanonicalWallisForm, ModelError> {
    if prods.is_empty() {
        return Err(ModelError::InvalidProduct("disjoint union of an empty list".into()));
    }
    let mut q: u128 = 1;
    for p in prods {
        let per = p.period() as u128;
        q = q / num::integer::gcd(q, per) * per;
        if q > u64::MAX as u128 {
            return Err(ModelError::InvalidProduct("combined period overflows".into()));
        }
    }
    let q = q as u64;
    let mut out = CanonicalWallisForm::empty(q);
    for p in prods {
        out.merge(&canonicalize(p, q));
    }
    Ok(out)
}

/// Multiset of a Wallis product's linear terms `<= limit` on one side,
/// enumerated directly from the periodic definition (brute-force view used
/// to validate canonical forms).
pub fn wallis_terms_up_to(prod: &WallisProduct, limit: u64, numerator_side: bool) -> BTreeMap<u64, i64> {
    let mut out: BTreeMap<u64, i64> = BTreeMap::new();
    let residues = if numerator_side {
        prod.num_residues()
    } else {
        prod.den_residues()
    };
    for &r in residues {
        let mut t = r;
        while t <= limit {
            *out.entry(t).or_insert(0) += 1;
            match t.checked_add(prod.period()) {
                Some(next) => t = next,
                None => break,
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn frac_list(p: &Product, count: usize) -> Vec<Rational> {
        match p {
            Product::Wallis(w) => w.fractions().take(count).collect(),
            Product::Catalan(c) => {
                let mut out: Vec<Rational> = c.prefix().iter().map(|(f, _)| f.clone()).collect();
                let mut t = 0u128;
                while out.len() < count {
                    out.push(c.stream().factor(t));
                    t += 1;
                }
                out
            }
        }
    }

    fn rats(spec: &[(i64, i64)]) -> Vec<Rational> {
        spec.iter().map(|&(n, d)| rat(n, d)).collect()
    }

    #[test]
    fn golden_printed_factor_order() {
        // First printed fractions of every catalog entry.
        let cases: Vec<(u32, Vec<Rational>)> = vec![
            (1, rats(&[(2, 1), (2, 3), (4, 3), (4, 5), (6, 5), (6, 7), (8, 7), (8, 9), (10, 9), (10, 11), (12, 11), (12, 13), (14, 13), (14, 15)])),
            (2, rats(&[(4, 3), (4, 5), (8, 7), (8, 9), (12, 11), (12, 13), (16, 15)])),
            (3, rats(&[(2, 1), (2, 3), (6, 5), (6, 7), (10, 9), (10, 11), (14, 13), (14, 15)])),
            (6, rats(&[(2, 3), (6, 5), (8, 7), (8, 9), (10, 11), (14, 13), (16, 15), (16, 17), (18, 19), (22, 21), (24, 23), (24, 25)])),
            (7, rats(&[(2, 1), (4, 3), (4, 5), (6, 7), (10, 9), (12, 11), (12, 13), (14, 15), (18, 17), (20, 19), (20, 21), (22, 23)])),
            (8, rats(&[(8, 7), (8, 9), (16, 15), (16, 17), (24, 23), (24, 25)])),
            (9, rats(&[(2, 3), (6, 5), (10, 11), (14, 13), (18, 19), (22, 21)])),
            (10, rats(&[(2, 3), (4, 3), (4, 5), (6, 5), (8, 7), (8, 9), (10, 11), (12, 11), (12, 13), (14, 13), (16, 15), (16, 17), (18, 19), (20, 19), (20, 21), (22, 21), (24, 23), (24, 25)])),
            (11, rats(&[(2, 1), (6, 7), (10, 9), (14, 15), (18, 17), (22, 23)])),
            (12, rats(&[(3, 2), (3, 4), (6, 5), (6, 7), (9, 8), (9, 10)])),
            (4, rats(&[(2, 1), (4, 3), (6, 5), (8, 7), (10, 9), (12, 11), (14, 13), (16, 15)])),
            (5, rats(&[(2, 1), (2, 3), (4, 3), (4, 5), (6, 5), (6, 7), (8, 7), (8, 9), (10, 9), (10, 11), (12, 11), (12, 13), (14, 13), (14, 15), (16, 15)])),
            (15, rats(&[(2, 3), (4, 5), (6, 7), (8, 9), (10, 11), (12, 13), (14, 15)])),
            (16, rats(&[(2, 1), (2, 3), (6, 5), (6, 7), (10, 9), (10, 11), (14, 13), (14, 15)])),
            (17, rats(&[(2, 1), (4, 3), (4, 5), (8, 7), (8, 9), (12, 11), (12, 13), (16, 15)])),
            (18, rats(&[(3, 2), (3, 4), (6, 5), (6, 7), (9, 8), (9, 10), (12, 11), (12, 13), (15, 14), (15, 16), (18, 17), (18, 19), (21, 20), (21, 22), (24, 23), (24, 25), (27, 26)])),
            (20, rats(&[(2, 1), (2, 1), (2, 1)])),
        ];
        for (id, expected) in cases {
            let p = builtin(id).unwrap();
            let got = frac_list(&p, expected.len());
            assert_eq!(got, expected, "builtin({id}) factor order");
        }
    }

    #[test]
    fn builtin_structures_from_examples() {
        let Product::Wallis(w) = builtin(7).unwrap() else { panic!() };
        assert_eq!((w.period(), w.num_residues(), w.den_residues()), (8, &[2, 4, 4, 6][..], &[1, 3, 5, 7][..]));
        let Product::Wallis(w) = builtin(9).unwrap() else { panic!() };
        assert_eq!((w.period(), w.num_residues(), w.den_residues()), (8, &[2, 6][..], &[3, 5][..]));
        let Product::Catalan(c) = builtin(16).unwrap() else { panic!() };
        assert_eq!(c.prefix(), &[(rat(2, 1), rat(1, 1))]);
        assert_eq!(
            c.stream(),
            &FactorStream::Pairs {
                period: 8,
                pairs: vec![(2, 1), (2, 3), (6, 5), (6, 7)],
                start_offset: 1
            }
        );
        assert_eq!(c.schedule(), &BlockSchedule::Pippenger { base: 2 });
        assert_eq!(builtin(13).unwrap_err(), ModelError::UnknownBuiltin(13));
    }

    #[test]
    fn balance_is_enforced() {
        let err = WallisProduct::new(8, vec![2, 4, 4, 6], vec![1, 3, 5, 8]).unwrap_err();
        assert_eq!(
            err,
            ModelError::UnbalancedResidues {
                num_sum: 16,
                den_sum: 17
            }
        );
    }

    #[test]
    fn general_constructor_matches_catalog() {
        assert_eq!(Product::Wallis(wallis_general(2)), builtin(1).unwrap());
        assert_eq!(Product::Wallis(wallis_general(3)), builtin(12).unwrap());
        assert_eq!(Product::Wallis(wallis_general(4)), builtin(2).unwrap());
        assert_eq!(Product::Catalan(pippenger_general(2)), builtin(5).unwrap());
        assert_eq!(Product::Catalan(pippenger_general(3)), builtin(18).unwrap());
    }

    #[test]
    fn balance_holds_for_general_constructor() {
        for k in 2..=100 {
            let w = wallis_general(k);
            let num: u128 = w.num_residues().iter().map(|&r| r as u128).sum();
            let den: u128 = w.den_residues().iter().map(|&r| r as u128).sum();
            assert_eq!(num, den);
        }
    }

    #[test]
    fn pippenger_block_rule() {
        // K=2 reproduces sizes 1, 2, 4, 8, ...; K=3 sizes 1, 4, 12, 36, ...
        let s2 = BlockSchedule::Pippenger { base: 2 };
        let sizes: Vec<u128> = (1..=5).map(|k| s2.block(k).unwrap().0).collect();
        assert_eq!(sizes, vec![1, 2, 4, 8, 16]);
        let s3 = BlockSchedule::Pippenger { base: 3 };
        let sizes: Vec<u128> = (1..=5).map(|k| s3.block(k).unwrap().0).collect();
        assert_eq!(sizes, vec![1, 4, 12, 36, 108]);
        // K=4: sizes 1, 6, 24, 96 with exponents 1/4, 1/16, 1/64, 1/256.
        let s4 = BlockSchedule::Pippenger { base: 4 };
        for (k, size, den) in [(1u64, 1u128, 4i64), (2, 6, 16), (3, 24, 64), (4, 96, 256)] {
            let (s, e) = s4.block(k).unwrap();
            assert_eq!(s, size);
            assert_eq!(e, rat(1, den));
        }
    }

    #[test]
    fn cumulative_block_sizes_match_direct_sum() {
        for k in 2u64..=10 {
            let sched = BlockSchedule::Pippenger { base: k };
            let mut cumulative: u128 = 0;
            for block in sched.blocks().take(12) {
                assert_eq!(block.start, cumulative);
                cumulative += block.size;
                // Direct summation 1 + sum_{j=2..n} 2(K-1)K^(j-2) = 2K^(n-1) - 1.
                let n = block.index;
                let direct: u128 = 1
                    + (2..=n)
                        .map(|j| 2 * (k as u128 - 1) * (k as u128).pow(j as u32 - 2))
                        .sum::<u128>();
                assert_eq!(cumulative, direct);
                assert_eq!(cumulative, 2 * (k as u128).pow(n as u32 - 1) - 1);
            }
        }
    }

    #[test]
    fn stream_factor_examples() {
        let Product::Catalan(c5) = builtin(5).unwrap() else { panic!() };
        assert_eq!(c5.stream().factor(0), rat(2, 1));
        let Product::Catalan(c18) = builtin(18).unwrap() else { panic!() };
        assert_eq!(c18.stream().factor(1), rat(3, 4));
        assert_eq!(FactorStream::Const(rat(2, 1)).factor(17), rat(2, 1));
    }

    #[test]
    fn canonicalize_examples() {
        // builtin(1) at Q=8: num {2,4,6,8} x2, den {1,1,3,3,5,5,7,7} with a
        // denominator-side exclusion of the integer 1 (from residue 9).
        let Product::Wallis(w1) = builtin(1).unwrap() else { panic!() };
        let c = canonicalize(&w1, 8);
        assert_eq!(c.num_residues(), &BTreeMap::from([(2, 2), (4, 2), (6, 2), (8, 2)]));
        assert_eq!(
            c.den_residues(),
            &BTreeMap::from([(1, 2), (3, 2), (5, 2), (7, 2)])
        );
        assert_eq!(c.boundary(), &BTreeMap::from([(1, -1)]));

        // builtin(7) at Q=8 is already canonical.
        let Product::Wallis(w7) = builtin(7).unwrap() else { panic!() };
        let c = canonicalize(&w7, 8);
        assert_eq!(c.num_residues(), &BTreeMap::from([(2, 1), (4, 2), (6, 1)]));
        assert_eq!(c.den_residues(), &BTreeMap::from([(1, 1), (3, 1), (5, 1), (7, 1)]));
        assert!(c.boundary().is_empty());

        // builtin(12) at Q=3: den residue 4 reduces to 1, excluding integer 1.
        let Product::Wallis(w12) = builtin(12).unwrap() else { panic!() };
        let c = canonicalize(&w12, 3);
        assert_eq!(c.num_residues(), &BTreeMap::from([(3, 2)]));
        assert_eq!(c.den_residues(), &BTreeMap::from([(1, 1), (2, 1)]));
        assert_eq!(c.boundary(), &BTreeMap::from([(1, -1)]));
    }

    #[test]
    fn canonical_form_regenerates_source_terms() {
        // Round-trip: term multisets agree with the periodic definition over
        // a window of 10*Q.
        for id in WALLIS_BUILTIN_IDS {
            let Product::Wallis(w) = builtin(id).unwrap() else { panic!() };
            for mult in [1u64, 2] {
                let q = w.period() * mult;
                let c = canonicalize(&w, q);
                let limit = 10 * q;
                for side in [true, false] {
                    assert_eq!(
                        c.terms_up_to(limit, side),
                        wallis_terms_up_to(&w, limit, side),
                        "builtin({id}) at Q={q}, numerator={side}"
                    );
                }
            }
        }
    }

    #[test]
    fn refine_commutes_with_direct_canonicalization() {
        for id in WALLIS_BUILTIN_IDS {
            let Product::Wallis(w) = builtin(id).unwrap() else { panic!() };
            let q = w.period();
            let via_refine = canonicalize(&w, q).refine(2 * q);
            let direct = canonicalize(&w, 2 * q);
            assert_eq!(via_refine, direct, "builtin({id})");
        }
    }

    #[test]
    fn disjoint_union_examples() {
        let get = |id: u32| -> WallisProduct {
            match builtin(id).unwrap() {
                Product::Wallis(w) => w,
                _ => panic!(),
            }
        };
        // (6) x (7) equals (1) at Q=8.
        let u = disjoint_union(&[get(6), get(7)]).unwrap();
        assert_eq!(u, canonicalize(&get(1), 8));
        // (9) x (11) equals (3) at Q=8.
        let u = disjoint_union(&[get(9), get(11)]).unwrap();
        assert_eq!(u, canonicalize(&get(3), 8));
        // Singleton union is plain canonicalization.
        let u = disjoint_union(&[get(7)]).unwrap();
        assert_eq!(u, canonicalize(&get(7), 8));
    }
}
