//! Exact evaluation of the homology lower bounds for elementary abelian
//! covers, the derived 2-series recurrence, the b₂/b₁ iteration, and the
//! subgroup growth floors and ceilings.
//!
//! Everything is big-integer or rational arithmetic. Irrational quantities
//! (logarithms, square roots) are returned as rational enclosures.

use std::cmp::Ordering;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{gaussian_binomial, subspace_count, Prime};

/// Inputs of the cover bound: `b₁`, `b₂` of the base group, rank `n` of the
/// elementary abelian quotient, level `ℓ`, prime `p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BoundSpec {
    pub b1: u64,
    pub b2: u64,
    pub n: u64,
    pub level: u64,
    pub p: Prime,
}

impl BoundSpec {
    pub fn new(b1: u64, b2: u64, n: u64, level: u64, p: Prime) -> Result<Self> {
        if n > b1 {
            return Err(Error::InvalidBound(format!("n = {n} exceeds b1 = {b1}")));
        }
        if level > n {
            return Err(Error::InvalidBound(format!("level {level} exceeds n = {n}")));
        }
        Ok(BoundSpec { b1, b2, n, level, p })
    }
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// `Σ_{r=lo}^{hi} C(n, r)`, empty (zero) when `hi < lo`.
pub fn binomial_sum(n: u64, lo: i64, hi: i64) -> BigInt {
    let mut acc = BigInt::zero();
    let mut r = lo.max(0);
    while r <= hi {
        acc += BigInt::from(binomial(n, r as u64));
        r += 1;
    }
    acc
}

/// Number of test loops at level ℓ: the `b₂ = 0` case of the bound.
pub fn test_loop_count(b1: u64, n: u64, level: u64, p: Prime) -> BigInt {
    let l = level as i64;
    if p.get() == 2 {
        BigInt::from(b1) * binomial_sum(n, 0, l) - binomial_sum(n, 1, l + 1)
    } else {
        let mut first = BigInt::zero();
        for r in 2..=(l + 1) {
            first += BigInt::from(binomial(n, r as u64)) * BigInt::from(r - 1);
        }
        first + BigInt::from(b1 as i64 - n as i64) * binomial_sum(n, 0, l)
    }
}

/// Number of constraints `b₂ Σ_{r=0}^{ℓ−1} C(n, r)`.
pub fn constraint_count(b2: u64, n: u64, level: u64) -> BigInt {
    BigInt::from(b2) * binomial_sum(n, 0, level as i64 - 1)
}

/// Lower bound on `b₁(K; F_p)` for a normal subgroup `K` with
/// `G/K ≅ (Z/p)^n`, at level ℓ. May be negative.
pub fn homology_lower_bound(spec: &BoundSpec) -> BigInt {
    test_loop_count(spec.b1, spec.n, spec.level, spec.p) - constraint_count(spec.b2, spec.n, spec.level)
}

/// The level-1, `n = b₁`, p = 2 case compared with `C(b₁,2) + b₁ − b₂`.
pub fn gamma2_identity(b1: u64, b2: u64) -> Result<(BigInt, BigInt)> {
    let spec = BoundSpec::new(b1, b2, b1, 1.min(b1), Prime::TWO)?;
    let lhs = homology_lower_bound(&spec);
    let rhs = BigInt::from(binomial(b1, 2)) + BigInt::from(b1) - BigInt::from(b2);
    Ok((lhs, rhs))
}

/// The bound at every level `0..=n`.
pub fn level_sweep(b1: u64, b2: u64, n: u64, p: Prime) -> Result<Vec<BigInt>> {
    (0..=n).map(|l| BoundSpec::new(b1, b2, n, l, p).map(|s| homology_lower_bound(&s))).collect()
}

/// The level maximizing the bound, smallest level on ties.
pub fn best_level(b1: u64, b2: u64, n: u64, p: Prime) -> Result<(u64, BigInt)> {
    let sweep = level_sweep(b1, b2, n, p)?;
    let mut best = (0u64, sweep[0].clone());
    for (l, v) in sweep.into_iter().enumerate() {
        if v > best.1 {
            best = (l as u64, v);
        }
    }
    Ok(best)
}

/// One step of the derived 2-series recurrence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecurrenceState {
    pub i: usize,
    pub x: BigInt,
    pub sigma: BigInt,
}

/// Largest `x_i` for which the next term is computed.
pub const RECURRENCE_LIMIT: u64 = 1 << 16;

/// `x_{i+1} = x_i·C(x_i, ⌊x_i/2⌋) − 2^{x_i}·max{1, 1 + cap}`, from `x₁`,
/// producing at most `steps + 1` states. Stops after a non-positive term or
/// when `x_i` exceeds [`RECURRENCE_LIMIT`].
pub fn derived2_recurrence(x1: u64, cap: i64, steps: usize) -> Vec<RecurrenceState> {
    let mut states = vec![RecurrenceState { i: 1, x: BigInt::from(x1), sigma: BigInt::from(x1) }];
    let factor = BigInt::from(1.max(1 + cap));
    for i in 1..=steps {
        let last = &states[i - 1];
        if !last.x.is_positive() {
            break;
        }
        let Some(x) = last.x.to_u64().filter(|&x| x <= RECURRENCE_LIMIT) else { break };
        let next = BigInt::from(x) * BigInt::from(binomial(x, x / 2)) - (BigInt::one() << x) * &factor;
        let sigma = &last.sigma + &next;
        states.push(RecurrenceState { i: i + 1, x: next, sigma });
    }
    states
}

/// `a² ≥ b²·c` style comparisons need non-negative operands; all callers
/// here compare non-negative integers.
fn ge(a: &BigInt, b: &BigInt) -> bool {
    a.cmp(b) != Ordering::Less
}

/// `x·C(x, ⌊x/2⌋) ≥ λ·2^x·√x`, squared to stay in integers.
pub fn stirling_holds(x: u64, lambda: &Ratio<u64>) -> bool {
    let lhs = BigInt::from(x) * BigInt::from(binomial(x, x / 2));
    let (ln, ld) = (BigInt::from(*lambda.numer()), BigInt::from(*lambda.denom()));
    &lhs * &lhs * &ld * &ld >= &ln * &ln * (BigInt::one() << (2 * x)) * BigInt::from(x)
}

/// Per-step verdicts on the three growth claims for a recurrence trace.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClaimCheck {
    pub i: usize,
    /// `x_{i+1} ≥ λ 2^{x_i} √x_i`; `None` on the last state.
    pub next_term: Option<bool>,
    /// `2^{σ_i} ≤ λ 2^{x_i} x_i (log₂ x_i)^{2/3}`; `None` when undecided.
    pub sigma_power: Option<bool>,
    /// `x_i ≥ 2^{σ_{i−1}} / (σ_{i−1}^{1/2} (log₂ σ_{i−1})^{2/3})`, for `i ≥ 2`.
    pub index_ratio: Option<bool>,
}

/// Integer bounds `lo ≤ log₂ m < hi` with `lo = bits − 1`.
fn log2_floor_ceil(m: &BigInt) -> (BigInt, BigInt) {
    let bits = m.bits();
    let lo = BigInt::from(bits - 1);
    let exact = m.magnitude().trailing_zeros() == Some(bits - 1);
    let hi = if exact { lo.clone() } else { BigInt::from(bits) };
    (lo, hi)
}

/// Decide `2^{3s} ≤ λ³ x³ L²` where `L = log₂ x` is only known to lie in
/// `[lo, hi]`: true if it holds at `lo`, false if it fails at `hi`.
fn sigma_power_check(s: &BigInt, x: &BigInt, lambda: &Ratio<u64>) -> Option<bool> {
    if !x.is_positive() || s.is_negative() {
        return None;
    }
    let s = s.to_u64()?;
    if s > 1 << 24 {
        return None;
    }
    let (lo, hi) = log2_floor_ceil(x);
    let (ln, ld) = (BigInt::from(*lambda.numer()), BigInt::from(*lambda.denom()));
    let lhs = (BigInt::one() << (3 * s)) * ld.pow(3);
    let rhs = |l: &BigInt| ln.pow(3) * x.pow(3) * l * l;
    if ge(&rhs(&lo), &lhs) {
        Some(true)
    } else if !ge(&rhs(&hi), &lhs) {
        Some(false)
    } else {
        None
    }
}

/// Evaluate the growth claims on a recurrence trace.
pub fn check_claims(states: &[RecurrenceState], lambda: &Ratio<u64>) -> Vec<ClaimCheck> {
    let (ln, ld) = (BigInt::from(*lambda.numer()), BigInt::from(*lambda.denom()));
    states
        .iter()
        .enumerate()
        .map(|(k, st)| {
            let next_term = states.get(k + 1).and_then(|nx| {
                let x = st.x.to_u64().filter(|&x| x <= RECURRENCE_LIMIT)?;
                if !nx.x.is_positive() {
                    return Some(false);
                }
                Some(ge(&(&nx.x * &nx.x * &ld * &ld), &(&ln * &ln * (BigInt::one() << (2 * x)) * BigInt::from(x))))
            });
            // 2^{σ_i} = 2^{σ_{i−1}}·2^{x_i}, so compare 2^{σ_{i−1}} with λ x_i L^{2/3}.
            let prev_sigma = if k == 0 { BigInt::zero() } else { states[k - 1].sigma.clone() };
            let sigma_power = sigma_power_check(&prev_sigma, &st.x, lambda);
            let index_ratio = if k == 0 {
                None
            } else {
                index_ratio_check(&st.x, &states[k - 1].sigma)
            };
            ClaimCheck { i: st.i, next_term, sigma_power, index_ratio }
        })
        .collect()
}

/// `x⁶ σ³ L⁴ ≥ 2^{6σ}` with `L = log₂ σ` bounded as in [`sigma_power_check`].
fn index_ratio_check(x: &BigInt, sigma: &BigInt) -> Option<bool> {
    if !x.is_positive() || sigma < &BigInt::from(2) {
        return None;
    }
    let s = sigma.to_u64().filter(|&s| s <= 1 << 24)?;
    let (lo, hi) = log2_floor_ceil(sigma);
    let lhs = BigInt::one() << (6 * s);
    let rhs = |l: &BigInt| x.pow(6) * sigma.pow(3) * l.pow(4);
    if ge(&rhs(&lo), &lhs) {
        Some(true)
    } else if !ge(&rhs(&hi), &lhs) {
        Some(false)
    } else {
        None
    }
}

/// One step of the b₂/b₁ iteration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct B2B1Step {
    pub i: usize,
    pub b1: BigInt,
    /// `b·p − n²/2 − 3n/2` for the previous term `b`; `None` on the seed.
    pub floor: Option<BigRational>,
}

/// `b_{i+1} = C(n,2) + (b_i − n)(n+1) − m·b_i` with `n = m + p − 1`.
pub fn b2b1_iteration(b1_0: u64, m: u64, p: Prime, steps: usize) -> Result<Vec<B2B1Step>> {
    if m == 0 {
        return Err(Error::InvalidBound("m must be at least 1".into()));
    }
    let n = BigInt::from(m + p.get() as u64 - 1);
    let mut out = vec![B2B1Step { i: 0, b1: BigInt::from(b1_0), floor: None }];
    for i in 1..=steps {
        let b = out[i - 1].b1.clone();
        let next: BigInt = BigInt::from(binomial(m + p.get() as u64 - 1, 2)) + (&b - &n) * (&n + 1) - BigInt::from(m) * &b;
        let floor = BigRational::from_integer(&b * BigInt::from(p.get()))
            - BigRational::new(&n * &n + BigInt::from(3) * &n, BigInt::from(2));
        if BigRational::from_integer(next.clone()) < floor {
            return Err(Error::Invariant(format!("iterate {next} below its floor {floor}")));
        }
        out.push(B2B1Step { i, b1: next, floor: Some(floor) });
    }
    Ok(out)
}

/// A closed rational interval.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalBounds {
    pub lo: BigRational,
    pub hi: BigRational,
}

/// Fractional bits used for logarithms and square roots.
const PRECISION: u64 = 96;
const LOG_BITS: u64 = 64;

impl RationalBounds {
    pub fn exact(v: BigRational) -> Self {
        RationalBounds { lo: v.clone(), hi: v }
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, v: &BigRational) -> bool {
        &self.lo <= v && v <= &self.hi
    }

    /// Product of intervals of positive numbers.
    pub fn mul(&self, o: &RationalBounds) -> RationalBounds {
        RationalBounds { lo: &self.lo * &o.lo, hi: &self.hi * &o.hi }
    }

    /// Quotient of intervals of positive numbers.
    pub fn div(&self, o: &RationalBounds) -> RationalBounds {
        RationalBounds { lo: &self.lo / &o.hi, hi: &self.hi / &o.lo }
    }

    /// `log₂` of an interval of positive numbers.
    pub fn log2(&self) -> Result<RationalBounds> {
        Ok(RationalBounds { lo: log2_rational(&self.lo)?.lo, hi: log2_rational(&self.hi)?.hi })
    }

    /// Square root of an interval of non-negative numbers.
    pub fn sqrt(&self) -> Result<RationalBounds> {
        Ok(RationalBounds { lo: sqrt_rational(&self.lo)?.lo, hi: sqrt_rational(&self.hi)?.hi })
    }

    pub fn to_strings(&self) -> (String, String) {
        (self.lo.to_string(), self.hi.to_string())
    }
}

fn log2_uint(m: &BigUint) -> RationalBounds {
    let e = m.bits() - 1;
    if m.trailing_zeros() == Some(e) {
        return RationalBounds::exact(BigRational::from_integer(BigInt::from(e)));
    }
    // y = m / 2^e in (1, 2), fixed point with PRECISION fractional bits.
    let scaled = BigUint::from(m.clone()) << PRECISION;
    let (q, r) = scaled.div_rem(&(BigUint::one() << e));
    let mut y_lo = q.clone();
    let mut y_hi = if r.is_zero() { q } else { q + 1u32 };
    let two = BigUint::from(2u32) << PRECISION;
    let (mut bits_lo, mut bits_hi) = (BigUint::zero(), BigUint::zero());
    let mask_div = BigUint::one() << PRECISION;
    for _ in 0..LOG_BITS {
        y_lo = &y_lo * &y_lo / &mask_div;
        let sq = &y_hi * &y_hi;
        let (q, r) = sq.div_rem(&mask_div);
        y_hi = if r.is_zero() { q } else { q + 1u32 };
        bits_lo <<= 1;
        bits_hi <<= 1;
        if y_lo >= two {
            bits_lo += 1u32;
            y_lo >>= 1;
        }
        if y_hi >= two {
            bits_hi += 1u32;
            y_hi = (&y_hi + 1u32) >> 1;
        }
    }
    let den = BigInt::one() << LOG_BITS;
    let base = BigInt::from(e) * &den;
    RationalBounds {
        lo: BigRational::new(&base + BigInt::from(bits_lo), den.clone()),
        hi: BigRational::new(&base + BigInt::from(bits_hi) + 1, den),
    }
}

/// Rational enclosure of `log₂ q`, exact for powers of two.
pub fn log2_rational(q: &BigRational) -> Result<RationalBounds> {
    if !q.is_positive() {
        return Err(Error::InvalidBound(format!("log of non-positive {q}")));
    }
    let num = log2_uint(q.numer().magnitude());
    let den = log2_uint(q.denom().magnitude());
    Ok(RationalBounds { lo: &num.lo - &den.hi, hi: &num.hi - &den.lo })
}

/// Rational enclosure of `√q`, exact when numerator and denominator are squares.
pub fn sqrt_rational(q: &BigRational) -> Result<RationalBounds> {
    if q.is_negative() {
        return Err(Error::InvalidBound(format!("square root of negative {q}")));
    }
    let (n, d) = (q.numer().magnitude(), q.denom().magnitude());
    let (sn, sd) = (n.sqrt(), d.sqrt());
    if &(&sn * &sn) == n && &(&sd * &sd) == d {
        return Ok(RationalBounds::exact(BigRational::new(BigInt::from(sn), BigInt::from(sd))));
    }
    let scale = BigUint::one() << (2 * PRECISION);
    let (fl, rem) = (n * &scale).div_rem(d);
    let root_lo = fl.sqrt();
    let ceil = if rem.is_zero() { fl } else { fl + 1u32 };
    let mut root_hi = ceil.sqrt();
    if &root_hi * &root_hi < ceil {
        root_hi += 1u32;
    }
    let den = BigInt::one() << PRECISION;
    Ok(RationalBounds {
        lo: BigRational::new(BigInt::from(root_lo), den.clone()),
        hi: BigRational::new(BigInt::from(root_hi), den),
    })
}

/// The growth functions that can be evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GrowthMode {
    /// `2^{n / (√(log n) · log log n)}`, the subgroup growth floor.
    SubgroupFloor,
    /// `n / (√(log n) · log log n)` evaluated at an index `n`.
    HomologyRatio,
    /// `k^n`, the ceiling on subnormal subgroup counts.
    SubnormalCeiling,
    /// `k^{n log n}`, the ceiling on subgroup counts.
    SubgroupCeiling,
}

/// A growth function value: either `base^exponent` or a plain value,
/// with exact forms when the enclosure collapses to a point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrowthValue {
    pub mode: GrowthMode,
    pub n: BigUint,
    /// Base of the power, when the value is a power.
    pub base: Option<u64>,
    /// The exponent (for powers) or the value itself (for ratios).
    pub quantity: RationalBounds,
    /// Exact decimal value when it is an integer of manageable size.
    pub value: Option<BigUint>,
}

/// Largest exponent expanded into a decimal value.
const EXPAND_LIMIT: u64 = 1 << 16;

fn expand_power(base: u64, exponent: &RationalBounds) -> Option<BigUint> {
    if !exponent.is_exact() || !exponent.lo.is_integer() {
        return None;
    }
    let e = exponent.lo.to_integer().to_u64()?;
    if e.saturating_mul(64 - base.leading_zeros() as u64) > EXPAND_LIMIT * 8 {
        return None;
    }
    Some(BigUint::from(base).pow(e as u32))
}

/// `n / (√(log₂ n) · log₂ log₂ n)` as an enclosure.
fn iterated_log_ratio(n: &BigUint) -> Result<RationalBounds> {
    let nq = RationalBounds::exact(BigRational::from_integer(BigInt::from(n.clone())));
    let log = nq.log2()?;
    let loglog = log.log2()?;
    Ok(nq.div(&log.sqrt()?.mul(&loglog)))
}

/// Evaluate a growth function. The logarithmic modes need `n ≥ 16`.
pub fn growth_value(mode: GrowthMode, n: &BigUint, k: u64) -> Result<GrowthValue> {
    let needs_logs = matches!(mode, GrowthMode::SubgroupFloor | GrowthMode::HomologyRatio);
    if needs_logs && n < &BigUint::from(16u32) {
        return Err(Error::InvalidBound(format!("n = {n} is below 16, where the iterated logarithm is too small")));
    }
    let n_rat = BigRational::from_integer(BigInt::from(n.clone()));
    Ok(match mode {
        GrowthMode::SubgroupFloor => {
            let exponent = iterated_log_ratio(n)?;
            let value = expand_power(2, &exponent);
            GrowthValue { mode, n: n.clone(), base: Some(2), quantity: exponent, value }
        }
        GrowthMode::HomologyRatio => {
            let q = iterated_log_ratio(n)?;
            let value = if q.is_exact() && q.lo.is_integer() { q.lo.to_integer().to_biguint() } else { None };
            GrowthValue { mode, n: n.clone(), base: None, quantity: q, value }
        }
        GrowthMode::SubnormalCeiling => {
            let exponent = RationalBounds::exact(n_rat);
            let value = expand_power(k, &exponent);
            GrowthValue { mode, n: n.clone(), base: Some(k), quantity: exponent, value }
        }
        GrowthMode::SubgroupCeiling => {
            if n.is_zero() {
                return Err(Error::InvalidBound("n must be positive".into()));
            }
            let exponent = RationalBounds::exact(n_rat.clone()).mul(&RationalBounds::exact(n_rat).log2()?);
            let value = expand_power(k, &exponent);
            GrowthValue { mode, n: n.clone(), base: Some(k), quantity: exponent, value }
        }
    })
}

/// Subnormal floors attached to a quotient of rank `b1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubnormalFloor {
    /// `p^{b1}`
    pub power: BigUint,
    /// Subgroups of index at most p in `F_p^{b1}`: `1 + (p^{b1} − 1)/(p − 1)`.
    pub index_p_count: BigUint,
    /// All subspaces of `F_p^{b1}`.
    pub subspace_count: BigUint,
}

pub fn subnormal_floor(b1: u32, p: Prime) -> SubnormalFloor {
    SubnormalFloor {
        power: BigUint::from(p.get()).pow(b1),
        index_p_count: BigUint::one() + gaussian_binomial(b1, 1, p),
        subspace_count: subspace_count(b1, p),
    }
}
