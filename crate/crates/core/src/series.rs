//! The derived p-series `G_{i+1} = [G_i, G_i] G_i^p`, run on presentations:
//! each step builds the full mod-p cover, rewrites it with
//! Reidemeister–Schreier and continues from the new presentation.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::One;

use crate::bounds::{self, RationalBounds};
use crate::cover::{build_cover, cover_betti, full_mod_p_epi, reidemeister_schreier};
use crate::error::{Error, Result};
use crate::linalg::Prime;
use crate::presentation::{ComplexBetti, Presentation};

/// One passage from `G_i` to `G_{i+1}`.
#[derive(Clone, Debug)]
pub struct DerivedStep {
    pub presentation: Presentation,
    pub cover_betti: ComplexBetti,
    pub schreier_betti: ComplexBetti,
    pub trivial_faces: usize,
    /// `[G_i : G_{i+1}] = p^{b₁(G_i)}`
    pub index_factor: BigUint,
}

pub fn derived_p_step(pres: &Presentation, p: Prime, budget: u64) -> Result<DerivedStep> {
    let epi = full_mod_p_epi(pres, p)?;
    let cover = build_cover(pres, &epi, budget)?;
    let cb = cover_betti(&cover)?;
    let rs = reidemeister_schreier(&cover)?;
    let sb = rs.presentation.complex_betti(p);
    if sb.b1 != cb.b1 || sb.b2 + rs.trivial_faces != cb.b2 {
        return Err(Error::Invariant(format!(
            "rewritten presentation has b1 = {}, b2 = {} but the cover has b1 = {}, b2 = {} ({} trivial faces)",
            sb.b1, sb.b2, cb.b1, cb.b2, rs.trivial_faces
        )));
    }
    Ok(DerivedStep {
        presentation: rs.presentation,
        cover_betti: cb,
        schreier_betti: sb,
        trivial_faces: rs.trivial_faces,
        index_factor: BigUint::from(p.get()).pow(epi.n() as u32),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesStep {
    pub i: usize,
    /// `[G : G_i]`
    pub index: BigUint,
    pub b1: usize,
    pub b2_complex: usize,
    pub generators: usize,
    pub relators: usize,
    /// Best-level homology bound computed from step `i − 1`.
    pub predicted_floor: Option<BigInt>,
    pub level_star: Option<u64>,
    /// Whether `b1` meets the bound from step `i − 1` at every level.
    pub bound_holds: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrowthTrace {
    pub p: Prime,
    pub steps: Vec<SeriesStep>,
    /// Why the trace ended before `max_steps`, if it did.
    pub stopped: Option<String>,
}

impl GrowthTrace {
    pub fn bounds_hold(&self) -> bool {
        self.steps.iter().all(|s| s.bound_holds != Some(false))
    }
}

/// Run up to `max_steps` terms of the series (the seed counts as step 1).
pub fn run_series(pres: &Presentation, p: Prime, max_steps: usize, budget: u64) -> Result<GrowthTrace> {
    let mut steps = Vec::new();
    let mut current = pres.clone();
    let mut index = BigUint::one();
    let mut prev: Option<(usize, usize)> = None;
    let mut stopped = None;
    for i in 1..=max_steps {
        let betti = current.complex_betti(p);
        let (mut predicted_floor, mut level_star, mut bound_holds) = (None, None, None);
        if let Some((b1, b2)) = prev {
            let (b1, b2) = (b1 as u64, b2 as u64);
            let sweep = bounds::level_sweep(b1, b2, b1, p)?;
            let (l, best) = bounds::best_level(b1, b2, b1, p)?;
            bound_holds = Some(sweep.iter().all(|b| BigInt::from(betti.b1) >= *b));
            predicted_floor = Some(best);
            level_star = Some(l);
        }
        steps.push(SeriesStep {
            i,
            index: index.clone(),
            b1: betti.b1,
            b2_complex: betti.b2,
            generators: current.gen_count(),
            relators: current.relator_count(),
            predicted_floor,
            level_star,
            bound_holds,
        });
        if i == max_steps {
            break;
        }
        match derived_p_step(&current, p, budget) {
            Ok(step) => {
                index *= &step.index_factor;
                prev = Some((betti.b1, betti.b2));
                current = step.presentation;
            }
            Err(e @ (Error::BudgetExceeded { .. } | Error::NoModPHomology { .. })) => {
                stopped = Some(format!("step {}: {e}", i + 1));
                break;
            }
            Err(e) => return Err(e),
        }
    }
    Ok(GrowthTrace { p, steps, stopped })
}

/// `b₁ · √(log₂ index) · log₂ log₂ index / index`, the quantity whose
/// lower boundedness is the asymptotic homology growth statement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatioRow {
    pub i: usize,
    pub index: BigUint,
    pub b1: BigInt,
    /// `None` when the index is below 2¹⁶.
    pub ratio: Option<RationalBounds>,
}

/// Ratio rows for every step after the first.
pub fn homology_ratio_rows(rows: &[(BigUint, BigInt)]) -> Result<Vec<RatioRow>> {
    let threshold = BigUint::one() << 16u32;
    rows.iter()
        .enumerate()
        .skip(1)
        .map(|(k, (index, b1))| {
            let ratio = if index >= &threshold {
                let idx = RationalBounds::exact(BigRational::from_integer(BigInt::from(index.clone())));
                let log = idx.log2()?;
                let factor = log.sqrt()?.mul(&log.log2()?);
                let scaled = factor.mul(&RationalBounds::exact(BigRational::from_integer(b1.clone())));
                Some(scaled.div(&idx))
            } else {
                None
            };
            Ok(RatioRow { i: k + 1, index: index.clone(), b1: b1.clone(), ratio })
        })
        .collect()
}

/// `(index, b₁)` rows from a series trace.
pub fn trace_rows(trace: &GrowthTrace) -> Vec<(BigUint, BigInt)> {
    trace.steps.iter().map(|s| (s.index.clone(), BigInt::from(s.b1))).collect()
}

/// `(index, b₁)` rows implied by the recurrence: `[G:G_i] = 2^{σ_{i−1}}`.
/// Rows whose index would exceed 2^limit_bits are omitted.
pub fn recurrence_rows(states: &[bounds::RecurrenceState], limit_bits: u64) -> Vec<(BigUint, BigInt)> {
    let mut out = Vec::new();
    let mut sigma_prev = BigInt::from(0);
    for st in states {
        let Some(e) = num_traits::ToPrimitive::to_u64(&sigma_prev).filter(|&e| e <= limit_bits) else { break };
        out.push((BigUint::one() << e, st.x.clone()));
        sigma_prev = st.sigma.clone();
    }
    out
}
