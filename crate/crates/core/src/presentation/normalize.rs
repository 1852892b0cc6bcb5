//! Partitioning a presentation into `⟨X₁, X₂, X₃ | R₁, R₂, R₃⟩` and checking
//! the weight conditions a cocycle construction relies on.
//!
//! `X₁` maps onto a basis of `(Z/p)^n`, `X₁ ∪ X₂` is a basis of `H₁(G; F_p)`,
//! and each `x₃ ∈ X₃` is eliminated by a relator `x₃⁻¹·f(x₃)` whose witness
//! `f(x₃)` has every exponent sum divisible by p. The automatic search for
//! witnesses is not attempted; callers supply them.

use std::collections::BTreeMap;

use serde::Serialize;

use super::Presentation;
use crate::cover::Epimorphism;
use crate::error::{Error, Result};
use crate::linalg::{FpMatrix, Prime};
use crate::word::{self, Letter, Word};

/// Index sets into the generator and relator lists, each sorted.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Partition {
    pub x1: Vec<usize>,
    pub x2: Vec<usize>,
    pub x3: Vec<usize>,
    pub r1: Vec<usize>,
    pub r2: Vec<usize>,
    pub r3: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct NormalizedPresentation {
    base: Presentation,
    p: Prime,
    partition: Partition,
    /// `x₃ ↦ f(x₃)`
    witnesses: BTreeMap<usize, Word>,
}

fn witness_relator(x3: usize, f: &Word) -> Word {
    word::reduce(std::iter::once(Letter::neg(x3)).chain(f.letters().iter().copied()))
}

impl Partition {
    /// The default partition: witnessed generators form `X₃`, generators with
    /// nonzero image form `X₁`, the rest `X₂`; each `x₃` claims the first
    /// relator equal to `x₃⁻¹·f(x₃)`, every other relator goes to `R₁`.
    pub fn derive(pres: &Presentation, epi: &Epimorphism, witnesses: &[(usize, Word)]) -> Result<Partition> {
        let mut part = Partition::default();
        let witnessed: BTreeMap<usize, &Word> = witnesses.iter().map(|(g, w)| (*g, w)).collect();
        for g in 0..pres.gen_count() {
            if witnessed.contains_key(&g) {
                part.x3.push(g);
            } else if epi.image(g).iter().any(|&c| c != 0) {
                part.x1.push(g);
            } else {
                part.x2.push(g);
            }
        }
        let mut claimed = vec![false; pres.relator_count()];
        for (&g, f) in &witnessed {
            let target = witness_relator(g, f);
            let Some(r) = (0..pres.relator_count()).find(|&r| !claimed[r] && pres.relators()[r] == target) else {
                return Err(Error::InvalidPartition(format!(
                    "no relator equals {} for the witness of `{}`",
                    pres.format_word(&target),
                    pres.generators()[g]
                )));
            };
            claimed[r] = true;
        }
        part.r3 = (0..pres.relator_count()).filter(|&r| claimed[r]).collect();
        part.r1 = (0..pres.relator_count()).filter(|&r| !claimed[r]).collect();
        Ok(part)
    }
}

fn check_cover(name: &str, sets: &[&Vec<usize>], total: usize) -> Result<()> {
    let mut seen = vec![false; total];
    for set in sets {
        for &i in set.iter() {
            if i >= total {
                return Err(Error::InvalidPartition(format!("{name} index {i} out of range")));
            }
            if std::mem::replace(&mut seen[i], true) {
                return Err(Error::InvalidPartition(format!("{name} index {i} appears twice")));
            }
        }
    }
    if let Some(i) = seen.iter().position(|s| !s) {
        return Err(Error::InvalidPartition(format!("{name} index {i} is in no part")));
    }
    Ok(())
}

fn weight_error(pres: &Presentation, r: usize, detail: String) -> Error {
    Error::WeightCondition { relator: r, word: pres.format_word(&pres.relators()[r]), detail }
}

/// First generator whose exponent sum in `w` is not divisible by p.
fn first_bad_generator(w: &Word, gens: usize, p: Prime, only: Option<&[usize]>) -> Option<(usize, i64)> {
    let sums = w.exponent_sums(gens);
    (0..gens)
        .filter(|g| only.map_or(true, |set| set.contains(g)))
        .find(|&g| sums[g].rem_euclid(p.get() as i64) != 0)
        .map(|g| (g, sums[g]))
}

/// Check every machine-checkable condition of the partitioned presentation.
/// With `partition = None` the default of [`Partition::derive`] is used.
pub fn normalize_witnessed(
    pres: &Presentation,
    epi: &Epimorphism,
    partition: Option<Partition>,
    witnesses: &[(usize, Word)],
) -> Result<NormalizedPresentation> {
    let p = epi.p();
    if epi.gen_count() != pres.gen_count() {
        return Err(Error::Dimension(format!(
            "epimorphism has {} generator images, presentation has {} generators",
            epi.gen_count(),
            pres.gen_count()
        )));
    }
    let part = match partition {
        Some(part) => part,
        None => Partition::derive(pres, epi, witnesses)?,
    };
    check_cover("generator", &[&part.x1, &part.x2, &part.x3], pres.gen_count())?;
    check_cover("relator", &[&part.r1, &part.r2, &part.r3], pres.relator_count())?;
    let names = pres.generators();

    let mut wit = BTreeMap::new();
    for (g, f) in witnesses {
        if !part.x3.contains(g) {
            return Err(Error::InvalidPartition(format!("witness given for `{}`, which is not in X3", names[*g])));
        }
        wit.insert(*g, f.clone());
    }
    for &g in &part.x3 {
        if !wit.contains_key(&g) {
            return Err(Error::MissingWitness(names[g].clone()));
        }
    }

    for &g in part.x2.iter().chain(&part.x3) {
        if epi.image(g).iter().any(|&c| c != 0) {
            return Err(Error::InvalidPartition(format!("`{}` is in X2 or X3 but has nonzero image", names[g])));
        }
    }
    if part.x1.len() != epi.n() {
        return Err(Error::InvalidPartition(format!("X1 has {} generators, quotient rank is {}", part.x1.len(), epi.n())));
    }
    let columns: Vec<Vec<u32>> = part.x1.iter().map(|&g| epi.image(g).to_vec()).collect();
    if FpMatrix::from_columns(p, epi.n(), &columns).rank() != epi.n() {
        return Err(Error::InvalidPartition("images of X1 are not a basis of the quotient".into()));
    }
    let b1 = pres.complex_betti(p).b1;
    if part.x1.len() + part.x2.len() != b1 {
        return Err(Error::InvalidPartition(format!(
            "X1 and X2 have {} generators, b1 is {b1}",
            part.x1.len() + part.x2.len()
        )));
    }

    // R3: x3⁻¹·f(x3), one per x3, with f(x3) of weight zero mod p.
    let mut unmatched: Vec<usize> = part.r3.clone();
    for (&g, f) in &wit {
        if let Some((h, s)) = first_bad_generator(f, pres.gen_count(), p, None) {
            return Err(Error::WeightCondition {
                relator: usize::MAX,
                word: format!("f({}) = {}", names[g], pres.format_word(f)),
                detail: format!("generator `{}` has exponent sum {s}, not divisible by {p}", names[h]),
            });
        }
        let target = witness_relator(g, f);
        match unmatched.iter().position(|&r| pres.relators()[r] == target) {
            Some(i) => {
                unmatched.remove(i);
            }
            None => {
                return Err(Error::InvalidPartition(format!(
                    "R3 contains no relator {} for `{}`",
                    pres.format_word(&target),
                    names[g]
                )))
            }
        }
    }
    if let Some(&r) = unmatched.first() {
        return Err(weight_error(pres, r, "R3 relator is not of the form x3^-1*f(x3) for a witnessed x3".into()));
    }

    for &r in &part.r2 {
        if let Some((h, s)) = first_bad_generator(&pres.relators()[r], pres.gen_count(), p, None) {
            return Err(weight_error(pres, r, format!("R2 relator: generator `{}` has exponent sum {s}", names[h])));
        }
    }
    for &r in &part.r1 {
        let w = &pres.relators()[r];
        if let Some((h, s)) = first_bad_generator(w, pres.gen_count(), p, Some(&part.x3)) {
            return Err(weight_error(pres, r, format!("R1 relator: X3 generator `{}` has exponent sum {s}", names[h])));
        }
        if let Some((h, s)) = first_bad_generator(w, pres.gen_count(), p, None) {
            return Err(weight_error(pres, r, format!("R1 relator: generator `{}` has exponent sum {s}", names[h])));
        }
    }

    Ok(NormalizedPresentation { base: pres.clone(), p, partition: part, witnesses: wit })
}

impl NormalizedPresentation {
    pub fn base(&self) -> &Presentation {
        &self.base
    }

    pub fn p(&self) -> Prime {
        self.p
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn x1(&self) -> &[usize] {
        &self.partition.x1
    }

    pub fn x2(&self) -> &[usize] {
        &self.partition.x2
    }

    pub fn x3(&self) -> &[usize] {
        &self.partition.x3
    }

    pub fn witness(&self, x3: usize) -> Option<&Word> {
        self.witnesses.get(&x3)
    }

    /// `X₁ ∪ X₂` in generator order.
    pub fn x12(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.partition.x1.iter().chain(&self.partition.x2).copied().collect();
        v.sort_unstable();
        v
    }

    pub fn r1_words(&self) -> Vec<&Word> {
        self.partition.r1.iter().map(|&r| &self.base.relators()[r]).collect()
    }
}
