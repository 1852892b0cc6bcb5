//! Counting subgroups of small index by backtracking over standardized coset
//! tables, and the subnormal floors attached to a series trace.
//!
//! A subgroup of index k is the stabilizer of coset 0 in a transitive action
//! on k cosets. Filling the table in row-major order and numbering new cosets
//! as they first appear gives each subgroup exactly one table.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive};

use crate::bounds::{self, GrowthMode};
use crate::error::{Error, Result};
use crate::linalg::{gaussian_binomial, subspace_count};
use crate::presentation::Presentation;
use crate::series::GrowthTrace;

/// Default largest index enumerated.
pub const DEFAULT_INDEX_LIMIT: usize = 8;

const UNDEF: u32 = u32::MAX;

/// A partial coset table. Column `2x` is generator `x`, column `2x + 1` its inverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetTable {
    cols: usize,
    cosets: usize,
    entries: Vec<u32>,
}

impl CosetTable {
    fn new(gens: usize, capacity: usize) -> Self {
        CosetTable { cols: 2 * gens, cosets: 1, entries: vec![UNDEF; 2 * gens * capacity] }
    }

    pub fn cosets(&self) -> usize {
        self.cosets
    }

    pub fn get(&self, coset: usize, col: usize) -> Option<usize> {
        let v = self.entries[coset * self.cols + col];
        (v != UNDEF).then_some(v as usize)
    }

    /// Image of `coset` under generator `gen` (as a permutation).
    pub fn image(&self, coset: usize, gen: usize) -> Option<usize> {
        self.get(coset, 2 * gen)
    }

    fn raw(&self, c: usize, col: usize) -> u32 {
        self.entries[c * self.cols + col]
    }

    /// Set `c·col = d` and the inverse entry; false on conflict.
    fn define(&mut self, c: usize, col: usize, d: usize) -> bool {
        let inv = col ^ 1;
        let (a, b) = (self.raw(c, col), self.raw(d, inv));
        if (a != UNDEF && a as usize != d) || (b != UNDEF && b as usize != c) {
            return false;
        }
        self.entries[c * self.cols + col] = d as u32;
        self.entries[d * self.cols + inv] = c as u32;
        true
    }

    fn first_gap(&self) -> Option<(usize, usize)> {
        (0..self.cosets).flat_map(|c| (0..self.cols).map(move |x| (c, x))).find(|&(c, x)| self.raw(c, x) == UNDEF)
    }

    /// Scan every relator from every coset, deducing single gaps; false on
    /// a contradiction.
    fn close(&mut self, relators: &[Vec<usize>]) -> bool {
        loop {
            let mut changed = false;
            for r in relators {
                for c in 0..self.cosets {
                    match self.scan(r, c) {
                        Scan::Conflict => return false,
                        Scan::Deduce(a, col, b) => {
                            if !self.define(a, col, b) {
                                return false;
                            }
                            changed = true;
                        }
                        Scan::Open | Scan::Closed => {}
                    }
                }
            }
            if !changed {
                return true;
            }
        }
    }

    fn scan(&self, r: &[usize], c: usize) -> Scan {
        let (mut f, mut i) = (c as u32, 0);
        while i < r.len() {
            let next = self.raw(f as usize, r[i]);
            if next == UNDEF {
                break;
            }
            f = next;
            i += 1;
        }
        if i == r.len() {
            return if f as usize == c { Scan::Closed } else { Scan::Conflict };
        }
        let (mut b, mut j) = (c as u32, r.len());
        while j > i {
            let prev = self.raw(b as usize, r[j - 1] ^ 1);
            if prev == UNDEF {
                break;
            }
            b = prev;
            j -= 1;
        }
        if j == i {
            return if f == b { Scan::Closed } else { Scan::Conflict };
        }
        if j == i + 1 {
            return Scan::Deduce(f as usize, r[i], b as usize);
        }
        Scan::Open
    }
}

enum Scan {
    Closed,
    Open,
    Conflict,
    Deduce(usize, usize, usize),
}

/// Subgroup counts by exact index and cumulatively.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgroupCensus {
    /// `a[k−1]` = number of subgroups of index exactly k.
    pub exact: Vec<BigUint>,
    /// `s[k−1]` = number of subgroups of index at most k.
    pub cumulative: Vec<BigUint>,
}

fn relator_columns(pres: &Presentation) -> Vec<Vec<usize>> {
    pres.relators()
        .iter()
        .map(|w| w.cyclically_reduced().letters().iter().map(|l| 2 * l.gen.index() + usize::from(l.inverse)).collect())
        .collect()
}

/// Visit every standardized complete coset table with at most `n_max` cosets.
pub fn for_each_table(pres: &Presentation, n_max: usize, limit: usize, mut visit: impl FnMut(&CosetTable)) -> Result<()> {
    if n_max > limit {
        return Err(Error::IndexLimit { requested: n_max, limit });
    }
    if n_max == 0 {
        return Ok(());
    }
    let relators = relator_columns(pres);
    let mut root = CosetTable::new(pres.gen_count(), n_max);
    if !root.close(&relators) {
        return Ok(());
    }
    let mut stack = vec![root];
    while let Some(t) = stack.pop() {
        let Some((c, col)) = t.first_gap() else {
            visit(&t);
            continue;
        };
        // push in reverse so that smaller targets are explored first
        let mut children = Vec::new();
        for d in 0..t.cosets {
            if t.raw(d, col ^ 1) == UNDEF {
                let mut u = t.clone();
                if u.define(c, col, d) && u.close(&relators) {
                    children.push(u);
                }
            }
        }
        if t.cosets < n_max {
            let mut u = t.clone();
            let d = u.cosets;
            u.cosets += 1;
            if u.define(c, col, d) && u.close(&relators) {
                children.push(u);
            }
        }
        stack.extend(children.into_iter().rev());
    }
    Ok(())
}

/// Exact subgroup counts for indices `1..=n_max`.
pub fn low_index(pres: &Presentation, n_max: usize, limit: usize) -> Result<SubgroupCensus> {
    let mut exact = vec![0u64; n_max];
    for_each_table(pres, n_max, limit, |t| exact[t.cosets() - 1] += 1)?;
    let exact: Vec<BigUint> = exact.into_iter().map(BigUint::from).collect();
    let mut cumulative = Vec::with_capacity(n_max);
    let mut acc = BigUint::from(0u32);
    for a in &exact {
        acc += a;
        cumulative.push(acc.clone());
    }
    Ok(SubgroupCensus { exact, cumulative })
}

/// Subnormal floors attached to one term `G_i` of a series trace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FloorRow {
    pub i: usize,
    pub index: BigUint,
    pub b1: usize,
    /// `p·[G:G_i]`
    pub n: BigUint,
    /// `p^{b₁}`, a floor at `n` when p = 2.
    pub power: BigUint,
    /// `1 + (p^{b₁} − 1)/(p − 1)`: `G_i` and its index-p subgroups over `G_{i+1}`.
    pub index_p_floor: BigUint,
    /// `[G : G_{i+1}] = [G:G_i]·p^{b₁}`
    pub subspace_n: BigUint,
    /// Every subgroup between `G_{i+1}` and `G_i`.
    pub subspace_floor: BigUint,
}

pub fn subnormal_floor_census(trace: &GrowthTrace) -> Vec<FloorRow> {
    let p = trace.p;
    trace
        .steps
        .iter()
        .map(|s| {
            let power = BigUint::from(p.get()).pow(s.b1 as u32);
            FloorRow {
                i: s.i,
                index: s.index.clone(),
                b1: s.b1,
                n: &s.index * p.get(),
                subspace_n: &s.index * &power,
                power,
                index_p_floor: BigUint::one() + gaussian_binomial(s.b1 as u32, 1, p),
                subspace_floor: subspace_count(s.b1 as u32, p),
            }
        })
        .collect()
}

/// One row of the census comparison.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComparisonRow {
    pub n: usize,
    pub s_n: BigUint,
    /// Largest valid subnormal floor among rows with index at most n.
    pub floor: BigUint,
    /// `k^{n log₂ n}` when an integer, else `k^{⌊n log₂ n⌋}`, which is smaller
    /// and so a stricter test.
    pub ceiling: BigUint,
    pub consistent: bool,
}

/// Compare exact counts with the floors of a trace and the ceiling
/// `k^{n log n}`; `k = 2^{|X|}` bounds `s_n` for any `|X|`-generated group.
pub fn compare_with_floor(census: &SubgroupCensus, floors: &[FloorRow], k: u64) -> Result<Vec<ComparisonRow>> {
    census
        .cumulative
        .iter()
        .enumerate()
        .map(|(i, s_n)| {
            let n = i + 1;
            let nb = BigUint::from(n);
            let mut floor = BigUint::one();
            for f in floors {
                if f.n <= nb && f.index_p_floor > floor {
                    floor = f.index_p_floor.clone();
                }
                if f.subspace_n <= nb && f.subspace_floor > floor {
                    floor = f.subspace_floor.clone();
                }
            }
            let ceiling = ceiling_value(n, k)?;
            let consistent = s_n >= &floor && s_n <= &ceiling;
            Ok(ComparisonRow { n, s_n: s_n.clone(), floor, ceiling, consistent })
        })
        .collect()
}

fn ceiling_value(n: usize, k: u64) -> Result<BigUint> {
    if n == 1 {
        return Ok(BigUint::one());
    }
    let g = bounds::growth_value(GrowthMode::SubgroupCeiling, &BigUint::from(n), k)?;
    if let Some(v) = g.value {
        return Ok(v);
    }
    // k^e ≥ k^⌊e_lo⌋, a valid (smaller) ceiling to compare against
    let e = g.quantity.lo.floor().to_integer();
    let e = e.to_u32().ok_or_else(|| Error::InvalidBound("ceiling exponent too large".into()))?;
    Ok(BigUint::from(k).pow(e))
}

/// Hall's recursion for subgroups of index exactly n in the free group of rank r.
pub fn free_group_counts(rank: u32, n_max: usize) -> Vec<BigInt> {
    let fact = |m: usize| (1..=m).fold(BigInt::one(), |a, i| a * i);
    let mut a: Vec<BigInt> = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let mut v = BigInt::from(n) * fact(n).pow(rank - 1);
        for k in 1..n {
            v -= fact(n - k).pow(rank - 1) * &a[k - 1];
        }
        a.push(v);
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::DEFAULT_CELL_BUDGET;
    use crate::presentation::parse_presentation;
    use crate::linalg::Prime;
    use crate::series::run_series;

    fn u(v: &[u64]) -> Vec<BigUint> {
        v.iter().map(|&x| BigUint::from(x)).collect()
    }

    #[test]
    fn cyclic() {
        let z = Presentation::free(1);
        let c = low_index(&z, 8, 8).unwrap();
        assert_eq!(c.exact, u(&[1; 8]));
        assert_eq!(c.cumulative, u(&[1, 2, 3, 4, 5, 6, 7, 8]));
    }

    #[test]
    fn free_rank_two() {
        let c = low_index(&Presentation::free(2), 6, 8).unwrap();
        assert_eq!(&c.cumulative[..4], &u(&[1, 4, 17, 88])[..]);
        let hall: Vec<BigUint> = free_group_counts(2, 6).into_iter().map(|x| x.to_biguint().unwrap()).collect();
        assert_eq!(c.exact, hall);
    }

    #[test]
    fn hall_values() {
        assert_eq!(free_group_counts(2, 5), [1, 3, 13, 71, 461].map(BigInt::from).to_vec());
        assert_eq!(free_group_counts(1, 4), [1, 1, 1, 1].map(BigInt::from).to_vec());
    }

    #[test]
    fn abelian_divisor_sums() {
        let z2 = parse_presentation("gens: a b\nrels: [a,b]\n").unwrap();
        let c = low_index(&z2, 6, 8).unwrap();
        // sublattices of index k in Z² number σ(k)
        assert_eq!(c.exact, u(&[1, 3, 4, 7, 6, 12]));
    }

    #[test]
    fn finite_groups() {
        // Z/3: subgroups of index 1 and 3
        let c3 = parse_presentation("gens: a\nrels: a^3\n").unwrap();
        assert_eq!(low_index(&c3, 4, 8).unwrap().exact, u(&[1, 0, 1, 0]));
        // S3 = ⟨a,b | a², b², (ab)³⟩: index 1, 2, 3 (three), 6
        let s3 = parse_presentation("gens: a b\nrels: a^2, b^2, (a*b)^3\n").unwrap();
        assert_eq!(low_index(&s3, 6, 8).unwrap().exact, u(&[1, 1, 3, 0, 0, 1]));
    }

    #[test]
    fn index_two_counts() {
        let pres = parse_presentation("gens: x1 x2 x3\nrels: x3^-1*[[x3,x1],x1], x1^2*[[x3,x1],x1]^2\n").unwrap();
        assert_eq!(low_index(&pres, 2, 8).unwrap().exact[1], BigUint::from(3u32));
        let g2 = parse_presentation("gens: a1 b1 a2 b2\nrels: [a1,b1]*[a2,b2]\n").unwrap();
        assert_eq!(low_index(&g2, 2, 8).unwrap().exact[1], BigUint::from(15u32));
    }

    #[test]
    fn limit() {
        assert!(matches!(low_index(&Presentation::free(2), 9, 8), Err(Error::IndexLimit { .. })));
    }

    #[test]
    fn floors() {
        let t = run_series(&Presentation::free(2), Prime::TWO, 2, DEFAULT_CELL_BUDGET).unwrap();
        let rows = subnormal_floor_census(&t);
        assert_eq!(rows[1].n, BigUint::from(8u32));
        assert_eq!(rows[1].power, BigUint::from(32u32));
        assert_eq!(rows[1].index_p_floor, BigUint::from(32u32));
        assert_eq!(rows[1].subspace_floor, BigUint::from(374u32));
        let census = low_index(&Presentation::free(2), 4, 8).unwrap();
        let cmp = compare_with_floor(&census, &rows, 4).unwrap();
        assert!(cmp.iter().all(|r| r.consistent), "{cmp:?}");
        assert_eq!(cmp[1].floor, BigUint::from(4u32));
        assert_eq!(cmp[3].floor, BigUint::from(5u32));
    }

    #[test]
    fn trivial_floor() {
        let t = run_series(&parse_presentation("gens: a\nrels: a\n").unwrap(), Prime::TWO, 1, DEFAULT_CELL_BUDGET).unwrap();
        let rows = subnormal_floor_census(&t);
        assert_eq!(rows[0].index_p_floor, BigUint::one());
        assert_eq!(rows[0].subspace_floor, BigUint::one());
    }
}
