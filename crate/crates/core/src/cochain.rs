//! Explicit 1-cochains on an elementary abelian cover: the basis cochains
//! `c(A,y)`, the level subspaces `U¹_ℓ`, the constraint map `φ_ℓ`, the
//! extension `ψ` over `X₃` edges, the cocycle spaces `C¹_ℓ`, test loops and
//! their pairing with the basis.
//!
//! Subsets `A, E ⊆ X₁` are sorted lists of positions in `X₁` (which is in
//! generator order). Cochains are dense vectors indexed by cover edges.

use std::collections::VecDeque;

use num_bigint::BigInt;
use serde::Serialize;

use crate::bounds::{self, BoundSpec};
use crate::cover::{CoverComplex, Step, VertexFrame};
use crate::error::{Error, Result};
use crate::linalg::{FpMatrix, Prime, SparseMatrix};
use crate::presentation::NormalizedPresentation;
use crate::word::{self, GeneratorId, Letter, Word};

/// Largest number of dense cochain entries the lab will hold at once.
pub const COCHAIN_ENTRY_LIMIT: u64 = 1 << 27;

/// The label `(A, y)` of a basis cochain.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct BasisLabel {
    /// Positions in `X₁`, increasing.
    pub a: Vec<usize>,
    /// A generator in `X₁ ∪ X₂`.
    pub y: usize,
}

/// The spanning labels of `U¹_ℓ`, ordered by `|A|`, then `A`, then `y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelSpace {
    pub level: usize,
    pub labels: Vec<BasisLabel>,
}

impl LevelSpace {
    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn position(&self, label: &BasisLabel) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

/// A loop in the cover used to detect non-coboundaries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TestLoop {
    pub label: BasisLabel,
    pub base: usize,
    pub letters: Vec<Letter>,
}

/// The constraint map with its coordinate labels `(r₁, E)`.
#[derive(Clone, Debug)]
pub struct Constraints {
    pub coords: Vec<(usize, Vec<usize>)>,
    pub matrix: FpMatrix,
}

/// The cocycle candidates at one level.
#[derive(Clone, Debug)]
pub struct CocycleSpace {
    pub space: LevelSpace,
    pub constraints: Constraints,
    /// Kernel vectors of `φ_ℓ`, as coefficients on `space.labels`.
    pub kernel: Vec<Vec<u32>>,
    /// `ψ` applied to each kernel vector.
    pub cochains: Vec<Vec<u32>>,
}

/// A cochain that fails to vanish on a face boundary or relator loop.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub candidate: usize,
    pub relator: usize,
    pub vertex: usize,
    pub value: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CocycleReport {
    pub candidates: usize,
    pub faces: usize,
    pub violations: Vec<Violation>,
}

impl CocycleReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimensionReport {
    pub level: usize,
    pub dim_u: usize,
    pub constraints: usize,
    pub dim_kernel: usize,
    /// `dim C¹_ℓ / (B¹ ∩ C¹_ℓ)`
    pub dim_quotient: usize,
    /// `dim U¹_ℓ / (B¹ ∩ U¹_ℓ)`
    pub dim_u_quotient: usize,
    pub test_loops: usize,
    pub pairing_rank: usize,
    /// The closed-form lower bound for `dim_quotient`.
    pub quotient_floor: BigInt,
    pub cocycles: CocycleReport,
}

impl DimensionReport {
    pub fn meets_floor(&self) -> bool {
        BigInt::from(self.dim_quotient) >= self.quotient_floor
    }
}

/// All subsets of `0..n` of size at most `max`, by size then lexicographically.
pub fn subsets_up_to(n: usize, max: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for k in 0..=max.min(n) {
        let mut cur: Vec<usize> = (0..k).collect();
        loop {
            out.push(cur.clone());
            // advance to the next k-combination
            let mut i = k;
            while i > 0 && cur[i - 1] == n - k + i - 1 {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            cur[i - 1] += 1;
            for j in i..k {
                cur[j] = cur[j - 1] + 1;
            }
        }
    }
    out
}

fn inverse_path(path: &[Letter]) -> impl Iterator<Item = Letter> + '_ {
    path.iter().rev().map(|l| l.inv())
}

pub struct CochainLab<'a> {
    cover: &'a CoverComplex,
    norm: &'a NormalizedPresentation,
    frame: VertexFrame,
    /// `c_j(v)` for every vertex, X₁ order.
    coords: Vec<Vec<u32>>,
    x12: Vec<usize>,
}

impl<'a> CochainLab<'a> {
    pub fn new(cover: &'a CoverComplex, norm: &'a NormalizedPresentation) -> Result<Self> {
        if cover.presentation() != norm.base() {
            return Err(Error::InvalidPartition("cover and partition use different presentations".into()));
        }
        if cover.p() != norm.p() {
            return Err(Error::InvalidPartition("cover and partition use different primes".into()));
        }
        let frame = VertexFrame::new(cover, norm.x1())?;
        let coords = (0..cover.vertex_count()).map(|v| frame.coordinates(v)).collect();
        Ok(CochainLab { cover, norm, frame, coords, x12: norm.x12() })
    }

    pub fn cover(&self) -> &CoverComplex {
        self.cover
    }

    pub fn frame(&self) -> &VertexFrame {
        &self.frame
    }

    pub fn p(&self) -> Prime {
        self.cover.p()
    }

    pub fn n(&self) -> usize {
        self.cover.n()
    }

    pub fn vertex_coords(&self, v: usize) -> &[u32] {
        &self.coords[v]
    }

    /// The vertex with `c_j = 1` exactly for `j ∈ A`.
    pub fn indicator_vertex(&self, a: &[usize]) -> usize {
        let mut c = vec![0u32; self.n()];
        for &j in a {
            c[j] = 1;
        }
        self.frame.vertex(&c)
    }

    fn check_level(&self, level: usize) -> Result<()> {
        if level > self.n() {
            return Err(Error::LevelOutOfRange { level, max: self.n() });
        }
        Ok(())
    }

    pub fn level_space(&self, level: usize) -> Result<LevelSpace> {
        self.check_level(level)?;
        let mut labels = Vec::new();
        for a in subsets_up_to(self.n(), level) {
            for &y in &self.x12 {
                labels.push(BasisLabel { a: a.clone(), y });
            }
        }
        Ok(LevelSpace { level, labels })
    }

    fn monomial(&self, a: &[usize], v: usize) -> u32 {
        let p = self.p();
        a.iter().fold(1, |acc, &j| p.mul(acc, self.coords[v][j]))
    }

    /// `c(A,y)` as a dense cochain.
    pub fn realize(&self, label: &BasisLabel) -> Vec<u32> {
        let mut z = vec![0u32; self.cover.edge_count()];
        for v in 0..self.cover.vertex_count() {
            z[self.cover.edge(v, label.y)] = self.monomial(&label.a, v);
        }
        z
    }

    /// Value of `c(A,y)` along a traced path.
    pub fn evaluate_label(&self, label: &BasisLabel, steps: &[Step]) -> u32 {
        let p = self.p();
        steps.iter().fold(0, |acc, s| {
            let (v, g) = self.cover.edge_parts(s.edge);
            if g != label.y {
                return acc;
            }
            let m = self.monomial(&label.a, v);
            if s.inverse { p.sub(acc, m) } else { p.add(acc, m) }
        })
    }

    fn ensure_relator(&self, w: &Word) -> Result<()> {
        if self.cover.epi().word_image(w).iter().any(|&e| e != 0) {
            return Err(Error::NotARelator(self.cover.presentation().format_word(w)));
        }
        Ok(())
    }

    /// `w_E` for positions `E` in X₁.
    pub fn w_e(&self, e: &[usize]) -> Word {
        let ids: Vec<GeneratorId> = e.iter().map(|&j| GeneratorId(self.norm.x1()[j])).collect();
        word::w_e(&ids)
    }

    /// Extend a path from the basepoint with positive `X₁` letters until it
    /// returns there.
    pub fn close_at_base(&self, letters: &[Letter]) -> Vec<Letter> {
        let mut out = letters.to_vec();
        let (_, end) = self.cover.trace_letters(&out, 0);
        let p = self.p();
        for (j, &c) in self.coords[end].iter().enumerate() {
            let back = p.neg(c) as usize;
            out.extend(std::iter::repeat(Letter::pos(self.norm.x1()[j])).take(back));
        }
        out
    }

    fn eval_path(&self, label: &BasisLabel, path: &[Letter]) -> u32 {
        let (steps, _) = self.cover.trace_letters(path, 0);
        self.evaluate_label(label, &steps)
    }

    fn is_base_loop(&self, k: &[Letter]) -> bool {
        self.cover.trace_letters(k, 0).1 == 0
    }

    /// Both sides of
    /// `c(A,y)(g k g⁻¹ k⁻¹) = Σ_{∅≠B⊆A} c_B(g) · c(A∖B, y)(k)`
    /// for a loop `k` at the basepoint; `None` if `k` is not one.
    pub fn commutator_expansion(&self, label: &BasisLabel, g: &[Letter], k: &[Letter]) -> Option<(u32, u32)> {
        if !self.is_base_loop(k) {
            return None;
        }
        let p = self.p();
        let (_, gend) = self.cover.trace_letters(g, 0);
        let path: Vec<Letter> = g.iter().chain(k).copied().chain(inverse_path(g)).chain(inverse_path(k)).collect();
        let lhs = self.eval_path(label, &path);
        let mut rhs = 0;
        for b in subsets_up_to(label.a.len(), label.a.len()).into_iter().skip(1) {
            let bset: Vec<usize> = b.iter().map(|&i| label.a[i]).collect();
            let rest: Vec<usize> = label.a.iter().copied().filter(|j| !bset.contains(j)).collect();
            let term = self.eval_path(&BasisLabel { a: rest, y: label.y }, k);
            rhs = p.add(rhs, p.mul(self.monomial(&bset, gend), term));
        }
        Some((lhs, rhs))
    }

    /// Both sides of the single-generator case: for `x = X₁[q]`,
    /// `c(A,y)(x k x⁻¹ k⁻¹) = c(A∖{q}, y)(k)` when `q ∈ A` and `0` otherwise,
    /// and `0` for any generator outside `X₁`.
    pub fn single_generator_commutator(&self, label: &BasisLabel, gen: usize, k: &[Letter]) -> Option<(u32, u32)> {
        if !self.is_base_loop(k) {
            return None;
        }
        let path: Vec<Letter> =
            std::iter::once(Letter::pos(gen)).chain(k.iter().copied()).chain([Letter::neg(gen)]).chain(inverse_path(k)).collect();
        let lhs = self.eval_path(label, &path);
        let rhs = match self.norm.x1().iter().position(|&x| x == gen) {
            Some(q) if label.a.contains(&q) => {
                let rest: Vec<usize> = label.a.iter().copied().filter(|&x| x != q).collect();
                self.eval_path(&BasisLabel { a: rest, y: label.y }, k)
            }
            _ => 0,
        };
        Some((lhs, rhs))
    }

    /// Both sides of `c(A,y)(w_E k w_E⁻¹) = Σ_{B ⊆ A∩E} c(A∖B, y)(k)`.
    pub fn conjugation_by_w_e(&self, label: &BasisLabel, e: &[usize], k: &[Letter]) -> Option<(u32, u32)> {
        if !self.is_base_loop(k) {
            return None;
        }
        let p = self.p();
        let we = self.w_e(e);
        let path: Vec<Letter> = we.letters().iter().chain(k).copied().chain(we.inverse().letters().iter().copied()).collect();
        let lhs = self.eval_path(label, &path);
        let common: Vec<usize> = label.a.iter().copied().filter(|j| e.contains(j)).collect();
        let mut rhs = 0;
        for b in subsets_up_to(common.len(), common.len()) {
            let bset: Vec<usize> = b.iter().map(|&i| common[i]).collect();
            let rest: Vec<usize> = label.a.iter().copied().filter(|j| !bset.contains(j)).collect();
            rhs = p.add(rhs, self.eval_path(&BasisLabel { a: rest, y: label.y }, k));
        }
        Some((lhs, rhs))
    }

    /// `φ_ℓ`: rows `(r₁, E)` with `|E| ≤ ℓ − 1`, columns the basis labels.
    pub fn phi(&self, space: &LevelSpace) -> Result<Constraints> {
        let p = self.p();
        let r1 = &self.norm.partition().r1;
        let subsets = if space.level == 0 { Vec::new() } else { subsets_up_to(self.n(), space.level - 1) };
        let mut coords = Vec::new();
        for &r in r1 {
            self.ensure_relator(&self.cover.presentation().relators()[r])?;
            for e in &subsets {
                coords.push((r, e.clone()));
            }
        }
        let mut matrix = FpMatrix::zeros(p, coords.len(), space.dim());
        for (row, (r, e)) in coords.iter().enumerate() {
            let rel = &self.cover.presentation().relators()[*r];
            let we = self.w_e(e);
            let letters: Vec<Letter> = we.letters().iter().chain(rel.letters()).chain(we.inverse().letters()).copied().collect();
            let (steps, end) = self.cover.trace_letters(&letters, 0);
            debug_assert_eq!(end, 0);
            for (col, label) in space.labels.iter().enumerate() {
                matrix.set(row, col, self.evaluate_label(label, &steps));
            }
        }
        Ok(Constraints { coords, matrix })
    }

    /// `Σ λ_{A,y} c(A,y)`.
    pub fn combination(&self, space: &LevelSpace, coeffs: &[u32]) -> Vec<u32> {
        let p = self.p();
        let mut z = vec![0u32; self.cover.edge_count()];
        for (label, &c) in space.labels.iter().zip(coeffs) {
            if c == 0 {
                continue;
            }
            for v in 0..self.cover.vertex_count() {
                let e = self.cover.edge(v, label.y);
                z[e] = p.add(z[e], p.mul(c, self.monomial(&label.a, v)));
            }
        }
        z
    }

    /// Extend a cochain supported on `X₁ ∪ X₂` edges over the `X₃` edges.
    pub fn psi(&self, z: &[u32]) -> Result<Vec<u32>> {
        let n_vert = self.cover.vertex_count();
        for &x3 in self.norm.x3() {
            if (0..n_vert).any(|v| z[self.cover.edge(v, x3)] != 0) {
                return Err(Error::Invariant("cochain is not supported on X1 and X2 edges".into()));
            }
        }
        let mut out = z.to_vec();
        for &x3 in self.norm.x3() {
            let name = &self.cover.presentation().generators()[x3];
            let f = self.norm.witness(x3).ok_or_else(|| Error::MissingWitness(name.clone()))?;
            for v in 0..n_vert {
                let g = self.frame.path_word(v);
                let letters: Vec<Letter> = g.letters().iter().chain(f.letters()).chain(g.inverse().letters()).copied().collect();
                out[self.cover.edge(v, x3)] = self.cover.evaluate_letters(z, &letters, 0);
            }
        }
        Ok(out)
    }

    fn check_entries(&self, count: usize) -> Result<()> {
        let entries = count as u64 * self.cover.edge_count() as u64;
        if entries > COCHAIN_ENTRY_LIMIT {
            return Err(Error::BudgetExceeded { required: entries.to_string(), allowed: COCHAIN_ENTRY_LIMIT });
        }
        Ok(())
    }

    /// `C¹_ℓ = ψ(ker φ_ℓ)` with an explicit basis.
    pub fn cocycle_space(&self, level: usize) -> Result<CocycleSpace> {
        let space = self.level_space(level)?;
        let constraints = self.phi(&space)?;
        let kernel = constraints.matrix.rank_and_kernel().kernel;
        self.check_entries(kernel.len())?;
        let cochains = kernel.iter().map(|k| self.psi(&self.combination(&space, k))).collect::<Result<Vec<_>>>()?;
        Ok(CocycleSpace { space, constraints, kernel, cochains })
    }

    /// Evaluate every candidate on every face boundary.
    pub fn verify_cocycles(&self, candidates: &[Vec<u32>]) -> CocycleReport {
        let mut violations = Vec::new();
        let rels = self.cover.presentation().relator_count();
        for (i, z) in candidates.iter().enumerate() {
            for r in 0..rels {
                for v in 0..self.cover.vertex_count() {
                    let value = self.cover.face_value(z, r, v);
                    if value != 0 {
                        violations.push(Violation { candidate: i, relator: r, vertex: v, value });
                    }
                }
            }
        }
        CocycleReport { candidates: candidates.len(), faces: self.cover.face_count(), violations }
    }

    /// Evaluate each kernel element of `φ_ℓ` (before extension) on every
    /// `R₁` relator from every vertex, i.e. on `g r₁ g⁻¹` for all cosets `g`.
    pub fn kernel_vanishing(&self, cs: &CocycleSpace) -> Vec<Violation> {
        let mut out = Vec::new();
        for (i, k) in cs.kernel.iter().enumerate() {
            let z = self.combination(&cs.space, k);
            for &r in &self.norm.partition().r1 {
                for v in 0..self.cover.vertex_count() {
                    let value = self.cover.face_value(&z, r, v);
                    if value != 0 {
                        out.push(Violation { candidate: i, relator: r, vertex: v, value });
                    }
                }
            }
        }
        out
    }

    /// Test loops at level ℓ, ordered by `|A|`, then `A`, then `y`.
    pub fn test_loops(&self, level: usize) -> Result<Vec<TestLoop>> {
        self.check_level(level)?;
        let x1 = self.norm.x1();
        let two = self.p().get() == 2;
        let mut out = Vec::new();
        for a in subsets_up_to(self.n(), level) {
            if a.is_empty() {
                for &y in self.norm.x2() {
                    out.push(TestLoop { label: BasisLabel { a: a.clone(), y }, base: 0, letters: vec![Letter::pos(y)] });
                }
                continue;
            }
            let base = self.indicator_vertex(&a);
            let y1 = x1[a[0]];
            for &y in &self.x12 {
                let pos = x1.iter().position(|&g| g == y);
                let letters = match pos {
                    Some(j) if a.contains(&j) => {
                        if !two {
                            continue;
                        }
                        vec![Letter::pos(y), Letter::pos(y)]
                    }
                    Some(j) if j < a[0] => continue,
                    _ => vec![Letter::pos(y), Letter::neg(y1), Letter::neg(y), Letter::pos(y1)],
                };
                out.push(TestLoop { label: BasisLabel { a: a.clone(), y }, base, letters });
            }
        }
        Ok(out)
    }

    /// Entry `(t, t')` is `c(A', y')(t)`, where `(A', y')` labels loop `t'`.
    pub fn pairing_matrix(&self, loops: &[TestLoop]) -> FpMatrix {
        let mut m = FpMatrix::zeros(self.p(), loops.len(), loops.len());
        for (i, t) in loops.iter().enumerate() {
            let (steps, end) = self.cover.trace_letters(&t.letters, t.base);
            debug_assert_eq!(end, t.base, "test loop must close");
            for (j, col) in loops.iter().enumerate() {
                m.set(i, j, self.evaluate_label(&col.label, &steps));
            }
        }
        m
    }

    /// A breadth-first spanning tree: `(parent edge, entered forwards)` per vertex.
    fn spanning_tree(&self) -> Vec<Option<(usize, bool)>> {
        let n_vert = self.cover.vertex_count();
        let gens = self.cover.presentation().gen_count();
        let mut tree = vec![None; n_vert];
        let mut seen = vec![false; n_vert];
        seen[0] = true;
        let mut queue = VecDeque::from([0usize]);
        let space = self.cover.space();
        while let Some(v) = queue.pop_front() {
            for g in 0..gens {
                let fwd = space.add(v, self.cover.shift(g));
                if !seen[fwd] {
                    seen[fwd] = true;
                    tree[fwd] = Some((self.cover.edge(v, g), true));
                    queue.push_back(fwd);
                }
                let back = space.sub(v, self.cover.shift(g));
                if !seen[back] {
                    seen[back] = true;
                    tree[back] = Some((self.cover.edge(back, g), false));
                    queue.push_back(back);
                }
            }
        }
        tree
    }

    /// `dim span(cochains) / (B¹ ∩ span)`: each cochain is normalized to
    /// vanish on a spanning tree (subtracting a coboundary), which identifies
    /// `C¹/B¹` with the coordinates on the non-tree edges.
    pub fn quotient_dimension(&self, cochains: &[Vec<u32>]) -> Result<usize> {
        let p = self.p();
        let tree = self.spanning_tree();
        let mut is_tree = vec![false; self.cover.edge_count()];
        // BFS order so parents are potentialled first
        let mut order: Vec<usize> = Vec::with_capacity(tree.len());
        {
            let mut children = vec![Vec::new(); tree.len()];
            for (v, t) in tree.iter().enumerate() {
                if let Some((e, fwd)) = t {
                    is_tree[*e] = true;
                    let (i, _) = self.cover.edge_parts(*e);
                    let parent = if *fwd { i } else { self.cover.terminal(*e) };
                    children[parent].push(v);
                }
            }
            let mut queue = VecDeque::from([0usize]);
            while let Some(v) = queue.pop_front() {
                order.push(v);
                queue.extend(children[v].iter().copied());
            }
        }
        let free: Vec<usize> = (0..self.cover.edge_count()).filter(|&e| !is_tree[e]).collect();
        let mut m = SparseMatrix::new(p, cochains.len(), free.len());
        let mut f = vec![0u32; tree.len()];
        for (row, z) in cochains.iter().enumerate() {
            for &v in &order {
                f[v] = match tree[v] {
                    None => 0,
                    Some((e, true)) => p.add(f[self.cover.edge_parts(e).0], z[e]),
                    Some((e, false)) => p.sub(f[self.cover.terminal(e)], z[e]),
                };
            }
            for (col, &e) in free.iter().enumerate() {
                let (i, _) = self.cover.edge_parts(e);
                let t = self.cover.terminal(e);
                let value = p.sub(p.add(z[e], f[i]), f[t]);
                if value != 0 {
                    m.add(row, col, value as i64);
                }
            }
        }
        m.rank()
    }

    /// The same quotient dimension computed as `rank[C; B] − rank B`, with
    /// `B` spanned by the vertex coboundaries.
    pub fn quotient_dimension_by_coboundaries(&self, cochains: &[Vec<u32>]) -> Result<usize> {
        let p = self.p();
        let n_vert = self.cover.vertex_count();
        let edges = self.cover.edge_count();
        let mut b = SparseMatrix::new(p, n_vert, edges);
        let mut cb = SparseMatrix::new(p, n_vert + cochains.len(), edges);
        for v in 0..n_vert {
            for (e, &x) in self.cover.vertex_coboundary(v).iter().enumerate() {
                if x != 0 {
                    b.add(v, e, x as i64);
                    cb.add(v, e, x as i64);
                }
            }
        }
        for (i, z) in cochains.iter().enumerate() {
            for (e, &x) in z.iter().enumerate() {
                if x != 0 {
                    cb.add(n_vert + i, e, x as i64);
                }
            }
        }
        Ok(cb.rank()? - b.rank()?)
    }

    /// Whether `z` is a coboundary, by solving `δf = z`.
    pub fn is_coboundary(&self, z: &[u32]) -> Result<bool> {
        let n_vert = self.cover.vertex_count();
        let cols: Vec<Vec<u32>> = (0..n_vert).map(|v| self.cover.vertex_coboundary(v)).collect();
        let m = FpMatrix::from_columns(self.p(), self.cover.edge_count(), &cols);
        Ok(m.solve(z)?.is_some())
    }

    pub fn dimension_report(&self, level: usize, b1: u64, b2: u64) -> Result<DimensionReport> {
        let cs = self.cocycle_space(level)?;
        let cocycles = self.verify_cocycles(&cs.cochains);
        let dim_quotient = self.quotient_dimension(&cs.cochains)?;
        self.check_entries(cs.space.dim())?;
        let u_basis: Vec<Vec<u32>> = cs.space.labels.iter().map(|l| self.realize(l)).collect();
        let dim_u_quotient = self.quotient_dimension(&u_basis)?;
        let loops = self.test_loops(level)?;
        let pairing_rank = self.pairing_matrix(&loops).rank();
        let spec = BoundSpec::new(b1, b2, self.n() as u64, level as u64, self.p())?;
        Ok(DimensionReport {
            level,
            dim_u: cs.space.dim(),
            constraints: cs.constraints.coords.len(),
            dim_kernel: cs.kernel.len(),
            dim_quotient,
            dim_u_quotient,
            test_loops: loops.len(),
            pairing_rank,
            quotient_floor: bounds::homology_lower_bound(&spec),
            cocycles,
        })
    }
}

/// Whether a square matrix is lower unitriangular.
pub fn is_lower_unitriangular(m: &FpMatrix) -> bool {
    m.rows() == m.cols() && (0..m.rows()).all(|i| m.get(i, i) == 1 && (i + 1..m.cols()).all(|j| m.get(i, j) == 0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::{build_cover, cover_betti, full_mod_p_epi, Epimorphism, DEFAULT_CELL_BUDGET};
    use crate::presentation::normalize_witnessed;
    use crate::presentation::{parse_presentation, parse_witnesses, Presentation};

    fn setup(pres: &Presentation, p: u64, witnesses: &str) -> (CoverComplex, NormalizedPresentation) {
        let p = Prime::new(p).unwrap();
        let epi = full_mod_p_epi(pres, p).unwrap();
        setup_epi(pres, epi, witnesses)
    }

    fn setup_epi(pres: &Presentation, epi: Epimorphism, witnesses: &str) -> (CoverComplex, NormalizedPresentation) {
        let wit = parse_witnesses(witnesses, pres.generators()).unwrap();
        let cover = build_cover(pres, &epi, DEFAULT_CELL_BUDGET).unwrap();
        let norm = normalize_witnessed(pres, &epi, None, &wit).unwrap();
        (cover, norm)
    }

    fn genus2() -> Presentation {
        parse_presentation("gens: a1 b1 a2 b2\nrels: [a1,b1]*[a2,b2]\n").unwrap()
    }

    #[test]
    fn subset_order() {
        let s = subsets_up_to(3, 2);
        assert_eq!(s, vec![vec![], vec![0], vec![1], vec![2], vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert_eq!(subsets_up_to(4, 4).len(), 16);
        assert_eq!(subsets_up_to(0, 3), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn free_cube_support() {
        let f3 = Presentation::free(3);
        let (cover, norm) = setup(&f3, 2, "");
        let lab = CochainLab::new(&cover, &norm).unwrap();
        let z = lab.realize(&BasisLabel { a: vec![0, 1], y: 2 });
        let support: Vec<usize> = (0..z.len()).filter(|&e| z[e] != 0).collect();
        assert_eq!(support.len(), 2);
        for e in support {
            let (v, g) = cover.edge_parts(e);
            assert_eq!(g, 2);
            let c = lab.vertex_coords(v);
            assert_eq!((c[0], c[1]), (1, 1));
        }
        let z = lab.realize(&BasisLabel { a: vec![0], y: 0 });
        assert_eq!(z.iter().filter(|&&x| x != 0).count(), 4);
        assert_eq!(lab.level_space(1).unwrap().dim(), 12);
        assert!(lab.level_space(4).is_err());
    }

    #[test]
    fn level_zero_is_lift() {
        let g = genus2();
        let (cover, norm) = setup(&g, 2, "");
        let lab = CochainLab::new(&cover, &norm).unwrap();
        for l in lab.level_space(0).unwrap().labels {
            let z = lab.realize(&l);
            for e in 0..z.len() {
                assert_eq!(z[e], u32::from(cover.edge_parts(e).1 == l.y));
            }
        }
    }

    #[test]
    fn hierarchy() {
        let g = genus2();
        let (cover, norm) = setup(&g, 2, "");
        let lab = CochainLab::new(&cover, &norm).unwrap();
        for l in 0..4 {
            let lo = lab.level_space(l).unwrap();
            let hi = lab.level_space(l + 1).unwrap();
            assert!(lo.labels.iter().all(|x| hi.position(x).is_some()));
            assert_eq!(&hi.labels[..lo.dim()], &lo.labels[..]);
        }
    }

    #[test]
    fn genus2_levels() {
        let g = genus2();
        let (cover, norm) = setup(&g, 2, "");
        let lab = CochainLab::new(&cover, &norm).unwrap();
        let betti = cover_betti(&cover).unwrap();
        assert_eq!(betti.b1, 34);
        let expected_floor = [0, 9, 25, 34, 34];
        for l in 0..=4 {
            let r = lab.dimension_report(l, 4, 1).unwrap();
            assert!(r.cocycles.passed(), "level {l}: {:?}", r.cocycles.violations);
            assert_eq!(r.quotient_floor, BigInt::from(expected_floor[l]));
            assert!(r.meets_floor(), "level {l}: {} < {}", r.dim_quotient, r.quotient_floor);
            assert!(r.dim_quotient <= 34);
            assert_eq!(r.pairing_rank, r.test_loops);
        }
        let r = lab.dimension_report(2, 4, 1).unwrap();
        assert_eq!(r.constraints, 5);
        assert!(r.dim_kernel >= 39);
        assert_eq!(r.test_loops, 30);
        assert_eq!(lab.dimension_report(3, 4, 1).unwrap().dim_quotient, 34);
    }

    #[test]
    fn free_f3_levels() {
        let f3 = Presentation::free(3);
        let (cover, norm) = setup(&f3, 2, "");
        let lab = CochainLab::new(&cover, &norm).unwrap();
        let cs = lab.cocycle_space(1).unwrap();
        assert_eq!(cs.constraints.matrix.rows(), 0);
        assert_eq!(cs.cochains.len(), 12);
        assert_eq!(lab.test_loops(1).unwrap().len(), 6);
        let r = lab.dimension_report(3, 3, 0).unwrap();
        assert_eq!(r.quotient_floor, BigInt::from(17));
        assert_eq!(r.dim_quotient, 17);
        assert!(r.cocycles.passed());
    }

    #[test]
    fn three_term_coboundary() {
        let f3 = Presentation::free(3);
        let (cover, norm) = setup(&f3, 2, "");
        let lab = CochainLab::new(&cover, &norm).unwrap();
        let p = lab.p();
        let mut sum = vec![0u32; cover.edge_count()];
        for (a, y) in [(vec![0, 1], 2), (vec![1, 2], 0), (vec![0, 2], 1)] {
            for (s, z) in sum.iter_mut().zip(lab.realize(&BasisLabel { a, y })) {
                *s = p.add(*s, z);
            }
        }
        let v = lab.indicator_vertex(&[0, 1, 2]);
        assert_eq!(sum, cover.vertex_coboundary(v));
        assert!(lab.is_coboundary(&sum).unwrap());
        assert!(!lab.is_coboundary(&lab.realize(&BasisLabel { a: vec![0, 1], y: 2 })).unwrap());
    }

    #[test]
    fn pairing_is_unitriangular() {
        for p in [2u64, 3] {
            let f3 = Presentation::free(3);
            let (cover, norm) = setup(&f3, p, "");
            let lab = CochainLab::new(&cover, &norm).unwrap();
            for l in 0..=3 {
                let loops = lab.test_loops(l).unwrap();
                let m = lab.pairing_matrix(&loops);
                assert!(is_lower_unitriangular(&m), "p={p} level {l}");
                let prime = Prime::new(p).unwrap();
                assert_eq!(BigInt::from(loops.len()), bounds::test_loop_count(3, 3, l as u64, prime));
            }
        }
    }

    #[test]
    fn two_sided_tests_agree() {
        let g = genus2();
        let (cover, norm) = setup(&g, 2, "");
        let lab = CochainLab::new(&cover, &norm).unwrap();
        let cs = lab.cocycle_space(2).unwrap();
        assert_eq!(
            lab.quotient_dimension(&cs.cochains).unwrap(),
            lab.quotient_dimension_by_coboundaries(&cs.cochains).unwrap()
        );
    }

    #[test]
    fn worked_example() {
        let pres = parse_presentation("gens: x1 x2 x3\nrels: x3^-1*[[x3,x1],x1], x1^2*[[x3,x1],x1]^2\n").unwrap();
        let (cover, norm) = setup(&pres, 2, "x3 = [[x3,x1],x1]");
        let lab = CochainLab::new(&cover, &norm).unwrap();
        let cs = lab.cocycle_space(1).unwrap();
        assert_eq!(cs.constraints.coords.len(), 1);
        let report = lab.verify_cocycles(&cs.cochains);
        assert!(report.passed(), "{:?}", report.violations);
        assert!(lab.kernel_vanishing(&cs).is_empty());
        for l in 0..=2 {
            let r = lab.dimension_report(l, 2, 1).unwrap();
            assert!(r.cocycles.passed());
            assert!(r.meets_floor(), "level {l}");
        }
    }

    #[test]
    fn psi_fixes_coboundaries() {
        let pres = parse_presentation("gens: x1 x2 x3\nrels: x3^-1*[[x3,x1],x1], x1^2*[[x3,x1],x1]^2\n").unwrap();
        let (cover, norm) = setup(&pres, 2, "x3 = [[x3,x1],x1]");
        let lab = CochainLab::new(&cover, &norm).unwrap();
        for v in 0..cover.vertex_count() {
            let z = cover.vertex_coboundary(v);
            assert_eq!(lab.psi(&z).unwrap(), z);
        }
    }

    #[test]
    fn psi_is_identity_without_x3() {
        let g = genus2();
        let (cover, norm) = setup(&g, 2, "");
        let lab = CochainLab::new(&cover, &norm).unwrap();
        let z = lab.realize(&BasisLabel { a: vec![1], y: 0 });
        assert_eq!(lab.psi(&z).unwrap(), z);
    }

    #[test]
    fn optional_coboundary_identity() {
        // for p = 2, Σ_{y∈A} c(A − {y}, y) is a coboundary for every nonempty A
        let f3 = Presentation::free(3);
        let (cover, norm) = setup(&f3, 2, "");
        let lab = CochainLab::new(&cover, &norm).unwrap();
        let p = lab.p();
        for a in subsets_up_to(3, 3).into_iter().filter(|a| !a.is_empty()) {
            let mut sum = vec![0u32; cover.edge_count()];
            for &y in &a {
                let rest: Vec<usize> = a.iter().copied().filter(|&j| j != y).collect();
                for (s, z) in sum.iter_mut().zip(lab.realize(&BasisLabel { a: rest, y: norm.x1()[y] })) {
                    *s = p.add(*s, z);
                }
            }
            assert!(lab.is_coboundary(&sum).unwrap(), "{a:?}");
        }
    }
}
