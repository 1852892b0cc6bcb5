//! Finite abelian covers of presentation complexes.
//!
//! An epimorphism `φ: G → (Z/p)^n` determines a regular cover whose vertices
//! are the vectors of `F_p^n`, encoded as base-p integers with the basepoint
//! at 0. Edge `(v, x)` runs from `v` to `v + φ(x)` and has index `x·N + v`;
//! face `(v, r)` is the lift of relator `r` starting at `v`, index `r·N + v`,
//! where `N = p^n`.

use std::collections::VecDeque;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::linalg::{FpMatrix, Prime, SparseMatrix};
use crate::presentation::{ComplexBetti, EpiSpec, Presentation};
use crate::word::{self, Letter, Word};

pub const DEFAULT_CELL_BUDGET: u64 = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Epimorphism {
    p: Prime,
    n: usize,
    images: Vec<Vec<u32>>,
}

impl Epimorphism {
    /// Checks that every relator maps to zero and that the images span `F_p^n`.
    pub fn new(pres: &Presentation, p: Prime, n: usize, images: Vec<Vec<u32>>) -> Result<Self> {
        if images.len() != pres.gen_count() {
            return Err(Error::InvalidEpimorphism(format!(
                "{} images for {} generators",
                images.len(),
                pres.gen_count()
            )));
        }
        if let Some(g) = images.iter().position(|v| v.len() != n) {
            return Err(Error::InvalidEpimorphism(format!("image of generator {g} is not in F_p^{n}")));
        }
        let images: Vec<Vec<u32>> = images.into_iter().map(|v| v.into_iter().map(|c| c % p.get()).collect()).collect();
        let epi = Epimorphism { p, n, images };
        for (i, r) in pres.relators().iter().enumerate() {
            if epi.word_image(r).iter().any(|&c| c != 0) {
                return Err(Error::InvalidEpimorphism(format!(
                    "relator {i} ({}) does not map to zero",
                    pres.format_word(r)
                )));
            }
        }
        if epi.matrix().rank() != n {
            return Err(Error::InvalidEpimorphism(format!("generator images do not span F_{p}^{n}")));
        }
        Ok(epi)
    }

    pub fn from_spec(pres: &Presentation, p: Prime, spec: &EpiSpec) -> Result<Self> {
        match spec {
            EpiSpec::Full => full_mod_p_epi(pres, p),
            EpiSpec::Matrix(rows) => {
                let n = rows.first().map_or(0, |r| r.len());
                let images = rows.iter().map(|r| r.iter().map(|&c| p.reduce_i64(c)).collect()).collect();
                Epimorphism::new(pres, p, n, images)
            }
        }
    }

    pub fn p(&self) -> Prime {
        self.p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gen_count(&self) -> usize {
        self.images.len()
    }

    pub fn image(&self, g: usize) -> &[u32] {
        &self.images[g]
    }

    pub fn images(&self) -> &[Vec<u32>] {
        &self.images
    }

    /// Generators as rows, coordinates as columns.
    pub fn matrix(&self) -> FpMatrix {
        let mut m = FpMatrix::zeros(self.p, self.images.len(), self.n);
        for (g, v) in self.images.iter().enumerate() {
            for (j, &c) in v.iter().enumerate() {
                m.set(g, j, c);
            }
        }
        m
    }

    pub fn word_image(&self, w: &Word) -> Vec<u32> {
        let mut acc = vec![0u32; self.n];
        for l in w.letters() {
            for (a, &c) in acc.iter_mut().zip(&self.images[l.gen.index()]) {
                *a = if l.inverse { self.p.sub(*a, c) } else { self.p.add(*a, c) };
            }
        }
        acc
    }

    /// `M ∘ φ` for a `k × n` matrix `M` of rank `k`.
    pub fn compose(&self, pres: &Presentation, m: &FpMatrix) -> Result<Epimorphism> {
        if m.cols() != self.n {
            return Err(Error::Dimension(format!("{} columns, quotient rank {}", m.cols(), self.n)));
        }
        let images = self.images.iter().map(|v| m.mul_vec(v)).collect::<Result<Vec<_>>>()?;
        Epimorphism::new(pres, self.p, m.rows(), images)
    }
}

/// The projection onto `H₁(G; F_p)`. Relator exponent vectors are
/// row-reduced; non-pivot generators go to the unit vectors in order and each
/// pivot generator to minus its row restricted to the non-pivot columns.
pub fn full_mod_p_epi(pres: &Presentation, p: Prime) -> Result<Epimorphism> {
    let gens = pres.gen_count();
    let rows: Vec<Vec<i64>> = pres.relators().iter().map(|r| r.exponent_sums(gens)).collect();
    let red = if rows.is_empty() {
        None
    } else {
        Some(FpMatrix::from_rows(p, &rows)?.rref())
    };
    let pivots: Vec<usize> = red.as_ref().map_or(Vec::new(), |r| r.pivots.clone());
    let free: Vec<usize> = (0..gens).filter(|g| !pivots.contains(g)).collect();
    if free.is_empty() {
        return Err(Error::NoModPHomology { p: p.get() });
    }
    let n = free.len();
    let mut images = vec![vec![0u32; n]; gens];
    for (k, &g) in free.iter().enumerate() {
        images[g][k] = 1;
    }
    if let Some(red) = red {
        for (i, &g) in pivots.iter().enumerate() {
            for (k, &f) in free.iter().enumerate() {
                images[g][k] = p.neg(red.matrix.get(i, f));
            }
        }
    }
    Epimorphism::new(pres, p, n, images)
}

/// One epimorphism per kernel: `M ∘ full` for every `k × b₁` reduced echelon
/// matrix `M` of rank `k`, for `k = 1..=b₁`, keeping those accepted by `keep(k)`.
pub fn enumerate_quotients(pres: &Presentation, full: &Epimorphism, mut keep: impl FnMut(usize) -> bool) -> Result<Vec<Epimorphism>> {
    let mut out = Vec::new();
    for k in 1..=full.n() {
        if !keep(k) {
            continue;
        }
        for m in crate::linalg::rref_matrices(full.p(), k, full.n()) {
            out.push(full.compose(pres, &m)?);
        }
    }
    Ok(out)
}

/// Arithmetic on vertices of the cover, i.e. on base-p encodings of `F_p^n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VertexSpace {
    p: u32,
    n: usize,
    size: usize,
}

impl VertexSpace {
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn encode(&self, v: &[u32]) -> usize {
        v.iter().rev().fold(0usize, |acc, &c| acc * self.p as usize + c as usize)
    }

    pub fn decode(&self, mut v: usize) -> Vec<u32> {
        (0..self.n)
            .map(|_| {
                let c = (v % self.p as usize) as u32;
                v /= self.p as usize;
                c
            })
            .collect()
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        if self.p == 2 {
            return a ^ b;
        }
        let p = self.p as usize;
        let (mut a, mut b, mut out, mut place) = (a, b, 0, 1);
        for _ in 0..self.n {
            out += ((a % p + b % p) % p) * place;
            a /= p;
            b /= p;
            place *= p;
        }
        out
    }

    pub fn neg(&self, a: usize) -> usize {
        if self.p == 2 {
            return a;
        }
        let p = self.p as usize;
        let (mut a, mut out, mut place) = (a, 0, 1);
        for _ in 0..self.n {
            out += ((p - a % p) % p) * place;
            a /= p;
            place *= p;
        }
        out
    }

    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
    }
}

/// Cells needed for the cover: `p^n · (1 + |X| + |R|)`.
pub fn required_cells(pres: &Presentation, p: Prime, n: usize) -> BigUint {
    BigUint::from(p.get()).pow(n as u32) * BigUint::from(1 + pres.gen_count() + pres.relator_count())
}

#[derive(Clone, Debug)]
pub struct CoverComplex {
    pres: Presentation,
    epi: Epimorphism,
    space: VertexSpace,
    /// φ(x) encoded as a vertex, per generator.
    shifts: Vec<usize>,
}

/// A signed edge occurrence along a path.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Step {
    pub edge: usize,
    pub inverse: bool,
}

/// Build the cover, refusing when it needs more than `budget` cells.
pub fn build_cover(pres: &Presentation, epi: &Epimorphism, budget: u64) -> Result<CoverComplex> {
    if epi.gen_count() != pres.gen_count() {
        return Err(Error::Dimension(format!(
            "epimorphism has {} images, presentation has {} generators",
            epi.gen_count(),
            pres.gen_count()
        )));
    }
    let required = required_cells(pres, epi.p(), epi.n());
    if required > BigUint::from(budget) {
        return Err(Error::BudgetExceeded { required: required.to_string(), allowed: budget });
    }
    let size = BigUint::from(epi.p().get()).pow(epi.n() as u32).to_usize().expect("within budget");
    let space = VertexSpace { p: epi.p().get(), n: epi.n(), size };
    let shifts = epi.images().iter().map(|v| space.encode(v)).collect();
    Ok(CoverComplex { pres: pres.clone(), epi: epi.clone(), space, shifts })
}

impl CoverComplex {
    pub fn presentation(&self) -> &Presentation {
        &self.pres
    }

    pub fn epi(&self) -> &Epimorphism {
        &self.epi
    }

    pub fn p(&self) -> Prime {
        self.epi.p()
    }

    pub fn n(&self) -> usize {
        self.epi.n()
    }

    pub fn space(&self) -> &VertexSpace {
        &self.space
    }

    pub fn vertex_count(&self) -> usize {
        self.space.size
    }

    pub fn edge_count(&self) -> usize {
        self.space.size * self.pres.gen_count()
    }

    pub fn face_count(&self) -> usize {
        self.space.size * self.pres.relator_count()
    }

    pub fn edge(&self, v: usize, gen: usize) -> usize {
        gen * self.space.size + v
    }

    /// `(initial vertex, generator)` of an edge.
    pub fn edge_parts(&self, e: usize) -> (usize, usize) {
        (e % self.space.size, e / self.space.size)
    }

    pub fn terminal(&self, e: usize) -> usize {
        let (v, g) = self.edge_parts(e);
        self.space.add(v, self.shifts[g])
    }

    pub fn shift(&self, gen: usize) -> usize {
        self.shifts[gen]
    }

    /// Edges traversed by `w` read from `base`, and the end vertex.
    pub fn trace(&self, w: &Word, base: usize) -> (Vec<Step>, usize) {
        self.trace_letters(w.letters(), base)
    }

    pub fn trace_letters(&self, letters: &[Letter], base: usize) -> (Vec<Step>, usize) {
        let mut at = base;
        let mut steps = Vec::with_capacity(letters.len());
        for l in letters {
            let g = l.gen.index();
            if l.inverse {
                at = self.space.sub(at, self.shifts[g]);
                steps.push(Step { edge: self.edge(at, g), inverse: true });
            } else {
                steps.push(Step { edge: self.edge(at, g), inverse: false });
                at = self.space.add(at, self.shifts[g]);
            }
        }
        (steps, at)
    }

    /// Sum of the cochain `z` along the path of `w` from `base`.
    pub fn evaluate_word(&self, z: &[u32], w: &Word, base: usize) -> u32 {
        self.evaluate_letters(z, w.letters(), base)
    }

    pub fn evaluate_letters(&self, z: &[u32], letters: &[Letter], base: usize) -> u32 {
        let p = self.p();
        let (steps, _) = self.trace_letters(letters, base);
        steps.iter().fold(0, |acc, s| if s.inverse { p.sub(acc, z[s.edge]) } else { p.add(acc, z[s.edge]) })
    }

    /// ∂₂ as a sparse `edges × faces` matrix.
    pub fn boundary2(&self) -> SparseMatrix {
        let p = self.p();
        let mut m = SparseMatrix::new(p, self.edge_count(), self.face_count());
        for (r, rel) in self.pres.relators().iter().enumerate() {
            for v in 0..self.space.size {
                let face = r * self.space.size + v;
                for s in self.trace(rel, v).0 {
                    m.add(s.edge, face, if s.inverse { -1 } else { 1 });
                }
            }
        }
        m
    }

    /// ∂₁ as a sparse `vertices × edges` matrix.
    pub fn boundary1(&self) -> SparseMatrix {
        let mut m = SparseMatrix::new(self.p(), self.vertex_count(), self.edge_count());
        for e in 0..self.edge_count() {
            let (v, _) = self.edge_parts(e);
            m.add(self.terminal(e), e, 1);
            m.add(v, e, -1);
        }
        m
    }

    /// Connected components of the 1-skeleton; the rank of ∂₁ is
    /// `vertices − components` over every field.
    pub fn components(&self) -> usize {
        let mut parent: Vec<usize> = (0..self.vertex_count()).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let mut comps = self.vertex_count();
        for e in 0..self.edge_count() {
            let a = find(&mut parent, self.edge_parts(e).0);
            let b = find(&mut parent, self.terminal(e));
            if a != b {
                parent[a] = b;
                comps -= 1;
            }
        }
        comps
    }

    /// The coboundary of the indicator function of vertex `v`.
    pub fn vertex_coboundary(&self, v: usize) -> Vec<u32> {
        let p = self.p();
        let mut z = vec![0u32; self.edge_count()];
        for g in 0..self.pres.gen_count() {
            let out = self.edge(v, g);
            let into = self.edge(self.space.sub(v, self.shifts[g]), g);
            z[into] = p.add(z[into], 1);
            z[out] = p.sub(z[out], 1);
        }
        z
    }

    /// Value of the cochain on the boundary of face `(v, r)`.
    pub fn face_value(&self, z: &[u32], r: usize, v: usize) -> u32 {
        self.evaluate_word(z, &self.pres.relators()[r], v)
    }
}

/// Betti numbers of the cover over F_p.
pub fn cover_betti(c: &CoverComplex) -> Result<ComplexBetti> {
    let rank1 = c.vertex_count() - c.components();
    let rank2 = c.boundary2().rank()?;
    Ok(ComplexBetti {
        b0: c.vertex_count() - rank1,
        b1: c.edge_count() - rank1 - rank2,
        b2: c.face_count() - rank2,
        p: c.p(),
    })
}

/// Coordinates of vertices in the basis `{φ(x_j) : j ∈ X₁}`.
#[derive(Clone, Debug)]
pub struct VertexFrame {
    x1: Vec<usize>,
    /// Inverse of the matrix whose columns are the X₁ images.
    inverse: FpMatrix,
    basis: FpMatrix,
    space: VertexSpace,
}

impl VertexFrame {
    pub fn new(c: &CoverComplex, x1: &[usize]) -> Result<Self> {
        let p = c.p();
        let n = c.n();
        if x1.len() != n {
            return Err(Error::InvalidPartition(format!("{} X1 generators for rank {n}", x1.len())));
        }
        let columns: Vec<Vec<u32>> = x1.iter().map(|&g| c.epi().image(g).to_vec()).collect();
        let basis = FpMatrix::from_columns(p, n, &columns);
        let mut inv_cols = Vec::with_capacity(n);
        for i in 0..n {
            let mut e = vec![0u32; n];
            e[i] = 1;
            match basis.solve(&e)? {
                Some(col) => inv_cols.push(col),
                None => return Err(Error::InvalidPartition("images of X1 are not a basis".into())),
            }
        }
        Ok(VertexFrame { x1: x1.to_vec(), inverse: FpMatrix::from_columns(p, n, &inv_cols), basis, space: c.space })
    }

    pub fn x1(&self) -> &[usize] {
        &self.x1
    }

    /// All coordinates `c_j(v)` for `j` in X₁ order.
    pub fn coordinates(&self, v: usize) -> Vec<u32> {
        self.inverse.mul_vec(&self.space.decode(v)).expect("frame dimensions")
    }

    /// `c_j(v)` where `j` is the position within X₁.
    pub fn vertex_eval(&self, v: usize, j: usize) -> u32 {
        self.coordinates(v)[j]
    }

    /// The vertex with the given X₁ coordinates.
    pub fn vertex(&self, coords: &[u32]) -> usize {
        self.space.encode(&self.basis.mul_vec(coords).expect("frame dimensions"))
    }

    /// The X₁ word `∏ x_j^{c_j(v)}` leading from the basepoint to `v`.
    pub fn path_word(&self, v: usize) -> Word {
        let coords = self.coordinates(v);
        word::reduce(
            self.x1
                .iter()
                .zip(&coords)
                .flat_map(|(&g, &c)| std::iter::repeat(Letter::pos(g)).take(c as usize)),
        )
    }
}

/// A presentation of `π₁` of the cover, with the spanning tree used.
#[derive(Clone, Debug)]
pub struct SchreierPresentation {
    pub presentation: Presentation,
    /// The edge behind each new generator.
    pub generator_edges: Vec<usize>,
    /// Faces whose rewritten boundary reduced to the empty word.
    pub trivial_faces: usize,
}

/// Reidemeister–Schreier: generators are the edges outside a breadth-first
/// spanning tree from the basepoint, relators the rewritten face boundaries.
pub fn reidemeister_schreier(c: &CoverComplex) -> Result<SchreierPresentation> {
    let n_vert = c.vertex_count();
    let gens = c.presentation().gen_count();
    let mut in_tree = vec![false; c.edge_count()];
    let mut seen = vec![false; n_vert];
    let mut queue = VecDeque::from([0usize]);
    seen[0] = true;
    while let Some(v) = queue.pop_front() {
        for g in 0..gens {
            let fwd = c.edge(v, g);
            let w = c.terminal(fwd);
            if !seen[w] {
                seen[w] = true;
                in_tree[fwd] = true;
                queue.push_back(w);
            }
            let u = c.space.sub(v, c.shift(g));
            if !seen[u] {
                seen[u] = true;
                in_tree[c.edge(u, g)] = true;
                queue.push_back(u);
            }
        }
    }
    if seen.iter().any(|s| !s) {
        return Err(Error::Invariant("cover is not connected".into()));
    }
    let mut new_index = vec![usize::MAX; c.edge_count()];
    let mut names = Vec::new();
    let mut generator_edges = Vec::new();
    for e in 0..c.edge_count() {
        if !in_tree[e] {
            let (v, g) = c.edge_parts(e);
            new_index[e] = names.len();
            names.push(format!("{}_{v}", c.presentation().generators()[g]));
            generator_edges.push(e);
        }
    }
    let mut relators = Vec::new();
    let mut trivial_faces = 0;
    for rel in c.presentation().relators() {
        for v in 0..n_vert {
            let (steps, _) = c.trace(rel, v);
            let w = word::reduce(
                steps.iter().filter(|s| !in_tree[s.edge]).map(|s| Letter::new(new_index[s.edge], s.inverse)),
            )
            .cyclically_reduced();
            if w.is_identity() {
                trivial_faces += 1;
            } else {
                relators.push(w);
            }
        }
    }
    Ok(SchreierPresentation { presentation: Presentation::new(names, relators)?, generator_edges, trivial_faces })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::parse_presentation;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn two() -> Prime {
        Prime::TWO
    }

    fn genus2() -> Presentation {
        parse_presentation("gens: a b c d\nrels: [a,b]*[c,d]").unwrap()
    }

    #[test]
    fn full_epis() {
        let f3 = Presentation::free(3);
        let epi = full_mod_p_epi(&f3, two()).unwrap();
        assert_eq!(epi.n(), 3);
        assert_eq!(epi.images(), &[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        let worked = parse_presentation("gens: x1 x2 x3\nrels: x3^-1*[x3,x1], x1^2*x3^2").unwrap();
        let epi = full_mod_p_epi(&worked, two()).unwrap();
        assert_eq!(epi.images(), &[vec![1, 0], vec![0, 1], vec![0, 0]]);
        let z = Presentation::free(1);
        assert_eq!(full_mod_p_epi(&z, two()).unwrap().n(), 1);
        let trivial = parse_presentation("gens: a\nrels: a").unwrap();
        assert!(matches!(full_mod_p_epi(&trivial, two()), Err(Error::NoModPHomology { p: 2 })));
    }

    #[test]
    fn epimorphism_validation() {
        let g2 = genus2();
        assert!(Epimorphism::new(&g2, two(), 1, vec![vec![1], vec![0], vec![0], vec![0]]).is_ok());
        assert!(Epimorphism::new(&g2, two(), 2, vec![vec![1, 0], vec![1, 0], vec![0, 0], vec![0, 0]]).is_err());
        let z3 = parse_presentation("gens: a\nrels: a^3").unwrap();
        assert!(Epimorphism::new(&z3, two(), 1, vec![vec![1]]).is_err());
        assert!(Epimorphism::new(&z3, Prime::new(3).unwrap(), 1, vec![vec![1]]).is_ok());
    }

    #[test]
    fn cube_graph() {
        let f3 = Presentation::free(3);
        let c = build_cover(&f3, &full_mod_p_epi(&f3, two()).unwrap(), DEFAULT_CELL_BUDGET).unwrap();
        assert_eq!((c.vertex_count(), c.edge_count(), c.face_count()), (8, 24, 0));
        let b = cover_betti(&c).unwrap();
        assert_eq!((b.b0, b.b1, b.b2), (1, 17, 0));
        let rs = reidemeister_schreier(&c).unwrap();
        assert_eq!((rs.presentation.gen_count(), rs.presentation.relator_count()), (17, 0));
    }

    #[test]
    fn circle_double_cover() {
        let z = Presentation::free(1);
        let c = build_cover(&z, &full_mod_p_epi(&z, two()).unwrap(), DEFAULT_CELL_BUDGET).unwrap();
        assert_eq!((c.vertex_count(), c.edge_count()), (2, 2));
        assert_eq!(cover_betti(&c).unwrap().b1, 1);
        let rs = reidemeister_schreier(&c).unwrap();
        assert_eq!((rs.presentation.gen_count(), rs.presentation.relator_count()), (1, 0));
    }

    #[test]
    fn genus2_cover() {
        let g2 = genus2();
        let c = build_cover(&g2, &full_mod_p_epi(&g2, two()).unwrap(), DEFAULT_CELL_BUDGET).unwrap();
        assert_eq!((c.vertex_count(), c.edge_count(), c.face_count()), (16, 64, 16));
        let b = cover_betti(&c).unwrap();
        assert_eq!((b.b0, b.b1, b.b2), (1, 34, 1));
        let rs = reidemeister_schreier(&c).unwrap();
        assert_eq!((rs.presentation.gen_count(), rs.presentation.relator_count()), (49, 16));
        let rb = rs.presentation.complex_betti(two());
        assert_eq!((rb.b1, rb.b2), (34, 1));
    }

    #[test]
    fn worked_example_cover() {
        let worked = parse_presentation("gens: x1 x2 x3\nrels: x3^-1*[x3,x1], x1^2*x3^2").unwrap();
        let c = build_cover(&worked, &full_mod_p_epi(&worked, two()).unwrap(), DEFAULT_CELL_BUDGET).unwrap();
        let rs = reidemeister_schreier(&c).unwrap();
        assert_eq!((rs.presentation.gen_count(), rs.presentation.relator_count()), (9, 8));
        let b = cover_betti(&c).unwrap();
        let rb = rs.presentation.complex_betti(two());
        assert_eq!((b.b1, b.b2), (rb.b1, rb.b2));
    }

    #[test]
    fn budget() {
        let g2 = genus2();
        let epi = full_mod_p_epi(&g2, two()).unwrap();
        match build_cover(&g2, &epi, 95) {
            Err(Error::BudgetExceeded { required, allowed }) => assert_eq!((required.as_str(), allowed), ("96", 95)),
            other => panic!("{other:?}"),
        }
        assert!(build_cover(&g2, &epi, 96).is_ok());
    }

    #[test]
    fn boundary_composition_and_euler() {
        for (text, p) in [
            ("gens: a b c d\nrels: [a,b]*[c,d]", 2u64),
            ("gens: x1 x2 x3\nrels: x3^-1*[x3,x1], x1^2*x3^2", 2),
            ("gens: a b\nrels: [a,b]", 3),
            ("gens: a b\nrels: b*a*b^-1*a^-3", 2),
        ] {
            let pres = parse_presentation(text).unwrap();
            let p = Prime::new(p).unwrap();
            let epi = full_mod_p_epi(&pres, p).unwrap();
            let c = build_cover(&pres, &epi, DEFAULT_CELL_BUDGET).unwrap();
            let prod = c.boundary1().mul(&c.boundary2()).unwrap();
            assert!(prod.is_zero(), "{text}");
            let b = cover_betti(&c).unwrap();
            let chi = b.b0 as i64 - b.b1 as i64 + b.b2 as i64;
            assert_eq!(chi, c.vertex_count() as i64 * (1 - pres.gen_count() as i64 + pres.relator_count() as i64));
            assert!(b.b1 >= pres.complex_betti(p).b1);
            let dense_rank1 = c.boundary1().rank().unwrap();
            assert_eq!(dense_rank1, c.vertex_count() - c.components());
        }
    }

    #[test]
    fn quotient_enumeration_counts() {
        let g2 = genus2();
        let full = full_mod_p_epi(&g2, two()).unwrap();
        let all = enumerate_quotients(&g2, &full, |_| true).unwrap();
        let expected: u32 = (1..=4).map(|k| crate::linalg::gaussian_binomial(4, k, two()).to_u32().unwrap()).sum();
        assert_eq!(all.len() as u32, expected);
    }

    #[test]
    fn vertex_frame_paths() {
        let g2 = genus2();
        let c = build_cover(&g2, &full_mod_p_epi(&g2, two()).unwrap(), DEFAULT_CELL_BUDGET).unwrap();
        let frame = VertexFrame::new(&c, &[0, 1, 2, 3]).unwrap();
        assert_eq!(frame.coordinates(0), vec![0; 4]);
        let v = c.terminal(c.edge(0, 0));
        assert_eq!(frame.vertex_eval(v, 0), 1);
        for v in 0..c.vertex_count() {
            assert_eq!(c.trace(&frame.path_word(v), 0).1, v);
            assert_eq!(frame.vertex(&frame.coordinates(v)), v);
        }
    }

    #[test]
    fn vertex_space_odd() {
        let s = VertexSpace { p: 3, n: 3, size: 27 };
        for a in 0..27 {
            assert_eq!(s.add(a, s.neg(a)), 0);
            assert_eq!(s.encode(&s.decode(a)), a);
            for b in 0..27 {
                assert_eq!(s.sub(s.add(a, b), b), a);
            }
        }
    }

    fn random_word(rng: &mut ChaCha8Rng, gens: usize, len: usize) -> Word {
        word::reduce((0..len).map(|_| Letter::new(rng.gen_range(0..gens), rng.gen_bool(0.5))))
    }

    proptest! {
        #[test]
        fn evaluation_splits_along_paths(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let g2 = genus2();
            let p = Prime::new(if seed % 2 == 0 { 2 } else { 3 }).unwrap();
            let c = build_cover(&g2, &full_mod_p_epi(&g2, p).unwrap(), DEFAULT_CELL_BUDGET).unwrap();
            let z: Vec<u32> = (0..c.edge_count()).map(|_| rng.gen_range(0..p.get())).collect();
            let g = random_word(&mut rng, 4, 12);
            let h = random_word(&mut rng, 4, 12);
            let base = rng.gen_range(0..c.vertex_count());
            let mid = c.trace(&g, base).1;
            let whole = c.evaluate_word(&z, &g.mul(&h), base);
            prop_assert_eq!(whole, p.add(c.evaluate_word(&z, &g, base), c.evaluate_word(&z, &h, mid)));
            prop_assert_eq!(c.evaluate_word(&z, &Word::identity(), base), 0);
        }
    }
}
