//! Exact linear algebra over prime fields.
//!
//! Dense row-reduction with deterministic pivoting (first nonzero row, columns
//! scanned left to right), so ranks, kernel bases and particular solutions are
//! reproducible. Over F_2 the work is done on bit-packed rows; the generic
//! path and the packed path produce identical reduced echelon forms.

mod gf2;
mod prime;

pub use gf2::Gf2Matrix;
pub use prime::Prime;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Dense matrix over F_p, row-major, entries in `0..p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpMatrix {
    p: Prime,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

/// Output of a reduction: the rank and a basis of the right kernel.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankKernel {
    pub rank: usize,
    pub kernel: Vec<Vec<u32>>,
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub matrix: FpMatrix,
    pub pivots: Vec<usize>,
}

impl FpMatrix {
    pub fn zeros(p: Prime, rows: usize, cols: usize) -> Self {
        FpMatrix { p, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(p: Prime, n: usize) -> Self {
        let mut m = FpMatrix::zeros(p, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Build from integer rows, reducing every entry mod p.
    pub fn from_rows(p: Prime, rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut m = FpMatrix::zeros(p, rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::Dimension(format!("row {i} has {} entries, expected {cols}", row.len())));
            }
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, p.reduce_i64(v));
            }
        }
        Ok(m)
    }

    /// Build from column vectors (each of length `rows`).
    pub fn from_columns(p: Prime, rows: usize, columns: &[Vec<u32>]) -> Self {
        let mut m = FpMatrix::zeros(p, rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            debug_assert_eq!(col.len(), rows);
            for (i, &v) in col.iter().enumerate() {
                m.set(i, j, v % p.get());
            }
        }
        m
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        debug_assert!(v < self.p.get());
        self.data[r * self.cols + c] = v;
    }

    pub fn add_at(&mut self, r: usize, c: usize, v: i64) {
        let cur = self.get(r, c);
        self.set(r, c, self.p.add(cur, self.p.reduce_i64(v)));
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<u32> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn transpose(&self) -> FpMatrix {
        let mut t = FpMatrix::zeros(self.p, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn mul_vec(&self, x: &[u32]) -> Result<Vec<u32>> {
        if x.len() != self.cols {
            return Err(Error::Dimension(format!("vector of length {} against {} columns", x.len(), self.cols)));
        }
        let p = self.p.get() as u64;
        Ok((0..self.rows)
            .map(|r| {
                let acc = self.row(r).iter().zip(x).fold(0u64, |acc, (&a, &b)| (acc + a as u64 * b as u64) % p);
                acc as u32
            })
            .collect())
    }

    pub fn mul(&self, other: &FpMatrix) -> Result<FpMatrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!("{}x{} times {}x{}", self.rows, self.cols, other.rows, other.cols)));
        }
        let p = self.p.get() as u64;
        let mut out = FpMatrix::zeros(self.p, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k) as u64;
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = (out.get(i, j) as u64 + a * other.get(k, j) as u64) % p;
                    out.set(i, j, v as u32);
                }
            }
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    /// Stack `other` below `self`.
    pub fn vstack(&self, other: &FpMatrix) -> Result<FpMatrix> {
        if self.cols != other.cols && self.rows > 0 && other.rows > 0 {
            return Err(Error::Dimension(format!("stacking {} and {} columns", self.cols, other.cols)));
        }
        let cols = if self.rows > 0 { self.cols } else { other.cols };
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(FpMatrix { p: self.p, rows: self.rows + other.rows, cols, data })
    }

    /// Reduced row echelon form; dispatches to the packed path when p = 2.
    pub fn rref(&self) -> Rref {
        if self.p.get() == 2 {
            let (packed, pivots) = Gf2Matrix::from_fp(self).into_rref();
            Rref { matrix: packed.to_fp(), pivots }
        } else {
            self.rref_generic()
        }
    }

    /// Row reduction with per-operation modular arithmetic, valid for any p.
    pub fn rref_generic(&self) -> Rref {
        let p = self.p;
        let pm = p.get() as u64;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(piv) = (r..m.rows).find(|&i| m.get(i, c) != 0) else { continue };
            if piv != r {
                for k in 0..m.cols {
                    m.data.swap(piv * m.cols + k, r * m.cols + k);
                }
            }
            let inv = p.inv(m.get(r, c));
            if inv != 1 {
                for k in c..m.cols {
                    let v = (m.get(r, k) as u64 * inv as u64 % pm) as u32;
                    m.set(r, k, v);
                }
            }
            let pivot_row: Vec<u32> = m.row(r)[c..].to_vec();
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m.get(i, c);
                if f == 0 {
                    continue;
                }
                let neg = pm - f as u64;
                let base = i * m.cols;
                for (k, &pv) in pivot_row.iter().enumerate() {
                    if pv != 0 {
                        let slot = &mut m.data[base + c + k];
                        *slot = ((*slot as u64 + neg * pv as u64) % pm) as u32;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        Rref { matrix: m, pivots }
    }

    pub fn rank(&self) -> usize {
        if self.p.get() == 2 {
            Gf2Matrix::from_fp(self).rank()
        } else {
            self.rref_generic().pivots.len()
        }
    }

    /// Rank and a basis of `{v : Mv = 0}`.
    pub fn rank_and_kernel(&self) -> RankKernel {
        kernel_from_rref(&self.rref(), self.cols)
    }

    /// The generic (unpacked) route, exposed so both routes can be compared.
    pub fn rank_and_kernel_generic(&self) -> RankKernel {
        kernel_from_rref(&self.rref_generic(), self.cols)
    }

    /// A particular solution of `Mx = b`, or `None` when the system is inconsistent.
    pub fn solve(&self, b: &[u32]) -> Result<Option<Vec<u32>>> {
        if b.len() != self.rows {
            return Err(Error::Dimension(format!("right-hand side of length {} for {} rows", b.len(), self.rows)));
        }
        let mut aug = FpMatrix::zeros(self.p, self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug.set(r, c, self.get(r, c));
            }
            aug.set(r, self.cols, b[r] % self.p.get());
        }
        let red = aug.rref();
        if red.pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![0u32; self.cols];
        for (i, &c) in red.pivots.iter().enumerate() {
            x[c] = red.matrix.get(i, self.cols);
        }
        Ok(Some(x))
    }
}

fn kernel_from_rref(red: &Rref, cols: usize) -> RankKernel {
    let p = red.matrix.p.get();
    let mut is_pivot = vec![false; cols];
    for &c in &red.pivots {
        is_pivot[c] = true;
    }
    let kernel = (0..cols)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = vec![0u32; cols];
            v[f] = 1;
            for (i, &c) in red.pivots.iter().enumerate() {
                let e = red.matrix.get(i, f);
                v[c] = (p - e) % p;
            }
            v
        })
        .collect();
    RankKernel { rank: red.pivots.len(), kernel }
}

/// Largest dense matrix [`SparseMatrix::rank`] will materialize.
pub const DENSE_LIMIT_BYTES: u64 = 1 << 30;

/// Column-oriented sparse assembly for matrices too large to hold as `u32`
/// per entry. Reduction is dense: packed bits for p = 2, `FpMatrix` otherwise.
#[derive(Clone, Debug)]
pub struct SparseMatrix {
    p: Prime,
    rows: usize,
    cols: usize,
    entries: Vec<Vec<(usize, u32)>>,
}

impl SparseMatrix {
    pub fn new(p: Prime, rows: usize, cols: usize) -> Self {
        SparseMatrix { p, rows, cols, entries: vec![Vec::new(); cols] }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Add `v` to entry `(r, c)`.
    pub fn add(&mut self, r: usize, c: usize, v: i64) {
        debug_assert!(r < self.rows && c < self.cols);
        let v = self.p.reduce_i64(v);
        if v == 0 {
            return;
        }
        let col = &mut self.entries[c];
        match col.iter_mut().find(|(row, _)| *row == r) {
            Some((_, cur)) => *cur = self.p.add(*cur, v),
            None => col.push((r, v)),
        }
    }

    pub fn column(&self, c: usize) -> Vec<u32> {
        let mut v = vec![0; self.rows];
        for &(r, x) in &self.entries[c] {
            v[r] = self.p.add(v[r], x);
        }
        v
    }

    pub fn to_dense(&self) -> FpMatrix {
        let mut m = FpMatrix::zeros(self.p, self.rows, self.cols);
        for (c, col) in self.entries.iter().enumerate() {
            for &(r, v) in col {
                let cur = m.get(r, c);
                m.set(r, c, self.p.add(cur, v));
            }
        }
        m
    }

    /// Rank by dense elimination; errors when the dense form would exceed
    /// [`DENSE_LIMIT_BYTES`].
    pub fn rank(&self) -> Result<usize> {
        let (short, long) = (self.rows.min(self.cols), self.rows.max(self.cols));
        let bytes = if self.p.get() == 2 {
            long as u128 * short.div_ceil(64) as u128 * 8
        } else {
            self.rows as u128 * self.cols as u128 * 4
        };
        if bytes > DENSE_LIMIT_BYTES as u128 {
            return Err(Error::BudgetExceeded {
                required: format!("{bytes} bytes for a dense {}x{} matrix", self.rows, self.cols),
                allowed: DENSE_LIMIT_BYTES,
            });
        }
        Ok(if self.p.get() == 2 {
            // Pack the transpose when it has fewer words per row.
            let mut g = if self.rows <= self.cols {
                let mut g = Gf2Matrix::zeros(self.cols, self.rows);
                for (c, col) in self.entries.iter().enumerate() {
                    for &(r, v) in col {
                        if v & 1 == 1 {
                            g.flip(c, r);
                        }
                    }
                }
                g
            } else {
                let mut g = Gf2Matrix::zeros(self.rows, self.cols);
                for (c, col) in self.entries.iter().enumerate() {
                    for &(r, v) in col {
                        if v & 1 == 1 {
                            g.flip(r, c);
                        }
                    }
                }
                g
            };
            g.eliminate_rank()
        } else {
            self.to_dense().rank()
        })
    }

    /// `M · x`.
    pub fn mul_vec(&self, x: &[u32]) -> Vec<u32> {
        let mut out = vec![0u32; self.rows];
        for (c, col) in self.entries.iter().enumerate() {
            let xc = x[c];
            if xc == 0 {
                continue;
            }
            for &(r, v) in col {
                out[r] = self.p.add(out[r], self.p.mul(v, xc));
            }
        }
        out
    }

    /// `Mᵀ · y`.
    pub fn transpose_mul_vec(&self, y: &[u32]) -> Vec<u32> {
        self.entries
            .iter()
            .map(|col| col.iter().fold(0u32, |acc, &(r, v)| self.p.add(acc, self.p.mul(v, y[r]))))
            .collect()
    }

    /// `self · other` as a dense matrix.
    pub fn mul(&self, other: &SparseMatrix) -> Result<FpMatrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!("{}x{} times {}x{}", self.rows, self.cols, other.rows, other.cols)));
        }
        let mut out = FpMatrix::zeros(self.p, self.rows, other.cols);
        for (j, col) in other.entries.iter().enumerate() {
            let prod = self.mul_vec(&other.column_dense_from(col));
            for (i, v) in prod.into_iter().enumerate() {
                out.set(i, j, v);
            }
        }
        Ok(out)
    }

    fn column_dense_from(&self, col: &[(usize, u32)]) -> Vec<u32> {
        let mut v = vec![0; self.rows];
        for &(r, x) in col {
            v[r] = self.p.add(v[r], x);
        }
        v
    }
}

/// Number of `k`-dimensional subspaces of F_p^n; zero when `k > n`.
pub fn gaussian_binomial(n: u32, k: u32, p: Prime) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let q = BigUint::from(p.get());
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..k {
        num *= q.pow(n) - q.pow(i);
        den *= q.pow(k) - q.pow(i);
    }
    num / den
}

/// Every `k × n` matrix in reduced row echelon form with `k` pivots, i.e.
/// one matrix per `k`-codimensional subspace (its kernel) of `F_p^n`.
/// Ordered by pivot set (lexicographic), then free entries (row-major, base p).
pub fn rref_matrices(p: Prime, k: usize, n: usize) -> Vec<FpMatrix> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut pivots: Vec<usize> = (0..k).collect();
    loop {
        // free slots: (row, col) with col > pivot[row], col not a pivot
        let slots: Vec<(usize, usize)> = (0..k)
            .flat_map(|r| ((pivots[r] + 1)..n).filter(|c| !pivots.contains(c)).map(move |c| (r, c)))
            .collect::<Vec<_>>();
        let mut digits = vec![0u32; slots.len()];
        loop {
            let mut m = FpMatrix::zeros(p, k, n);
            for (r, &c) in pivots.iter().enumerate() {
                m.set(r, c, 1);
            }
            for (&(r, c), &d) in slots.iter().zip(&digits) {
                m.set(r, c, d);
            }
            out.push(m);
            let Some(i) = digits.iter().rposition(|&d| d + 1 < p.get()) else { break };
            digits[i] += 1;
            for d in &mut digits[i + 1..] {
                *d = 0;
            }
        }
        // next k-combination of 0..n
        let Some(i) = (0..k).rev().find(|&i| pivots[i] < n - k + i) else { break };
        pivots[i] += 1;
        for j in i + 1..k {
            pivots[j] = pivots[j - 1] + 1;
        }
    }
    out
}

/// Total number of subspaces of F_p^n.
pub fn subspace_count(n: u32, p: Prime) -> BigUint {
    (0..=n).map(|k| gaussian_binomial(n, k, p)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn f(p: u32) -> Prime {
        Prime::new(p as u64).unwrap()
    }

    fn random_matrix(rng: &mut ChaCha8Rng, p: Prime, rows: usize, cols: usize, density: f64) -> FpMatrix {
        let mut m = FpMatrix::zeros(p, rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                if rng.gen_bool(density) {
                    m.set(r, c, rng.gen_range(1..p.get()));
                }
            }
        }
        m
    }

    #[test]
    fn zero_and_identity() {
        let z = FpMatrix::zeros(f(2), 3, 3);
        let rk = z.rank_and_kernel();
        assert_eq!((rk.rank, rk.kernel.len()), (0, 3));
        for n in [1, 5, 70] {
            let rk = FpMatrix::identity(f(3), n).rank_and_kernel();
            assert_eq!(rk.rank, n);
            assert!(rk.kernel.is_empty());
        }
    }

    #[test]
    fn boundary_of_worked_example() {
        // columns (0,0,1) and (0,0,0): relator exponent vectors mod 2
        let m = FpMatrix::from_rows(f(2), &[vec![0, 0], vec![0, 0], vec![1, 0]]).unwrap();
        let rk = m.rank_and_kernel();
        assert_eq!(rk.rank, 1);
        assert_eq!(rk.kernel, vec![vec![0, 1]]);
    }

    #[test]
    fn solve_identity_and_inconsistent() {
        let id = FpMatrix::identity(f(5), 4);
        assert_eq!(id.solve(&[1, 2, 3, 4]).unwrap(), Some(vec![1, 2, 3, 4]));
        let m = FpMatrix::from_rows(f(5), &[vec![1, 0], vec![0, 0]]).unwrap();
        assert_eq!(m.solve(&[0, 1]).unwrap(), None);
        assert!(m.solve(&[0]).is_err());
    }

    #[test]
    fn gaussian_binomials() {
        assert_eq!(gaussian_binomial(2, 1, f(2)), BigUint::from(3u32));
        assert_eq!(gaussian_binomial(4, 2, f(2)), BigUint::from(35u32));
        assert_eq!(gaussian_binomial(7, 0, f(3)), BigUint::one());
        assert_eq!(gaussian_binomial(2, 3, f(2)), BigUint::zero());
        assert_eq!(subspace_count(3, f(2)), BigUint::from(16u32));
        assert_eq!(subspace_count(2, f(3)), BigUint::from(6u32));
        assert_eq!(subspace_count(5, f(2)), BigUint::from(374u32));
    }

    /// Enumerate every subspace of F_2^4 by its reduced echelon basis.
    #[test]
    fn gaussian_binomial_against_enumeration() {
        let p = f(2);
        let mut seen = std::collections::BTreeSet::new();
        for mask in 0u32..(1 << 16) {
            let rows: Vec<Vec<i64>> = (0..4).map(|r| (0..4).map(|c| ((mask >> (4 * r + c)) & 1) as i64).collect()).collect();
            let m = FpMatrix::from_rows(p, &rows).unwrap();
            let red = m.rref();
            if red.pivots.len() == 2 {
                let basis: Vec<Vec<u32>> = (0..2).map(|i| red.matrix.row(i).to_vec()).collect();
                seen.insert(basis);
            }
        }
        assert_eq!(BigUint::from(seen.len()), gaussian_binomial(4, 2, p));
    }

    #[test]
    fn echelon_enumeration() {
        for (p, n) in [(2u32, 4usize), (3, 3), (5, 2)] {
            for k in 0..=n {
                let all = rref_matrices(f(p), k, n);
                assert_eq!(BigUint::from(all.len()), gaussian_binomial(n as u32, k as u32, f(p)));
                let mut kernels = std::collections::BTreeSet::new();
                for m in &all {
                    assert_eq!(m.rref(), Rref { matrix: m.clone(), pivots: m.rref().pivots });
                    assert_eq!(m.rank(), k);
                    kernels.insert(m.rank_and_kernel().kernel);
                }
                assert_eq!(kernels.len(), all.len());
            }
        }
    }

    #[test]
    fn packed_matches_generic_large() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for &(rows, cols, density) in &[(2048usize, 2048usize, 0.002), (300, 700, 0.01), (129, 64, 0.5), (64, 129, 0.5)] {
            let m = random_matrix(&mut rng, f(2), rows, cols, density);
            let generic = m.rref_generic();
            let (packed, pivots) = Gf2Matrix::from_fp(&m).into_rref();
            assert_eq!(generic.pivots, pivots);
            assert_eq!(generic.matrix, packed.to_fp());
            assert_eq!(m.rank(), pivots.len());
        }
    }

    #[test]
    fn sparse_rank_matches_dense() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for p in [2u32, 3, 7] {
            let p = f(p);
            let mut s = SparseMatrix::new(p, 40, 90);
            for _ in 0..300 {
                s.add(rng.gen_range(0..40), rng.gen_range(0..90), rng.gen_range(-5..5));
            }
            let d = s.to_dense();
            assert_eq!(s.rank().unwrap(), d.rank_and_kernel_generic().rank);
            let x: Vec<u32> = (0..90).map(|_| rng.gen_range(0..p.get())).collect();
            assert_eq!(s.mul_vec(&x), d.mul_vec(&x).unwrap());
            let y: Vec<u32> = (0..40).map(|_| rng.gen_range(0..p.get())).collect();
            assert_eq!(s.transpose_mul_vec(&y), d.transpose().mul_vec(&y).unwrap());
        }
    }

    fn arb_matrix() -> impl Strategy<Value = FpMatrix> {
        (prop::sample::select(vec![2u32, 3, 5, 7]), 1usize..12, 1usize..12, any::<u64>()).prop_map(|(p, r, c, seed)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            random_matrix(&mut rng, f(p), r, c, 0.4)
        })
    }

    proptest! {
        #[test]
        fn rank_nullity_and_kernel(m in arb_matrix()) {
            let rk = m.rank_and_kernel();
            prop_assert_eq!(rk.rank + rk.kernel.len(), m.cols());
            for v in &rk.kernel {
                prop_assert!(m.mul_vec(v).unwrap().iter().all(|&x| x == 0));
            }
            let k = FpMatrix::from_columns(m.prime(), m.cols(), &rk.kernel);
            prop_assert_eq!(k.rank(), rk.kernel.len());
            prop_assert_eq!(rk, m.rank_and_kernel_generic());
        }

        #[test]
        fn rank_of_transpose(m in arb_matrix()) {
            prop_assert_eq!(m.rank(), m.transpose().rank());
        }

        #[test]
        fn solve_multiply_back(m in arb_matrix(), seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let x: Vec<u32> = (0..m.cols()).map(|_| rng.gen_range(0..m.prime().get())).collect();
            let b = m.mul_vec(&x).unwrap();
            let sol = m.solve(&b).unwrap().expect("consistent by construction");
            prop_assert_eq!(m.mul_vec(&sol).unwrap(), b);
        }

        #[test]
        fn gaussian_binomial_symmetry(n in 0u32..12, k in 0u32..12, p in prop::sample::select(vec![2u32, 3, 5])) {
            prop_assume!(k <= n);
            prop_assert_eq!(gaussian_binomial(n, k, f(p)), gaussian_binomial(n, n - k, f(p)));
        }
    }
}
