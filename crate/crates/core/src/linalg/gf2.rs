use super::{FpMatrix, Prime};

/// Dense F₂ matrix, 64 entries per word, rows padded to whole words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gf2Matrix {
    rows: usize,
    cols: usize,
    stride: usize,
    bits: Vec<u64>,
}

impl Gf2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = cols.div_ceil(64);
        Gf2Matrix { rows, cols, stride, bits: vec![0; rows * stride] }
    }

    pub fn from_fp(m: &FpMatrix) -> Self {
        let mut g = Gf2Matrix::zeros(m.rows(), m.cols());
        for r in 0..m.rows() {
            for (c, &v) in m.row(r).iter().enumerate() {
                if v & 1 == 1 {
                    g.flip(r, c);
                }
            }
        }
        g
    }

    pub fn to_fp(&self) -> FpMatrix {
        let mut m = FpMatrix::zeros(Prime::TWO, self.rows, self.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                if self.get(r, c) {
                    m.set(r, c, 1);
                }
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        (self.bits[r * self.stride + c / 64] >> (c % 64)) & 1 == 1
    }

    pub fn flip(&mut self, r: usize, c: usize) {
        self.bits[r * self.stride + c / 64] ^= 1 << (c % 64);
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let (head, tail) = self.bits.split_at_mut(hi * self.stride);
        head[lo * self.stride..(lo + 1) * self.stride].swap_with_slice(&mut tail[..self.stride]);
    }

    /// `row[dst] ^= row[src]`, starting at word `from`.
    fn xor_row(&mut self, dst: usize, src: usize, from: usize) {
        let s = self.stride;
        let (d, sr) = if dst < src {
            let (head, tail) = self.bits.split_at_mut(src * s);
            (&mut head[dst * s..(dst + 1) * s], &tail[..s])
        } else {
            let (head, tail) = self.bits.split_at_mut(dst * s);
            (&mut tail[..s], &head[src * s..(src + 1) * s])
        };
        for (x, y) in d[from..].iter_mut().zip(&sr[from..]) {
            *x ^= *y;
        }
    }

    /// Full reduced row echelon form, same pivoting rule as the generic path.
    pub fn into_rref(mut self) -> (Gf2Matrix, Vec<usize>) {
        let pivots = self.eliminate(true);
        (self, pivots)
    }

    /// Rank by forward elimination only; consumes the matrix contents.
    pub fn eliminate_rank(&mut self) -> usize {
        self.eliminate(false).len()
    }

    fn eliminate(&mut self, full: bool) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let w = c / 64;
            let mask = 1u64 << (c % 64);
            let Some(piv) = (r..self.rows).find(|&i| self.bits[i * self.stride + w] & mask != 0) else {
                continue;
            };
            self.swap_rows(piv, r);
            let start = if full { 0 } else { r + 1 };
            for i in start..self.rows {
                if i != r && self.bits[i * self.stride + w] & mask != 0 {
                    self.xor_row(i, r, w);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().eliminate_rank()
    }
}
