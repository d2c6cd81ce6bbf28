use std::fmt;

use super::{BitVec, Subspace};

/// A dense matrix over F2, stored as packed rows.
#[derive(Clone, PartialEq, Eq)]
pub struct BitMatrix {
    cols: usize,
    rows: Vec<BitVec>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        BitMatrix { cols, rows: vec![BitVec::zeros(cols); rows] }
    }

    pub fn identity(n: usize) -> Self {
        BitMatrix { cols: n, rows: (0..n).map(|i| BitVec::unit(n, i)).collect() }
    }

    /// Build from explicit rows; every row must have length `cols`.
    pub fn from_rows(cols: usize, rows: Vec<BitVec>) -> Self {
        assert!(rows.iter().all(|r| r.len() == cols), "row length does not match column count");
        BitMatrix { cols, rows }
    }

    /// Build from a nested 0/1 literal, mostly for tests.
    pub fn from_u8(rows: &[&[u8]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows = rows
            .iter()
            .map(|r| BitVec::from_bools(&r.iter().map(|&x| x != 0).collect::<Vec<_>>()))
            .collect();
        Self::from_rows(cols, rows)
    }

    /// Build from columns (each of length `rows`).
    pub fn from_columns(rows: usize, columns: &[BitVec]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            for i in c.iter_ones() {
                m.rows[i].set(j, true);
            }
        }
        m
    }

    #[inline]
    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> &[BitVec] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<BitVec> {
        self.rows
    }

    pub fn row(&self, i: usize) -> &BitVec {
        &self.rows[i]
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i].get(j)
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        self.rows[i].set(j, value)
    }

    pub fn column(&self, j: usize) -> BitVec {
        BitVec::from_indices(self.nrows(), (0..self.nrows()).filter(|&i| self.get(i, j)))
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(BitVec::is_zero)
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.nrows());
        for (i, r) in self.rows.iter().enumerate() {
            for j in r.iter_ones() {
                t.rows[j].set(i, true);
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &BitVec) -> BitVec {
        assert_eq!(v.len(), self.cols);
        BitVec::from_bools(&self.rows.iter().map(|r| r.dot(v)).collect::<Vec<_>>())
    }

    pub fn mul(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.cols, other.nrows());
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let mut acc = BitVec::zeros(other.cols);
                for k in r.iter_ones() {
                    acc.xor_assign(&other.rows[k]);
                }
                acc
            })
            .collect();
        BitMatrix { cols: other.cols, rows }
    }

    /// Row-reduce in place to reduced row echelon form, choosing the leftmost
    /// available pivot at each step. Returns the pivot columns; the first
    /// `pivots.len()` rows are the nonzero rows.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let nrows = self.rows.len();
        let mut rank = 0;
        for col in 0..self.cols {
            if rank == nrows {
                break;
            }
            let Some(p) = (rank..nrows).find(|&i| self.rows[i].get(col)) else {
                continue;
            };
            self.rows.swap(rank, p);
            let pivot_row = std::mem::replace(&mut self.rows[rank], BitVec::zeros(0));
            for (i, row) in self.rows.iter_mut().enumerate() {
                if i != rank && !row.is_empty() && row.get(col) {
                    row.xor_assign_from(&pivot_row, col);
                }
            }
            self.rows[rank] = pivot_row;
            pivots.push(col);
            rank += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref_in_place().len()
    }
}

/// Reduced row echelon form and rank.
pub fn rref(m: &BitMatrix) -> (BitMatrix, usize) {
    let mut r = m.clone();
    let rank = r.rref_in_place().len();
    (r, rank)
}

/// Null space `{v : m·v = 0}`.
pub fn kernel_basis(m: &BitMatrix) -> Subspace {
    let mut r = m.clone();
    let pivots = r.rref_in_place();
    let mut is_pivot = vec![false; m.ncols()];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let gens = (0..m.ncols())
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = BitVec::unit(m.ncols(), f);
            for (i, &p) in pivots.iter().enumerate() {
                if r.get(i, f) {
                    v.set(p, true);
                }
            }
            v
        })
        .collect();
    Subspace::from_generators(m.ncols(), gens)
}

/// Some `x` with `m·x = b`, free variables set to zero; `None` if inconsistent.
pub fn solve(m: &BitMatrix, b: &BitVec) -> Option<BitVec> {
    assert_eq!(b.len(), m.nrows());
    let n = m.ncols();
    let rows = m
        .rows()
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.concat(&BitVec::zeros(1));
            row.set(n, b.get(i));
            row
        })
        .collect();
    let mut aug = BitMatrix::from_rows(n + 1, rows);
    let pivots = aug.rref_in_place();
    if pivots.last() == Some(&n) {
        return None;
    }
    let mut x = BitVec::zeros(n);
    for (i, &p) in pivots.iter().enumerate() {
        if aug.get(i, n) {
            x.set(p, true);
        }
    }
    Some(x)
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.nrows(), self.cols)?;
        for r in &self.rows {
            writeln!(f, "  {r:?}")?;
        }
        Ok(())
    }
}
