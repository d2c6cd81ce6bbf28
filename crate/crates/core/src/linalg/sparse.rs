use super::BitVec;

/// A matrix over F2 stored by columns, each a strictly increasing list of
/// row indices. Used for differentials whose targets have hundreds of
/// thousands of basis elements.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SparseMatrix {
    nrows: usize,
    columns: Vec<Vec<u32>>,
}

/// Outcome of [`SparseMatrix::reduce`].
#[derive(Clone, Debug)]
pub struct ColumnReduction {
    pub rank: usize,
    /// A basis of the null space, as vectors over the columns.
    pub kernel: Vec<BitVec>,
    /// Reduced nonzero columns; their lowest row indices are distinct, so
    /// they form an echelon basis of the column space.
    pub image: Vec<Vec<u32>>,
}

/// Symmetric difference of two sorted index lists.
pub fn xor_sorted(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

impl SparseMatrix {
    pub fn new(nrows: usize) -> Self {
        SparseMatrix { nrows, columns: Vec::new() }
    }

    /// Push a column; the entries are sorted and paired entries cancel.
    pub fn push_column(&mut self, mut rows: Vec<u32>) {
        rows.sort_unstable();
        let mut out: Vec<u32> = Vec::with_capacity(rows.len());
        for r in rows {
            debug_assert!((r as usize) < self.nrows);
            if out.last() == Some(&r) {
                out.pop();
            } else {
                out.push(r);
            }
        }
        self.columns.push(out);
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.columns.len()
    }

    pub fn column(&self, j: usize) -> &[u32] {
        &self.columns[j]
    }

    pub fn columns(&self) -> &[Vec<u32>] {
        &self.columns
    }

    pub fn column_dense(&self, j: usize) -> BitVec {
        BitVec::from_indices(self.nrows, self.columns[j].iter().map(|&r| r as usize))
    }

    /// Apply to a dense vector over the columns.
    pub fn apply(&self, v: &BitVec) -> BitVec {
        let mut out = BitVec::zeros(self.nrows);
        for j in v.iter_ones() {
            for &r in &self.columns[j] {
                out.flip(r as usize);
            }
        }
        out
    }

    /// Keep only the rows selected by `keep`, renumbered through it.
    pub fn select_rows(&self, new_nrows: usize, keep: impl Fn(u32) -> Option<u32>) -> SparseMatrix {
        let columns = self
            .columns
            .iter()
            .map(|c| c.iter().filter_map(|&r| keep(r)).collect())
            .collect();
        SparseMatrix { nrows: new_nrows, columns }
    }

    pub fn to_dense(&self) -> super::BitMatrix {
        let cols: Vec<BitVec> = (0..self.ncols()).map(|j| self.column_dense(j)).collect();
        super::BitMatrix::from_columns(self.nrows, &cols)
    }

    /// Column reduction with the lowest row index as pivot. Returns the rank,
    /// a kernel basis, and an echelon basis of the image.
    pub fn reduce(&self) -> ColumnReduction {
        let n = self.ncols();
        let mut owner: Vec<u32> = vec![u32::MAX; self.nrows];
        let mut reduced: Vec<Vec<u32>> = Vec::new();
        let mut combos: Vec<BitVec> = Vec::new();
        let mut kernel = Vec::new();
        for j in 0..n {
            let mut col = self.columns[j].clone();
            let mut combo = BitVec::unit(n, j);
            while let Some(&low) = col.first() {
                let k = owner[low as usize];
                if k == u32::MAX {
                    owner[low as usize] = reduced.len() as u32;
                    break;
                }
                col = xor_sorted(&col, &reduced[k as usize]);
                combo.xor_assign(&combos[k as usize]);
            }
            if col.is_empty() {
                kernel.push(combo);
            } else {
                reduced.push(col);
                combos.push(combo);
            }
        }
        ColumnReduction { rank: reduced.len(), kernel, image: reduced }
    }

    /// Null space basis with pairwise distinct first set bits, obtained by
    /// reducing columns from last to first. Each vector's first bit is the
    /// column it was born at.
    pub fn kernel_echelon(&self) -> super::Echelon {
        let n = self.ncols();
        let mut owner: Vec<u32> = vec![u32::MAX; self.nrows];
        let mut reduced: Vec<Vec<u32>> = Vec::new();
        let mut combos: Vec<BitVec> = Vec::new();
        let mut kernel = Vec::new();
        for j in (0..n).rev() {
            let mut col = self.columns[j].clone();
            let mut combo = BitVec::unit(n, j);
            while let Some(&low) = col.first() {
                let k = owner[low as usize];
                if k == u32::MAX {
                    owner[low as usize] = reduced.len() as u32;
                    break;
                }
                col = xor_sorted(&col, &reduced[k as usize]);
                combo.xor_assign_from(&combos[k as usize], j);
            }
            if col.is_empty() {
                kernel.push(combo);
            } else {
                reduced.push(col);
                combos.push(combo);
            }
        }
        super::Echelon::from_distinct_leads(n, kernel)
    }

    /// Rank and image basis only, skipping kernel bookkeeping.
    pub fn image_basis(&self) -> Vec<Vec<u32>> {
        let mut owner: Vec<u32> = vec![u32::MAX; self.nrows];
        let mut reduced: Vec<Vec<u32>> = Vec::new();
        for c in &self.columns {
            let mut col = c.clone();
            while let Some(&low) = col.first() {
                let k = owner[low as usize];
                if k == u32::MAX {
                    owner[low as usize] = reduced.len() as u32;
                    break;
                }
                col = xor_sorted(&col, &reduced[k as usize]);
            }
            if !col.is_empty() {
                reduced.push(col);
            }
        }
        reduced
    }
}
