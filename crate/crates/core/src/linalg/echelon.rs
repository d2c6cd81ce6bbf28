use super::{BitVec, Subspace};

/// A basis in row echelon form that is not necessarily reduced: row `i` is
/// zero before `pivots[i]`, and pivots increase. Large cocycle spaces are
/// kept this way because full back-substitution is quadratic in their size.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    ambient: usize,
    rows: Vec<BitVec>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn new(ambient: usize) -> Self {
        Echelon { ambient, rows: Vec::new(), pivots: Vec::new() }
    }

    /// Build from vectors whose first set bits are pairwise distinct.
    pub fn from_distinct_leads(ambient: usize, rows: Vec<BitVec>) -> Self {
        let mut rows: Vec<(usize, BitVec)> = rows
            .into_iter()
            .map(|r| (r.first_one().expect("zero row in echelon basis"), r))
            .collect();
        rows.sort_by_key(|(p, _)| *p);
        debug_assert!(rows.windows(2).all(|w| w[0].0 < w[1].0));
        let (pivots, rows) = rows.into_iter().unzip();
        Echelon { ambient, rows, pivots }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[BitVec] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Reduce `v` against the basis, returning the coefficients used.
    pub fn reduce_in_place(&self, v: &mut BitVec) -> BitVec {
        let mut coeffs = BitVec::zeros(self.dim());
        for (i, (row, &p)) in self.rows.iter().zip(&self.pivots).enumerate() {
            if v.get(p) {
                v.xor_assign_from(row, p);
                coeffs.set(i, true);
            }
        }
        coeffs
    }

    pub fn coordinates(&self, v: &BitVec) -> Option<BitVec> {
        let mut v = v.clone();
        let c = self.reduce_in_place(&mut v);
        v.is_zero().then_some(c)
    }

    pub fn contains(&self, v: &BitVec) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn combine(&self, coeffs: &BitVec) -> BitVec {
        let mut out = BitVec::zeros(self.ambient);
        for i in coeffs.iter_ones() {
            out.xor_assign(&self.rows[i]);
        }
        out
    }

    /// Add `v` to the span; returns false if it was already there.
    pub fn insert(&mut self, mut v: BitVec) -> bool {
        self.reduce_in_place(&mut v);
        match v.first_one() {
            None => false,
            Some(p) => {
                let at = self.pivots.partition_point(|&q| q < p);
                self.pivots.insert(at, p);
                self.rows.insert(at, v);
                true
            }
        }
    }

    /// The same span in reduced form.
    pub fn to_subspace(&self) -> Subspace {
        Subspace::from_generators(self.ambient, self.rows.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn insert_and_coordinates() {
        let mut e = Echelon::new(4);
        assert!(e.insert(BitVec::from_bools(&[false, true, true, false])));
        assert!(e.insert(BitVec::from_bools(&[true, true, false, false])));
        assert!(!e.insert(BitVec::from_bools(&[true, false, true, false])));
        assert_eq!(e.pivots(), &[0, 1]);
        let v = BitVec::from_bools(&[true, false, true, false]);
        assert_eq!(e.combine(&e.coordinates(&v).unwrap()), v);
        assert!(!e.contains(&BitVec::unit(4, 3)));
        assert_eq!(e.to_subspace().dim(), 2);
    }
}
