use super::{BitMatrix, BitVec};
use crate::error::{Error, Result};

/// A subspace of F2^n held as a basis in reduced row echelon form.
///
/// The RREF basis is unique for a given subspace, so two generating sets of
/// the same subspace compare equal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    rows: Vec<BitVec>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace {
            ambient,
            rows: (0..ambient).map(|i| BitVec::unit(ambient, i)).collect(),
            pivots: (0..ambient).collect(),
        }
    }

    pub fn from_generators(ambient: usize, gens: Vec<BitVec>) -> Self {
        let mut m = BitMatrix::from_rows(ambient, gens);
        let pivots = m.rref_in_place();
        let mut rows = m.into_rows();
        rows.truncate(pivots.len());
        Subspace { ambient, rows, pivots }
    }

    #[inline]
    pub fn ambient(&self) -> usize {
        self.ambient
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[BitVec] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Clear every pivot coordinate of `v`. The result differs from `v` by an
    /// element of the subspace and is the same for every `v` in a coset.
    pub fn reduce(&self, v: &BitVec) -> BitVec {
        let mut v = v.clone();
        self.reduce_in_place(&mut v);
        v
    }

    pub fn reduce_in_place(&self, v: &mut BitVec) {
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v.get(p) {
                v.xor_assign_from(row, p);
            }
        }
    }

    /// Coefficients of `v` over the RREF basis, if `v` lies in the subspace.
    pub fn coordinates(&self, v: &BitVec) -> Option<BitVec> {
        let mut c = BitVec::zeros(self.dim());
        let mut w = v.clone();
        for (i, (row, &p)) in self.rows.iter().zip(&self.pivots).enumerate() {
            if w.get(p) {
                w.xor_assign_from(row, p);
                c.set(i, true);
            }
        }
        w.is_zero().then_some(c)
    }

    /// The vector with the given coefficients over the RREF basis.
    pub fn combine(&self, coeffs: &BitVec) -> BitVec {
        let mut v = BitVec::zeros(self.ambient);
        for i in coeffs.iter_ones() {
            v.xor_assign(&self.rows[i]);
        }
        v
    }

    pub fn contains(&self, v: &BitVec) -> bool {
        self.reduce(v).is_zero()
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.ambient == other.ambient && self.rows.iter().all(|r| other.contains(r))
    }

    fn check_ambient(&self, other: &Subspace) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::DimensionMismatch(self.ambient, other.ambient));
        }
        Ok(())
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        let gens = self.rows.iter().chain(&other.rows).cloned().collect();
        Ok(Subspace::from_generators(self.ambient, gens))
    }

    /// Intersection by Zassenhaus: reduce `[a | a]` stacked on `[b | 0]`; the
    /// rows whose left half vanishes span the intersection in the right half.
    pub fn intersection(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        let n = self.ambient;
        let zero = BitVec::zeros(n);
        let gens = self
            .rows
            .iter()
            .map(|r| r.concat(r))
            .chain(other.rows.iter().map(|r| r.concat(&zero)))
            .collect();
        let mut m = BitMatrix::from_rows(2 * n, gens);
        let pivots = m.rref_in_place();
        let inter = m
            .rows()
            .iter()
            .zip(&pivots)
            .filter(|(_, &p)| p >= n)
            .map(|(r, _)| r.slice(n..2 * n))
            .collect();
        Ok(Subspace::from_generators(n, inter))
    }

    /// Image of the subspace under a linear map given by its matrix.
    pub fn image(&self, map: &BitMatrix) -> Subspace {
        let gens = self.rows.iter().map(|r| map.mul_vec(r)).collect();
        Subspace::from_generators(map.nrows(), gens)
    }
}

/// Representatives of a basis of `v / w`, requiring `w ⊆ v`.
///
/// The representatives vanish on every pivot of `w` and are themselves in
/// RREF, so each one is the unique fully reduced member of its coset.
pub fn quotient_reps(v: &Subspace, w: &Subspace) -> Result<Vec<BitVec>> {
    v.check_ambient(w)?;
    if !w.is_subspace_of(v) {
        return Err(Error::NotASubspace);
    }
    let reduced = v.rows().iter().map(|r| w.reduce(r)).collect();
    Ok(Subspace::from_generators(v.ambient(), reduced).rows)
}

/// A quotient `V/W` with canonical coset representatives.
#[derive(Clone, Debug)]
pub struct QuotientSpace {
    numerator: Subspace,
    denominator: Subspace,
    reps: Subspace,
}

impl QuotientSpace {
    pub fn new(numerator: Subspace, denominator: Subspace) -> Result<Self> {
        let reps = quotient_reps(&numerator, &denominator)?;
        let reps = Subspace::from_generators(numerator.ambient(), reps);
        Ok(QuotientSpace { numerator, denominator, reps })
    }

    pub fn dim(&self) -> usize {
        self.reps.dim()
    }

    pub fn numerator(&self) -> &Subspace {
        &self.numerator
    }

    pub fn denominator(&self) -> &Subspace {
        &self.denominator
    }

    /// Canonical representatives, one per basis class.
    pub fn reps(&self) -> &[BitVec] {
        self.reps.rows()
    }

    /// The canonical representative of the coset of `v`.
    pub fn normal_form(&self, v: &BitVec) -> BitVec {
        self.denominator.reduce(v)
    }

    /// Coordinates of the class of `v` over [`Self::reps`]; `None` when `v`
    /// is not in the numerator.
    pub fn coordinates(&self, v: &BitVec) -> Option<BitVec> {
        self.reps.coordinates(&self.denominator.reduce(v))
    }

    pub fn representative(&self, coords: &BitVec) -> BitVec {
        self.reps.combine(coords)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(bits: &[u8]) -> BitVec {
        BitVec::from_bools(&bits.iter().map(|&b| b != 0).collect::<Vec<_>>())
    }

    #[test]
    fn quotient_examples() {
        let full = Subspace::full(2);
        assert_eq!(quotient_reps(&full, &Subspace::zero(2)).unwrap().len(), 2);
        assert!(quotient_reps(&full, &full).unwrap().is_empty());
        let diag = Subspace::from_generators(2, vec![v(&[1, 1])]);
        assert_eq!(quotient_reps(&full, &diag).unwrap().len(), 1);
        assert_eq!(quotient_reps(&diag, &full), Err(Error::NotASubspace));
    }

    #[test]
    fn sum_and_intersection_examples() {
        let a = Subspace::from_generators(2, vec![v(&[1, 0])]);
        let b = Subspace::from_generators(2, vec![v(&[0, 1])]);
        assert_eq!(a.sum(&Subspace::zero(2)).unwrap(), a);
        assert_eq!(a.intersection(&a).unwrap(), a);
        assert_eq!(a.intersection(&b).unwrap().dim(), 0);
        assert!(a.sum(&Subspace::zero(3)).is_err());
    }

    #[test]
    fn quotient_coordinates() {
        let q = QuotientSpace::new(Subspace::full(3), Subspace::from_generators(3, vec![v(&[1, 1, 0])])).unwrap();
        assert_eq!(q.dim(), 2);
        let a = q.coordinates(&v(&[1, 0, 0])).unwrap();
        let b = q.coordinates(&v(&[0, 1, 0])).unwrap();
        assert_eq!(a, b);
    }
}
