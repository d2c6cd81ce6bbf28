//! Cohomology of Λ, Λ′ and im θ^r one bidegree at a time, the map Sq⁰
//! induced by θ, and the splitting between Λ and Λ′.
//!
//! Cocycle spaces come from a sparse column reduction, so their basis is in
//! echelon form keyed by leading term. Class representatives are the reduced
//! echelon basis of cocycles with zeros on the pivots of the coboundary
//! space; every such vector is the representative of its class with the
//! smallest possible leading term.

use std::sync::Arc;

use parking_lot::RwLock;
use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::algebra::Lambda;
use crate::basis::{BasisSlice, ComplexKind, SliceId};
use crate::differential::LinearMap;
use crate::element::Element;
use crate::error::{Error, Result};
use crate::linalg::{kernel_basis, solve, BitMatrix, BitVec, Echelon, SparseMatrix, Subspace};
use crate::monomial::{Bidegree, Monomial};

type Key = (ComplexKind, u32, u32);

#[derive(Default)]
pub(crate) struct Caches {
    pub(crate) bases: RwLock<FxHashMap<Key, Arc<BasisSlice>>>,
    coboundaries: RwLock<FxHashMap<Key, Arc<Subspace>>>,
    presentations: RwLock<FxHashMap<Key, Arc<CohomologyPresentation>>>,
}

impl Caches {
    pub(crate) fn clear(&self) {
        self.bases.write().clear();
        self.coboundaries.write().clear();
        self.presentations.write().clear();
    }
}

/// Cocycles, coboundaries and canonical class representatives in one
/// bidegree of one complex.
#[derive(Debug)]
pub struct CohomologyPresentation {
    basis: Arc<BasisSlice>,
    d: SparseMatrix,
    cocycles: Echelon,
    coboundaries: Arc<Subspace>,
    reps: Subspace,
    rep_elements: Vec<Element>,
}

impl CohomologyPresentation {
    pub fn id(&self) -> SliceId {
        self.basis.id()
    }

    pub fn kind(&self) -> ComplexKind {
        self.basis.kind()
    }

    pub fn bidegree(&self) -> Bidegree {
        self.basis.bidegree()
    }

    pub fn basis(&self) -> &Arc<BasisSlice> {
        &self.basis
    }

    /// The outgoing differential as a sparse matrix.
    pub fn differential(&self) -> &SparseMatrix {
        &self.d
    }

    pub fn cocycles(&self) -> &Echelon {
        &self.cocycles
    }

    pub fn coboundaries(&self) -> &Subspace {
        &self.coboundaries
    }

    pub fn dim(&self) -> usize {
        self.reps.dim()
    }

    /// Representative vectors, ordered by descending leading term.
    pub fn rep_vectors(&self) -> &[BitVec] {
        self.reps.rows()
    }

    pub fn reps(&self) -> &[Element] {
        &self.rep_elements
    }

    /// Compact labels of the leading terms of the representatives.
    pub fn labels(&self) -> Vec<String> {
        self.rep_elements.iter().map(|e| e.leading_term().map(Monomial::label).unwrap_or_default()).collect()
    }

    pub fn is_cocycle(&self, v: &BitVec) -> bool {
        self.d.apply(v).is_zero()
    }

    /// Coordinates over the representatives of a vector known to be a cocycle.
    pub fn coordinates(&self, v: &BitVec) -> BitVec {
        let mut v = v.clone();
        self.coboundaries.reduce_in_place(&mut v);
        let c = BitVec::from_indices(self.dim(), self.reps.pivots().iter().enumerate().filter(|(_, &p)| v.get(p)).map(|(i, _)| i));
        debug_assert_eq!(self.reps.combine(&c), v);
        c
    }

    /// The canonical cocycle vector of the class with these coordinates.
    pub fn representative_vector(&self, coords: &BitVec) -> BitVec {
        self.reps.combine(coords)
    }

    pub fn representative(&self, coords: &BitVec) -> Element {
        self.basis.element(&self.representative_vector(coords))
    }

    /// A representative of the class whose leading term is exactly `m`, if
    /// the class has one.
    pub fn representative_with_leading_term(&self, coords: &BitVec, m: &Monomial) -> Result<Option<Element>> {
        let Some(idx) = self.basis.index_of(m) else {
            return Err(Error::NotInBasis { monomial: m.clone(), what: self.kind().to_string() });
        };
        let x = self.representative_vector(coords);
        let b = self.coboundaries.rows();
        // Unknown coefficients over the coboundary basis: coordinates before
        // `idx` must cancel and coordinate `idx` must become 1.
        let rows = (0..=idx).map(|k| BitVec::from_indices(b.len(), (0..b.len()).filter(|&i| b[i].get(k)))).collect();
        let mut rhs = BitVec::from_indices(idx + 1, (0..idx).filter(|&k| x.get(k)));
        rhs.set(idx, !x.get(idx));
        let Some(c) = solve(&BitMatrix::from_rows(b.len(), rows), &rhs) else { return Ok(None) };
        let mut v = x;
        for i in c.iter_ones() {
            v.xor_assign(&b[i]);
        }
        Ok(Some(self.basis.element(&v)))
    }

    /// Coordinates of a homogeneous canonical element in this complex.
    pub fn vector_of(&self, e: &Element) -> Result<BitVec> {
        match self.kind() {
            ComplexKind::LambdaPrime => self.basis.vector(&project_to_prime(e)),
            _ => self.basis.vector(e),
        }
    }
}

/// A cohomology class, as coordinates over a presentation's representatives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyClass {
    pub presentation: SliceId,
    pub coords: BitVec,
}

impl CohomologyClass {
    pub fn is_zero(&self) -> bool {
        self.coords.is_zero()
    }
}

/// The kernel of Sq⁰ on one bidegree of H(Λ).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Sq0Kernel {
    pub bidegree: Bidegree,
    pub source_dim: usize,
    pub target_dim: usize,
    pub rank: usize,
    pub kernel: Vec<Element>,
}

/// Drop the all-odd monomials, which span θΛ.
pub fn project_to_prime(e: &Element) -> Element {
    e.filter(|m| m.even_count() > 0)
}

/// View an element of Λ′ in Λ through the splitting.
pub fn lift_from_prime(e: &Element) -> Result<Element> {
    match e.iter().find(|m| m.even_count() == 0) {
        Some(m) => Err(Error::NotLiftable(m.clone())),
        None => Ok(e.clone()),
    }
}

impl Lambda {
    /// The coboundary space `d(C^{s-1,t})` inside `C^{s,t}`, cached.
    pub fn coboundaries(&self, kind: ComplexKind, s: u32, t: u32) -> Result<Arc<Subspace>> {
        let key = (kind, s, t);
        if let Some(b) = self.caches.coboundaries.read().get(&key) {
            return Ok(b.clone());
        }
        let n = self.basis(kind, s, t).len();
        let b = if s == 0 {
            Subspace::zero(n)
        } else {
            let d = self.d_sparse(kind, s - 1, t)?;
            Subspace::from_generators(n, (0..d.ncols()).map(|j| d.column_dense(j)).collect())
        };
        let b = Arc::new(b);
        Ok(self.caches.coboundaries.write().entry(key).or_insert(b).clone())
    }

    /// `H^{s,t}` of `kind`, cached.
    pub fn cohomology(&self, kind: ComplexKind, s: u32, t: u32) -> Result<Arc<CohomologyPresentation>> {
        let key = (kind, s, t);
        if let Some(p) = self.caches.presentations.read().get(&key) {
            return Ok(p.clone());
        }
        let basis = self.basis(kind, s, t);
        let d = self.d_sparse(kind, s, t)?;
        let cocycles = d.kernel_echelon();
        let coboundaries = self.coboundaries(kind, s, t)?;
        let mut quotient = Echelon::new(basis.len());
        for z in cocycles.rows() {
            if quotient.dim() + coboundaries.dim() == cocycles.dim() {
                break;
            }
            quotient.insert(coboundaries.reduce(z));
        }
        if quotient.dim() + coboundaries.dim() != cocycles.dim() {
            return Err(Error::NotASubspace);
        }
        let reps = quotient.to_subspace();
        let rep_elements = reps.rows().iter().map(|v| basis.element(v)).collect();
        let p = Arc::new(CohomologyPresentation { basis, d, cocycles, coboundaries, reps, rep_elements });
        Ok(self.caches.presentations.write().entry(key).or_insert(p).clone())
    }

    /// The class of a homogeneous element in `p`.
    pub fn class_of(&self, e: &Element, p: &CohomologyPresentation) -> Result<CohomologyClass> {
        let e = self.normalize(e)?;
        if let Some(b) = e.bidegree() {
            if b != p.bidegree() {
                return Err(Error::WrongBidegree { s: b.s, t: b.t });
            }
        }
        let v = p.vector_of(&e)?;
        if !p.is_cocycle(&v) {
            return Err(Error::NotACocycle(e.to_string()));
        }
        Ok(CohomologyClass { presentation: p.id(), coords: p.coordinates(&v) })
    }

    /// The representative of `c` with the smallest leading term.
    pub fn min_leading_representative(&self, c: &CohomologyClass) -> Result<Element> {
        let b = c.presentation.bidegree;
        let p = self.cohomology(c.presentation.kind, b.s, b.t)?;
        Ok(p.representative(&c.coords))
    }

    /// Is the canonical element `e` a coboundary in `kind`?
    pub fn is_coboundary(&self, kind: ComplexKind, e: &Element) -> Result<bool> {
        let Some(b) = e.bidegree() else { return Ok(true) };
        let basis = self.basis(kind, b.s, b.t);
        let e = if kind == ComplexKind::LambdaPrime { project_to_prime(e) } else { e.clone() };
        Ok(self.coboundaries(kind, b.s, b.t)?.contains(&basis.vector(&e)?))
    }

    /// Some `w` with `d(w) = e` in `kind`, if one exists.
    pub fn coboundary_preimage(&self, kind: ComplexKind, e: &Element) -> Result<Option<Element>> {
        let Some(b) = e.bidegree() else { return Ok(Some(Element::zero())) };
        if b.s == 0 {
            return Ok(None);
        }
        let target = self.basis(kind, b.s, b.t);
        let e = if kind == ComplexKind::LambdaPrime { project_to_prime(e) } else { e.clone() };
        let m = self.d_sparse(kind, b.s - 1, b.t)?.to_dense();
        let source = self.basis(kind, b.s - 1, b.t);
        Ok(solve(&m, &target.vector(&e)?).map(|w| source.element(&w)))
    }

    /// Sq⁰ = θ_* from `H^{s,t}(Λ)` to `H^{s,2t}(Λ)`.
    pub fn sq0_map(&self, s: u32, t: u32) -> Result<LinearMap> {
        let src = self.cohomology(ComplexKind::Lambda, s, t)?;
        let dst = self.cohomology(ComplexKind::Lambda, s, 2 * t)?;
        let cols = src
            .reps()
            .iter()
            .map(|z| Ok(dst.coordinates(&dst.basis().vector(&self.theta_pow(z, 1))?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(LinearMap { matrix: BitMatrix::from_columns(dst.dim(), &cols), source: src.id(), target: dst.id() })
    }

    /// The kernel of Sq⁰ on `H^{s,t}(Λ)` with canonical representatives.
    pub fn sq0_kernel(&self, s: u32, t: u32) -> Result<Sq0Kernel> {
        let map = self.sq0_map(s, t)?;
        let src = self.cohomology(ComplexKind::Lambda, s, t)?;
        let ker = kernel_basis(&map.matrix);
        Ok(Sq0Kernel {
            bidegree: Bidegree::new(s, t),
            source_dim: map.matrix.ncols(),
            target_dim: map.matrix.nrows(),
            rank: map.matrix.rank(),
            kernel: ker.rows().iter().map(|c| src.representative(c)).collect(),
        })
    }

    /// A homologous element of Λ′ whose monomials all end in an odd subscript.
    pub fn odd_ending_reduce(&self, e: &Element) -> Result<Element> {
        let e = project_to_prime(&self.normalize(e)?);
        let Some(b) = e.bidegree() else { return Ok(e) };
        let odd_ending = |m: &Monomial| m.subscripts().last().is_some_and(|n| n % 2 == 1);
        if e.iter().all(odd_ending) {
            return Ok(e);
        }
        let kind = ComplexKind::LambdaPrime;
        let target = self.basis(kind, b.s, b.t);
        let even_rows: Vec<usize> = (0..target.len()).filter(|&i| !odd_ending(target.get(i))).collect();
        let v = target.vector(&e)?;
        let (m, source) = if b.s == 0 {
            (BitMatrix::zeros(even_rows.len(), 0), None)
        } else {
            let d = self.d_sparse(kind, b.s - 1, b.t)?;
            let rows: Vec<BitVec> = {
                let dense = d.to_dense();
                even_rows.iter().map(|&i| dense.row(i).clone()).collect()
            };
            (BitMatrix::from_rows(d.ncols(), rows), Some((d, self.basis(kind, b.s - 1, b.t))))
        };
        let rhs = BitVec::from_indices(even_rows.len(), even_rows.iter().enumerate().filter(|(_, &i)| v.get(i)).map(|(k, _)| k));
        let w = solve(&m, &rhs).ok_or_else(|| Error::Infeasible(format!("no odd-ending representative for {e}")))?;
        let Some((d, _)) = source else { return Ok(e) };
        let mut out = v;
        out.xor_assign(&d.apply(&w));
        Ok(target.element(&out))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(s: &str) -> Element {
        s.parse().unwrap()
    }

    #[test]
    fn prescribed_leading_terms() {
        let lam = Lambda::new();
        let p = lam.cohomology(ComplexKind::LambdaPrime, 3, 11).unwrap();
        assert_eq!(p.labels(), vec!["233"]);
        let one = BitVec::from_indices(1, [0]);
        let r = p.representative_with_leading_term(&one, &Monomial::new(&[4, 3, 1])).unwrap().unwrap();
        assert_eq!(r.leading_term(), Some(&Monomial::new(&[4, 3, 1])));
        assert_eq!(lam.class_of(&r, &p).unwrap().coords, one);
        let p = lam.cohomology(ComplexKind::LambdaPrime, 2, 5).unwrap();
        assert!(p.representative_with_leading_term(&BitVec::from_indices(1, [0]), &Monomial::new(&[3, 0])).unwrap().is_some());
    }

    #[test]
    fn cohomology_examples() {
        let lam = Lambda::new();
        let p = lam.cohomology(ComplexKind::Lambda, 1, 1).unwrap();
        assert_eq!(p.dim(), 1);
        assert_eq!(p.reps(), &[el("(0)")]);
        let p = lam.cohomology(ComplexKind::LambdaPrime, 2, 5).unwrap();
        assert_eq!(p.reps(), &[el("(2,1)")]);
        assert_eq!(lam.cohomology(ComplexKind::LambdaPrime, 3, 12).unwrap().dim(), 0);
        let p = lam.cohomology(ComplexKind::LambdaPrime, 2, 9).unwrap();
        assert_eq!(p.reps(), &[el("(6,1)+(4,3)")]);
    }

    #[test]
    fn class_of_examples() {
        let lam = Lambda::new();
        let p = lam.cohomology(ComplexKind::Lambda, 1, 1).unwrap();
        assert_eq!(lam.class_of(&el("(0)"), &p).unwrap().coords, BitVec::unit(1, 0));
        let p = lam.cohomology(ComplexKind::Lambda, 2, 3).unwrap();
        assert!(lam.class_of(&el("(1,0)"), &p).unwrap().is_zero());
        let p = lam.cohomology(ComplexKind::Lambda, 1, 3).unwrap();
        assert!(matches!(lam.class_of(&el("(2)"), &p), Err(Error::NotACocycle(_))));
    }

    #[test]
    fn min_leading() {
        let lam = Lambda::new();
        let p = lam.cohomology(ComplexKind::LambdaPrime, 2, 5).unwrap();
        let c = lam.class_of(&el("(0,3)"), &p).unwrap();
        assert_eq!(lam.min_leading_representative(&c).unwrap(), el("(2,1)"));
        let zero = CohomologyClass { presentation: p.id(), coords: BitVec::zeros(1) };
        assert!(lam.min_leading_representative(&zero).unwrap().is_zero());
    }

    #[test]
    fn sq0_examples() {
        let lam = Lambda::new();
        let m = lam.sq0_map(1, 1).unwrap();
        assert_eq!(m.matrix.rank(), 1);
        let k = lam.sq0_kernel(4, 4).unwrap();
        assert_eq!(k.kernel, vec![el("(0,0,0,0)")]);
        assert!(lam.sq0_kernel(4, 5).unwrap().kernel.is_empty());
    }

    #[test]
    fn splitting() {
        assert!(project_to_prime(&el("(1,1,1,1)")).is_zero());
        assert_eq!(project_to_prime(&el("(5,1,1)+(4,2,1)+(2,2,3)")), el("(4,2,1)+(2,2,3)"));
        assert_eq!(lift_from_prime(&el("(2,2,1)")).unwrap(), el("(2,2,1)"));
        assert!(lift_from_prime(&el("(1,1)")).is_err());
    }

    #[test]
    fn odd_ending() {
        let lam = Lambda::new();
        assert_eq!(lam.odd_ending_reduce(&el("(2,1)")).unwrap(), el("(2,1)"));
        let e = el("(4,2,1)+(2,2,3)");
        assert_eq!(lam.odd_ending_reduce(&e).unwrap(), e);
    }
}
