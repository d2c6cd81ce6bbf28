//! Matrices of the differential on a single bidegree of Λ, Λ′ or im θ^r.

use serde::{Deserialize, Serialize};

use crate::algebra::Lambda;
use crate::basis::{ComplexKind, SliceId};
use crate::error::{Error, Result};
use crate::linalg::{BitMatrix, SparseMatrix};
use crate::monomial::Monomial;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DifferentialMatrixRequest {
    pub s: u32,
    pub t: u32,
    pub kind: ComplexKind,
}

/// A matrix whose column `j` is the image of the `j`th source basis vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearMap {
    pub matrix: BitMatrix,
    pub source: SliceId,
    pub target: SliceId,
}

impl Lambda {
    /// `d` of an admissible basis monomial of `kind`, as target monomials of
    /// that kind. In Λ′ the all-odd terms are dropped.
    pub fn d_in_kind(&self, kind: ComplexKind, m: &Monomial) -> Result<Vec<Monomial>> {
        let image = self.d_admissible(m)?;
        match kind {
            ComplexKind::Lambda => Ok(image.to_vec()),
            ComplexKind::LambdaPrime => Ok(image.iter().filter(|x| x.even_count() > 0).cloned().collect()),
            ComplexKind::ThetaImage(r) => match image.iter().find(|x| x.theta_unpow(r).is_none()) {
                Some(bad) => Err(Error::NotInBasis { monomial: bad.clone(), what: format!("{kind} image of d{m}") }),
                None => Ok(image.to_vec()),
            },
        }
    }

    /// The differential `(s, t) → (s+1, t)` of `kind`, stored by columns.
    pub fn d_sparse(&self, kind: ComplexKind, s: u32, t: u32) -> Result<SparseMatrix> {
        let source = self.basis(kind, s, t);
        let target = self.basis(kind, s + 1, t);
        let mut out = SparseMatrix::new(target.len());
        for m in source.monomials() {
            let col = self
                .d_in_kind(kind, m)?
                .iter()
                .map(|x| target.index_of(x).map(|i| i as u32).ok_or_else(|| target.missing(x)))
                .collect::<Result<Vec<_>>>()?;
            out.push_column(col);
        }
        Ok(out)
    }

    pub fn d_matrix(&self, req: DifferentialMatrixRequest) -> Result<LinearMap> {
        let DifferentialMatrixRequest { s, t, kind } = req;
        let sparse = self.d_sparse(kind, s, t)?;
        Ok(LinearMap {
            matrix: sparse.to_dense(),
            source: self.basis(kind, s, t).id(),
            target: self.basis(kind, s + 1, t).id(),
        })
    }
}
