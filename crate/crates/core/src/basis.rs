//! Admissible bases of Λ, Λ′ and im θ^r, one bidegree at a time.

use std::fmt;
use std::sync::Arc;

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::algebra::Lambda;
use crate::error::{Error, Result};
use crate::monomial::{Bidegree, GeneratorIndex, Monomial};

/// Which complex a slice belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ComplexKind {
    Lambda,
    /// `Λ/θΛ`, spanned by admissible monomials with an even subscript.
    LambdaPrime,
    /// `im θ^r`, spanned by `θ^r` of admissible monomials.
    ThetaImage(u32),
}

impl ComplexKind {
    /// Does the admissible monomial `m` belong to this kind's basis?
    pub fn contains(self, m: &Monomial) -> bool {
        match self {
            ComplexKind::Lambda => true,
            ComplexKind::LambdaPrime => m.even_count() > 0,
            ComplexKind::ThetaImage(r) => m.theta_unpow(r).is_some(),
        }
    }
}

impl fmt::Display for ComplexKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComplexKind::Lambda => f.write_str("lambda"),
            ComplexKind::LambdaPrime => f.write_str("lambda-prime"),
            ComplexKind::ThetaImage(r) => write!(f, "theta-image-{r}"),
        }
    }
}

impl std::str::FromStr for ComplexKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lambda" => Ok(ComplexKind::Lambda),
            "lambda-prime" | "prime" => Ok(ComplexKind::LambdaPrime),
            _ => s
                .strip_prefix("theta-image-")
                .and_then(|r| r.parse().ok())
                .filter(|&r| r >= 1)
                .map(ComplexKind::ThetaImage)
                .ok_or_else(|| Error::InvalidArgument(format!("unknown complex `{s}`"))),
        }
    }
}

/// All admissible monomials of length `s` and subscript sum `stem`, in
/// descending lexicographic order.
fn admissible_of_stem(s: u32, stem: u32) -> Vec<Monomial> {
    fn rec(prefix: &mut Vec<GeneratorIndex>, left: u32, rem: u64, max_next: u64, out: &mut Vec<Monomial>) {
        if left == 0 {
            if rem == 0 {
                out.push(Monomial::new(prefix));
            }
            return;
        }
        // after choosing a, the remaining left-1 entries sum to at most a(2^left - 2)
        let span = (1u64 << left.min(62)) - 1;
        let lower = rem.div_ceil(span);
        let upper = max_next.min(rem);
        if lower > upper {
            return;
        }
        for a in (lower..=upper).rev() {
            prefix.push(a as GeneratorIndex);
            rec(prefix, left - 1, rem - a, 2 * a, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if s == 0 {
        if stem == 0 {
            out.push(Monomial::unit());
        }
        return out;
    }
    rec(&mut Vec::with_capacity(s as usize), s, stem as u64, stem as u64, &mut out);
    out
}

/// The basis of `kind` in bidegree `(s, t)`, sorted descending.
pub fn enumerate_basis(s: u32, t: u32, kind: ComplexKind) -> Vec<Monomial> {
    if t < s {
        return Vec::new();
    }
    match kind {
        ComplexKind::Lambda => admissible_of_stem(s, t - s),
        ComplexKind::LambdaPrime => {
            let mut v = admissible_of_stem(s, t - s);
            v.retain(|m| m.even_count() > 0);
            v
        }
        ComplexKind::ThetaImage(r) => {
            let q = 1u32 << r;
            if t % q != 0 || t / q < s {
                return Vec::new();
            }
            // θ^r is monotone on subscripts, so the order is preserved
            admissible_of_stem(s, t / q - s).iter().map(|m| m.theta_pow(r)).collect()
        }
    }
}

/// Identifies one basis slice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SliceId {
    pub kind: ComplexKind,
    pub bidegree: Bidegree,
}

/// An ordered basis together with its inverse index.
#[derive(Debug)]
pub struct BasisSlice {
    id: SliceId,
    monomials: Vec<Monomial>,
    index: FxHashMap<Monomial, u32>,
}

impl BasisSlice {
    pub fn new(kind: ComplexKind, s: u32, t: u32) -> Self {
        let monomials = enumerate_basis(s, t, kind);
        let index = monomials.iter().enumerate().map(|(i, m)| (m.clone(), i as u32)).collect();
        BasisSlice { id: SliceId { kind, bidegree: Bidegree::new(s, t) }, monomials, index }
    }

    pub fn id(&self) -> SliceId {
        self.id
    }

    pub fn kind(&self) -> ComplexKind {
        self.id.kind
    }

    pub fn bidegree(&self) -> Bidegree {
        self.id.bidegree
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn get(&self, i: usize) -> &Monomial {
        &self.monomials[i]
    }

    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).map(|&i| i as usize)
    }

    /// Coordinates of a canonical element supported on this basis.
    pub fn vector(&self, e: &crate::Element) -> Result<crate::BitVec> {
        let mut v = crate::BitVec::zeros(self.len());
        for m in e.iter() {
            let i = self.index_of(m).ok_or_else(|| self.missing(m))?;
            v.flip(i);
        }
        Ok(v)
    }

    pub fn element(&self, v: &crate::BitVec) -> crate::Element {
        crate::Element::from_sorted(v.iter_ones().map(|i| self.monomials[i].clone()).collect())
    }

    pub(crate) fn missing(&self, m: &Monomial) -> Error {
        Error::NotInBasis { monomial: m.clone(), what: format!("{} basis in {}", self.kind(), self.bidegree()) }
    }
}

impl Lambda {
    /// The cached basis slice of `kind` in bidegree `(s, t)`.
    pub fn basis(&self, kind: ComplexKind, s: u32, t: u32) -> Arc<BasisSlice> {
        let key = (kind, s, t);
        if let Some(b) = self.caches.bases.read().get(&key) {
            return b.clone();
        }
        let b = Arc::new(BasisSlice::new(kind, s, t));
        self.caches.bases.write().entry(key).or_insert(b).clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(s: u32, t: u32) -> Vec<Monomial> {
        let stem = t.saturating_sub(s);
        let mut out = Vec::new();
        let mut cur = vec![0u16; s as usize];
        loop {
            let m = Monomial::new(&cur);
            if m.bidegree() == Bidegree::new(s, t) && m.is_admissible() {
                out.push(m);
            }
            let mut k = 0;
            loop {
                if k == cur.len() {
                    out.sort_by(|a, b| b.cmp(a));
                    return out;
                }
                cur[k] += 1;
                if cur[k] as u32 <= stem {
                    break;
                }
                cur[k] = 0;
                k += 1;
            }
        }
    }

    #[test]
    fn examples() {
        assert_eq!(enumerate_basis(1, 5, ComplexKind::Lambda), vec![Monomial::new(&[4])]);
        assert_eq!(
            enumerate_basis(2, 4, ComplexKind::Lambda),
            vec![Monomial::new(&[2, 0]), Monomial::new(&[1, 1])]
        );
        assert_eq!(enumerate_basis(2, 4, ComplexKind::LambdaPrime), vec![Monomial::new(&[2, 0])]);
        assert_eq!(enumerate_basis(0, 0, ComplexKind::Lambda), vec![Monomial::unit()]);
        assert!(enumerate_basis(3, 2, ComplexKind::Lambda).is_empty());
    }

    #[test]
    fn matches_brute_force() {
        for s in 1..=4 {
            for t in s..=s + 9 {
                assert_eq!(enumerate_basis(s, t, ComplexKind::Lambda), brute(s, t), "({s},{t})");
            }
        }
    }

    #[test]
    fn known_sizes() {
        assert_eq!(enumerate_basis(3, 82, ComplexKind::Lambda).len(), 1234);
        assert_eq!(enumerate_basis(4, 60, ComplexKind::Lambda).len(), 6611);
    }

    #[test]
    fn kind_round_trip() {
        for k in [ComplexKind::Lambda, ComplexKind::LambdaPrime, ComplexKind::ThetaImage(3)] {
            assert_eq!(k.to_string().parse::<ComplexKind>().unwrap(), k);
        }
    }
}
