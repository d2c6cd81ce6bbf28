//! Words in the generators λ_n and their bidegrees.

use std::fmt;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

/// Subscript of a generator λ_n.
pub type GeneratorIndex = u16;

/// A (homological, internal) bidegree. λ_n sits in `(1, n+1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Bidegree {
    pub s: u32,
    pub t: u32,
}

impl Bidegree {
    pub const fn new(s: u32, t: u32) -> Self {
        Bidegree { s, t }
    }

    /// `t - s`; negative bidegrees have no monomials.
    pub fn stem(self) -> i64 {
        self.t as i64 - self.s as i64
    }
}

impl fmt::Display for Bidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.s, self.t)
    }
}

/// A word `λ_{n_1} ⋯ λ_{n_s}`; the empty word is the unit.
///
/// The derived `Ord` is lexicographic on subscripts, which is the monomial
/// order: for words of equal length the one with the larger first differing
/// subscript is larger.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(SmallVec<[GeneratorIndex; 12]>);

// `is_unit` is the emptiness test.
#[allow(clippy::len_without_is_empty)]
impl Monomial {
    pub fn unit() -> Self {
        Monomial(SmallVec::new())
    }

    pub fn new(subscripts: &[GeneratorIndex]) -> Self {
        Monomial(SmallVec::from_slice(subscripts))
    }

    pub fn generator(n: GeneratorIndex) -> Self {
        Self::new(&[n])
    }

    pub fn from_iter_subscripts(it: impl IntoIterator<Item = GeneratorIndex>) -> Self {
        Monomial(it.into_iter().collect())
    }

    #[inline]
    pub fn subscripts(&self) -> &[GeneratorIndex] {
        &self.0
    }

    /// Homological degree.
    #[inline]
    pub fn len(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }

    pub fn stem(&self) -> u32 {
        self.0.iter().map(|&n| n as u32).sum()
    }

    pub fn internal_degree(&self) -> u32 {
        self.stem() + self.0.len() as u32
    }

    pub fn bidegree(&self) -> Bidegree {
        Bidegree::new(self.0.len() as u32, self.internal_degree())
    }

    pub fn even_count(&self) -> usize {
        self.0.iter().filter(|&&n| n % 2 == 0).count()
    }

    /// `2·n_r ≥ n_{r+1}` for every adjacent pair.
    pub fn is_admissible(&self) -> bool {
        self.0.windows(2).all(|w| 2 * w[0] as u32 >= w[1] as u32)
    }

    /// Index of the first adjacent pair violating admissibility.
    pub fn first_inadmissible(&self) -> Option<usize> {
        self.0.windows(2).position(|w| 2 * (w[0] as u32) < w[1] as u32)
    }

    /// `self · other`.
    pub fn concat(&self, other: &Monomial) -> Monomial {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Monomial(v)
    }

    pub(crate) fn prepend(g: GeneratorIndex, rest: &[GeneratorIndex]) -> Monomial {
        let mut v = SmallVec::with_capacity(rest.len() + 1);
        v.push(g);
        v.extend_from_slice(rest);
        Monomial(v)
    }

    /// Digit-string label such as `221`, available when every subscript is a
    /// single digit.
    pub fn compact(&self) -> Option<String> {
        if self.is_unit() || self.0.iter().any(|&n| n > 9) {
            return None;
        }
        Some(self.0.iter().map(|n| char::from(b'0' + *n as u8)).collect())
    }

    /// Compact label when possible, otherwise the tuple form.
    pub fn label(&self) -> String {
        self.compact().unwrap_or_else(|| self.to_string())
    }

    /// `θ^k`: each subscript `n ↦ 2^k(n+1) - 1`.
    pub fn theta_pow(&self, k: u32) -> Monomial {
        Monomial(self.0.iter().map(|&n| (((n as u32 + 1) << k) - 1) as GeneratorIndex).collect())
    }

    /// Inverse of [`Self::theta_pow`], if every subscript is `≡ 2^k - 1 (mod 2^k)`.
    pub fn theta_unpow(&self, k: u32) -> Option<Monomial> {
        let m = 1u32 << k;
        self.0
            .iter()
            .map(|&n| {
                let n1 = n as u32 + 1;
                (n1 % m == 0).then(|| (n1 / m - 1) as GeneratorIndex)
            })
            .collect::<Option<SmallVec<_>>>()
            .map(Monomial)
    }

    /// Largest `p` with `self ∈ θ^p(Λ)` as a basis element; the unit has no
    /// finite depth and reports `None`.
    pub fn theta_depth(&self) -> Option<u32> {
        if self.is_unit() {
            return None;
        }
        // n+1 = 2^p · odd for every subscript; depth is the least 2-adic valuation.
        self.0.iter().map(|&n| (n as u32 + 1).trailing_zeros()).min()
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_unit() {
            return write!(f, "1");
        }
        write!(f, "(")?;
        for (i, n) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{n}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "λ{self}")
    }
}

impl Serialize for Monomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.0.iter())
    }
}

impl<'de> Deserialize<'de> for Monomial {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v: Vec<GeneratorIndex> = Vec::deserialize(d)?;
        Ok(Monomial::new(&v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn admissibility() {
        assert!(Monomial::new(&[2, 2, 1]).is_admissible());
        assert!(!Monomial::new(&[0, 1]).is_admissible());
        assert!(Monomial::new(&[1, 2]).is_admissible());
        assert_eq!(Monomial::new(&[1, 2, 5]).first_inadmissible(), Some(1));
    }

    #[test]
    fn degrees() {
        let m = Monomial::new(&[2, 2, 1]);
        assert_eq!(m.bidegree(), Bidegree::new(3, 8));
        assert_eq!(m.stem(), 5);
        assert_eq!(m.even_count(), 2);
        assert_eq!(Monomial::unit().bidegree(), Bidegree::new(0, 0));
    }

    #[test]
    fn theta_subscripts() {
        assert_eq!(Monomial::new(&[0, 0]).theta_pow(1), Monomial::new(&[1, 1]));
        assert_eq!(Monomial::new(&[3, 5]).theta_unpow(1), Some(Monomial::new(&[1, 2])));
        assert_eq!(Monomial::new(&[2, 1]).theta_unpow(1), None);
        assert_eq!(Monomial::new(&[3, 7]).theta_depth(), Some(2));
        assert_eq!(Monomial::new(&[2, 1]).theta_depth(), Some(0));
    }

    #[test]
    fn labels() {
        assert_eq!(Monomial::new(&[6, 1]).label(), "61");
        assert_eq!(Monomial::new(&[14, 6]).label(), "(14,6)");
        assert_eq!(Monomial::unit().to_string(), "1");
    }
}
