//! Sums of monomials with F2 coefficients, and their text form.
//!
//! Grammar (whitespace is insignificant):
//!
//! ```text
//! element  = monomial ("+" monomial)* | "0"
//! monomial = "(" int ("," int)* ")" | "1"
//! ```

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::monomial::{Bidegree, GeneratorIndex, Monomial};

/// An F2-linear combination of monomials, kept sorted with the leading
/// (lex-greatest) monomial first and without repeats.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Element {
    terms: Vec<Monomial>,
}

/// Sort descending and cancel equal pairs.
pub(crate) fn cancel_pairs(mut terms: Vec<Monomial>) -> Vec<Monomial> {
    terms.sort_unstable_by(|a, b| b.cmp(a));
    let mut out: Vec<Monomial> = Vec::with_capacity(terms.len());
    for m in terms {
        if out.last() == Some(&m) {
            out.pop();
        } else {
            out.push(m);
        }
    }
    out
}

impl Element {
    pub fn zero() -> Self {
        Element { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Element::from(Monomial::unit())
    }

    /// Sum of the given monomials; repeated monomials cancel in pairs.
    pub fn from_monomials(terms: impl IntoIterator<Item = Monomial>) -> Self {
        Element { terms: cancel_pairs(terms.into_iter().collect()) }
    }

    /// Wrap an already sorted, duplicate-free descending list.
    pub(crate) fn from_sorted(terms: Vec<Monomial>) -> Self {
        debug_assert!(terms.windows(2).all(|w| w[0] > w[1]));
        Element { terms }
    }

    pub fn monomial(subscripts: &[GeneratorIndex]) -> Self {
        Element::from(Monomial::new(subscripts))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[Monomial] {
        &self.terms
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Monomial> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> Vec<Monomial> {
        self.terms
    }

    /// The lex-greatest monomial.
    pub fn leading_term(&self) -> Option<&Monomial> {
        self.terms.first()
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        self.terms.binary_search_by(|x| m.cmp(x)).is_ok()
    }

    pub fn is_admissible(&self) -> bool {
        self.terms.iter().all(Monomial::is_admissible)
    }

    /// Common bidegree of all terms; `None` for zero or mixed elements.
    pub fn bidegree(&self) -> Option<Bidegree> {
        let b = self.terms.first()?.bidegree();
        self.terms.iter().all(|m| m.bidegree() == b).then_some(b)
    }

    pub fn add(&self, other: &Element) -> Element {
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Less => {
                    out.push(b[j].clone());
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
        Element { terms: out }
    }

    /// Keep the terms satisfying `keep`.
    pub fn filter(&self, keep: impl Fn(&Monomial) -> bool) -> Element {
        Element { terms: self.terms.iter().filter(|m| keep(m)).cloned().collect() }
    }

    /// Digit labels of every term joined by `+`, e.g. `61+43`.
    pub fn label(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.terms.iter().map(Monomial::label).collect::<Vec<_>>().join("+")
    }
}

impl From<Monomial> for Element {
    fn from(m: Monomial) -> Self {
        Element { terms: vec![m] }
    }
}

impl FromIterator<Monomial> for Element {
    fn from_iter<I: IntoIterator<Item = Monomial>>(iter: I) -> Self {
        Element::from_monomials(iter)
    }
}

impl std::ops::Add for &Element {
    type Output = Element;
    fn add(self, rhs: &Element) -> Element {
        Element::add(self, rhs)
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, m) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Element[{self}]")
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse { position: self.pos, message: message.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected '{}'", c as char))
        }
    }

    fn int(&mut self) -> Result<GeneratorIndex> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected a non-negative integer");
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        text.parse().or_else(|_| {
            self.pos = start;
            self.err("subscript out of range")
        })
    }

    fn monomial(&mut self) -> Result<Monomial> {
        match self.peek() {
            Some(b'1') => {
                self.pos += 1;
                Ok(Monomial::unit())
            }
            Some(b'(') => {
                self.pos += 1;
                let mut subs = vec![self.int()?];
                while self.peek() == Some(b',') {
                    self.pos += 1;
                    subs.push(self.int()?);
                }
                self.expect(b')')?;
                Ok(Monomial::new(&subs))
            }
            _ => self.err("expected '(' or '1'"),
        }
    }
}

impl FromStr for Monomial {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut p = Parser { src: s.as_bytes(), pos: 0 };
        let m = p.monomial()?;
        if p.peek().is_some() {
            return p.err("trailing input");
        }
        Ok(m)
    }
}

impl FromStr for Element {
    type Err = Error;

    /// Parses the element grammar; terms are summed mod 2 but not normalized.
    fn from_str(s: &str) -> Result<Self> {
        let mut p = Parser { src: s.as_bytes(), pos: 0 };
        if p.peek() == Some(b'0') {
            p.pos += 1;
            if p.peek().is_some() {
                return p.err("trailing input after 0");
            }
            return Ok(Element::zero());
        }
        let mut terms = vec![p.monomial()?];
        while p.peek() == Some(b'+') {
            p.pos += 1;
            terms.push(p.monomial()?);
        }
        if p.peek().is_some() {
            return p.err("expected '+' or end of input");
        }
        Ok(Element::from_monomials(terms))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        let e: Element = " (6, 1) + (4,3) ".parse().unwrap();
        assert_eq!(e.to_string(), "(6,1) + (4,3)");
        assert_eq!(e.label(), "61+43");
        assert_eq!("1".parse::<Element>().unwrap(), Element::one());
        assert_eq!("0".parse::<Element>().unwrap(), Element::zero());
        assert_eq!("(2)+(2)".parse::<Element>().unwrap(), Element::zero());
    }

    #[test]
    fn parse_errors_carry_position() {
        match "(1,2) + (3".parse::<Element>() {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 10),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!("(1,)".parse::<Element>(), Err(Error::Parse { position: 3, .. })));
        assert!("x".parse::<Element>().is_err());
    }

    #[test]
    fn ordering_is_leading_first() {
        let e = Element::from_monomials([Monomial::new(&[4, 3]), Monomial::new(&[6, 1])]);
        assert_eq!(e.leading_term(), Some(&Monomial::new(&[6, 1])));
        let sum = &e + &Element::monomial(&[6, 1]);
        assert_eq!(sum, Element::monomial(&[4, 3]));
    }
}
