//! The colimit θ⁻¹Λ of `Λ →θ Λ →θ ⋯`, with generators λ_n for dyadic
//! rationals `n > -1`.
//!
//! A dyadic monomial of level `N` scales by θ^N to an ordinary monomial of Λ.
//! Normal forms, products and differentials are computed that way and scaled
//! back. The direct dyadic formulas live alongside and serve as cross-checks.
//!
//! Admissibility of `λ_i λ_j` is the strict inequality `2i + 1 > j`. On
//! integer subscripts this is the usual `2i ≥ j`; it is also exactly the
//! condition that the scaled integer word be admissible, which the weak
//! inequality is not (`λ_0 λ_{1/2}` scales to the admissible `λ_1 λ_2`).

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::algebra::{binom_mod2, Lambda};
use crate::basis::ComplexKind;
use crate::element::Element;
use crate::error::{Error, Result};
use crate::linalg::BitMatrix;
use crate::monomial::{GeneratorIndex, Monomial};

/// An element `a/2^k` of Z[1/2], with `k = 0` or `a` odd.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(into = "(i64, u32)", try_from = "(i64, u32)")]
pub struct DyadicRational {
    num: i64,
    exp: u32,
}

impl DyadicRational {
    pub const ZERO: DyadicRational = DyadicRational { num: 0, exp: 0 };

    pub fn new(num: i64, exp: u32) -> Self {
        let (mut num, mut exp) = (num, exp);
        while exp > 0 && num % 2 == 0 {
            num /= 2;
            exp -= 1;
        }
        if num == 0 {
            exp = 0;
        }
        DyadicRational { num, exp }
    }

    pub const fn integer(n: i64) -> Self {
        DyadicRational { num: n, exp: 0 }
    }

    pub fn numerator(self) -> i64 {
        self.num
    }

    /// The `k` in `a/2^k`; also the least level at which the value is integral.
    pub fn exponent(self) -> u32 {
        self.exp
    }

    pub fn is_integer(self) -> bool {
        self.exp == 0
    }

    /// `Some(n)` when integral.
    pub fn as_integer(self) -> Option<i64> {
        self.is_integer().then_some(self.num)
    }

    /// `2^k · self` as an integer, or `None` if that is not integral.
    pub fn scaled_numerator(self, k: u32) -> Option<i64> {
        if k < self.exp {
            return None;
        }
        self.num.checked_mul(1i64.checked_shl(k - self.exp)?)
    }

    /// `2^k · self` for any integer `k`.
    pub fn mul_pow2(self, k: i32) -> Self {
        if k >= 0 {
            let k = k as u32;
            let drop = k.min(self.exp);
            DyadicRational::new(self.num << (k - drop), self.exp - drop)
        } else {
            DyadicRational::new(self.num, self.exp + k.unsigned_abs())
        }
    }

    /// The subscript action of θ^k: `n ↦ 2^k (n+1) - 1`.
    pub fn theta(self, k: i32) -> Self {
        (self + Self::integer(1)).mul_pow2(k) - Self::integer(1)
    }

    fn common(self, other: Self) -> (i128, i128, u32) {
        let e = self.exp.max(other.exp);
        ((self.num as i128) << (e - self.exp), (other.num as i128) << (e - other.exp), e)
    }

    fn from_i128(num: i128, exp: u32) -> Self {
        let mut r = (num, exp);
        while r.1 > 0 && r.0 % 2 == 0 {
            r = (r.0 / 2, r.1 - 1);
        }
        DyadicRational::new(i64::try_from(r.0).expect("dyadic numerator overflow"), r.1)
    }
}

impl std::ops::Add for DyadicRational {
    type Output = DyadicRational;
    fn add(self, rhs: Self) -> Self {
        let (a, b, e) = self.common(rhs);
        Self::from_i128(a + b, e)
    }
}

impl std::ops::Sub for DyadicRational {
    type Output = DyadicRational;
    fn sub(self, rhs: Self) -> Self {
        let (a, b, e) = self.common(rhs);
        Self::from_i128(a - b, e)
    }
}

impl Ord for DyadicRational {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b, _) = self.common(*other);
        a.cmp(&b)
    }
}

impl PartialOrd for DyadicRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<i64> for DyadicRational {
    fn from(n: i64) -> Self {
        Self::integer(n)
    }
}

impl From<DyadicRational> for (i64, u32) {
    fn from(d: DyadicRational) -> Self {
        (d.num, d.exp)
    }
}

impl TryFrom<(i64, u32)> for DyadicRational {
    type Error = String;
    fn try_from((num, exp): (i64, u32)) -> std::result::Result<Self, String> {
        if exp > 62 {
            return Err(format!("exponent {exp} too large"));
        }
        Ok(DyadicRational::new(num, exp))
    }
}

impl fmt::Display for DyadicRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp == 0 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, 1u64 << self.exp)
        }
    }
}

impl fmt::Debug for DyadicRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for DyadicRational {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let mut p = Parser::new(s);
        let d = p.dyadic()?;
        p.finish()?;
        Ok(d)
    }
}

/// `N(j, n)`: the least `N ≥ 0` with `2^N j` and `2^N n` both integral.
pub fn n_of(j: DyadicRational, n: DyadicRational) -> u32 {
    j.exponent().max(n.exponent())
}

/// `C(a, b) mod 2` for dyadic arguments, via `C(a,b) ≡ C(2a,2b)`.
pub fn binom_mod2_dyadic(a: DyadicRational, b: DyadicRational) -> bool {
    let n = n_of(a, b);
    binom_mod2_at(a, b, n)
}

/// The same binomial evaluated at an explicit level `n ≥ N(a,b)`.
pub fn binom_mod2_at(a: DyadicRational, b: DyadicRational, n: u32) -> bool {
    match (a.scaled_numerator(n), b.scaled_numerator(n)) {
        (Some(a), Some(b)) => binom_mod2(a, b),
        _ => panic!("level {n} does not clear the denominators of {a} and {b}"),
    }
}

/// A word in the generators λ_n of θ⁻¹Λ, each `n > -1`.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct DyadicMonomial(Vec<DyadicRational>);

#[allow(clippy::len_without_is_empty)]
impl DyadicMonomial {
    pub fn unit() -> Self {
        DyadicMonomial(Vec::new())
    }

    pub fn new(subscripts: Vec<DyadicRational>) -> Result<Self> {
        if let Some(bad) = subscripts.iter().find(|n| **n <= DyadicRational::integer(-1)) {
            return Err(Error::InvalidArgument(format!("generator subscript {bad} is not > -1")));
        }
        Ok(DyadicMonomial(subscripts))
    }

    pub fn from_integer(m: &Monomial) -> Self {
        DyadicMonomial(m.subscripts().iter().map(|&n| DyadicRational::integer(n as i64)).collect())
    }

    pub fn subscripts(&self) -> &[DyadicRational] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }

    /// Least `N` with every `2^N (n_i + 1)` integral.
    pub fn level(&self) -> u32 {
        self.0.iter().map(|n| n.exponent()).max().unwrap_or(0)
    }

    /// `Σ (n_i + 1)`.
    pub fn internal_degree(&self) -> DyadicRational {
        self.0.iter().fold(DyadicRational::ZERO, |acc, &n| acc + n + DyadicRational::integer(1))
    }

    pub fn scale(&self, k: i32) -> DyadicMonomial {
        DyadicMonomial(self.0.iter().map(|n| n.theta(k)).collect())
    }

    /// The integer monomial `θ^k(self)`; needs `k ≥ level`.
    pub fn to_integer(&self, k: u32) -> Result<Monomial> {
        let subs = self
            .0
            .iter()
            .map(|n| {
                n.theta(k as i32)
                    .as_integer()
                    .and_then(|v| GeneratorIndex::try_from(v).ok())
                    .ok_or_else(|| Error::InvalidArgument(format!("θ^{k} of λ_{n} is not a generator of Λ")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Monomial::new(&subs))
    }

    pub fn first_inadmissible(&self) -> Option<usize> {
        self.0.windows(2).position(|w| !pair_admissible(w[0], w[1]))
    }

    fn concat(&self, other: &DyadicMonomial) -> DyadicMonomial {
        DyadicMonomial(self.0.iter().chain(&other.0).copied().collect())
    }
}

fn pair_admissible(i: DyadicRational, j: DyadicRational) -> bool {
    i + i + DyadicRational::integer(1) > j
}

/// `2 i_r + 1 > i_{r+1}` for every adjacent pair.
pub fn is_admissible_dyadic(m: &DyadicMonomial) -> bool {
    m.first_inadmissible().is_none()
}

impl Ord for DyadicMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.cmp(&other.0)
    }
}

impl PartialOrd for DyadicMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for DyadicMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_unit() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.0.iter().map(|n| n.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl fmt::Debug for DyadicMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "λ{self}")
    }
}

/// A finite sum of dyadic monomials, sorted descending, each appearing once.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct DyadicElement {
    terms: Vec<DyadicMonomial>,
}

impl DyadicElement {
    pub fn zero() -> Self {
        DyadicElement::default()
    }

    pub fn from_monomials(terms: impl IntoIterator<Item = DyadicMonomial>) -> Self {
        let mut terms: Vec<_> = terms.into_iter().collect();
        terms.sort_unstable_by(|a, b| b.cmp(a));
        let mut out: Vec<DyadicMonomial> = Vec::with_capacity(terms.len());
        for m in terms {
            if out.last() == Some(&m) {
                out.pop();
            } else {
                out.push(m);
            }
        }
        DyadicElement { terms: out }
    }

    pub fn monomial(subscripts: &[DyadicRational]) -> Result<Self> {
        Ok(DyadicMonomial::new(subscripts.to_vec())?.into())
    }

    pub fn from_integer(e: &Element) -> Self {
        Self::from_monomials(e.iter().map(DyadicMonomial::from_integer))
    }

    pub fn terms(&self) -> &[DyadicMonomial] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn level(&self) -> u32 {
        self.terms.iter().map(DyadicMonomial::level).max().unwrap_or(0)
    }

    pub fn add(&self, other: &DyadicElement) -> DyadicElement {
        Self::from_monomials(self.terms.iter().chain(&other.terms).cloned())
    }

    pub fn scale(&self, k: i32) -> DyadicElement {
        // θ^k is strictly monotone on subscripts, so the order is preserved.
        DyadicElement { terms: self.terms.iter().map(|m| m.scale(k)).collect() }
    }

    /// The integer element `θ^k(self)`; needs `k ≥ level`.
    pub fn to_integer(&self, k: u32) -> Result<Element> {
        Ok(Element::from_monomials(self.terms.iter().map(|m| m.to_integer(k)).collect::<Result<Vec<_>>>()?))
    }

    /// `θ^{-k}` of an integer element.
    pub fn from_scaled(e: &Element, k: u32) -> Self {
        Self::from_integer(e).scale(-(k as i32))
    }

    pub fn is_admissible(&self) -> bool {
        self.terms.iter().all(is_admissible_dyadic)
    }
}

impl From<DyadicMonomial> for DyadicElement {
    fn from(m: DyadicMonomial) -> Self {
        DyadicElement { terms: vec![m] }
    }
}

impl fmt::Display for DyadicElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|m| m.to_string()).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for DyadicElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DyadicElement[{self}]")
    }
}

impl FromStr for DyadicElement {
    type Err = Error;

    /// Parses `"(0,1/2) + (-1/4,3/4)"`; `"0"` is zero and `"1"` the unit.
    fn from_str(s: &str) -> Result<Self> {
        let mut p = Parser::new(s);
        let e = p.element()?;
        p.finish()?;
        Ok(e)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(s: &'a str) -> Self {
        Parser { src: s.as_bytes(), pos: 0 }
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse { position: self.pos, message: message.into() })
    }

    fn peek(&mut self) -> Option<u8> {
        while self.src.get(self.pos).is_some_and(u8::is_ascii_whitespace) {
            self.pos += 1;
        }
        self.src.get(self.pos).copied()
    }

    fn finish(&mut self) -> Result<()> {
        match self.peek() {
            None => Ok(()),
            Some(_) => self.err("trailing input"),
        }
    }

    fn digits(&mut self) -> Result<i64> {
        self.peek();
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected digits");
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        text.parse().or_else(|_| {
            self.pos = start;
            self.err("number out of range")
        })
    }

    fn dyadic(&mut self) -> Result<DyadicRational> {
        let neg = self.peek() == Some(b'-');
        if neg {
            self.pos += 1;
        }
        let a = self.digits()?;
        let a = if neg { -a } else { a };
        if self.peek() != Some(b'/') {
            return Ok(DyadicRational::integer(a));
        }
        self.pos += 1;
        let at = self.pos;
        let b = self.digits()?;
        if b <= 0 || b & (b - 1) != 0 || b > 1 << 62 {
            self.pos = at;
            return self.err("denominator must be a power of two");
        }
        Ok(DyadicRational::new(a, b.trailing_zeros()))
    }

    fn monomial(&mut self) -> Result<DyadicMonomial> {
        match self.peek() {
            Some(b'1') => {
                self.pos += 1;
                Ok(DyadicMonomial::unit())
            }
            Some(b'(') => {
                self.pos += 1;
                let at = self.pos;
                let mut subs = vec![self.dyadic()?];
                while self.peek() == Some(b',') {
                    self.pos += 1;
                    subs.push(self.dyadic()?);
                }
                if self.peek() != Some(b')') {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                DyadicMonomial::new(subs).map_err(|e| Error::Parse { position: at, message: e.to_string() })
            }
            _ => self.err("expected '(' or '1'"),
        }
    }

    fn element(&mut self) -> Result<DyadicElement> {
        if self.peek() == Some(b'0') {
            self.pos += 1;
            return Ok(DyadicElement::zero());
        }
        let mut terms = vec![self.monomial()?];
        while self.peek() == Some(b'+') {
            self.pos += 1;
            terms.push(self.monomial()?);
        }
        Ok(DyadicElement::from_monomials(terms))
    }
}

/// Right-hand side of `λ_i λ_{2i+1+n} = Σ_j C(n - j - 2^{-N(j,n)}, j) λ_{i+n-j} λ_{2i+1+j}`,
/// summed directly over the dyadic `j`.
///
/// Only `j` on the grid `2^{-N}` with `N = N(i, j)` can contribute: a finer
/// `j` makes the scaled top argument even and the bottom one odd.
pub fn adem_rewrite_pair_dyadic(i: DyadicRational, j: DyadicRational) -> Result<DyadicElement> {
    let one = DyadicRational::integer(1);
    if i <= DyadicRational::integer(-1) || j <= DyadicRational::integer(-1) {
        return Err(Error::InvalidArgument(format!("subscripts {i}, {j} must be > -1")));
    }
    if pair_admissible(i, j) {
        return Err(Error::InvalidArgument(format!("λ_{i}λ_{j} is already admissible")));
    }
    let n = j - i - i - one;
    let level = n_of(i, j);
    let steps = n.scaled_numerator(level).expect("level clears n");
    let terms = (0..=steps).filter_map(|k| {
        let jj = DyadicRational::new(k, level);
        let shift = DyadicRational::new(1, n_of(jj, n));
        binom_mod2_dyadic(n - jj - shift, jj)
            .then(|| DyadicMonomial(vec![i + n - jj, i + i + one + jj]))
    });
    Ok(DyadicElement::from_monomials(terms))
}

/// Terms of `d(λ_n) = Σ_{j>0} C(2^N(n-j+1) - 1, 2^N j) λ_{n-j} λ_{j-1}` for
/// `N = level(n)`.
pub fn d_generator_dyadic(n: DyadicRational) -> DyadicElement {
    d_generator_with(n, |jj| {
        let level = n.exponent().max(jj.exponent());
        let one = DyadicRational::integer(1);
        let top = (n - jj + one).scaled_numerator(level).expect("level clears") - 1;
        binom_mod2(top, jj.scaled_numerator(level).expect("level clears"))
    })
}

/// `d(λ_n)` with the literal coefficient `C(n - j, j)` under the doubling
/// convention. This disagrees with θ-equivariance (already at `n = 1/2`) and
/// exists only for comparison.
pub fn d_generator_dyadic_naive(n: DyadicRational) -> DyadicElement {
    d_generator_with(n, |jj| binom_mod2_dyadic(n - jj, jj))
}

fn d_generator_with(n: DyadicRational, coeff: impl Fn(DyadicRational) -> bool) -> DyadicElement {
    let level = n.exponent();
    let top = (n + DyadicRational::integer(1)).scaled_numerator(level).expect("level clears n");
    let terms = (1..top).filter_map(|k| {
        let jj = DyadicRational::new(k, level);
        coeff(jj).then(|| DyadicMonomial(vec![n - jj, jj - DyadicRational::integer(1)]))
    });
    DyadicElement::from_monomials(terms)
}

/// The even integer in the θ-orbit `{…, (n-1)/2, n, 2n+1, …}` of `n > -1`.
pub fn orbit_rep(n: DyadicRational) -> Result<DyadicRational> {
    if n <= DyadicRational::integer(-1) {
        return Err(Error::InvalidArgument(format!("{n} is not > -1")));
    }
    let mut x = n;
    while !x.is_integer() {
        x = x.theta(1);
    }
    let mut v = x.numerator();
    while v % 2 != 0 {
        v = (v - 1) / 2;
    }
    Ok(DyadicRational::integer(v))
}

/// One level of the directed system computing `H^{s,u}(θ⁻¹Λ)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalizedLevel {
    /// Power of θ applied to the requested degree.
    pub k: u32,
    /// Internal degree `2^k u` in Λ.
    pub t: u32,
    pub dim: usize,
}

/// The chain `H^{s,t_0}(Λ) → H^{s,2t_0}(Λ) → ⋯` under Sq⁰.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalizedExtReport {
    pub s: u32,
    pub u: DyadicRational,
    pub levels: Vec<LocalizedLevel>,
    /// `map_ranks[i]` is the rank of Sq⁰ from level `i` to level `i+1`.
    pub map_ranks: Vec<usize>,
    /// Rank of the composite from the first level to the last; a lower bound
    /// for the colimit dimension that is exact once the system stabilizes.
    pub composite_rank: usize,
    /// The last connecting map is an isomorphism.
    pub stabilized: bool,
}

impl Lambda {
    /// Canonical form on the dyadic-admissible basis.
    pub fn normalize_dyadic(&self, e: &DyadicElement) -> Result<DyadicElement> {
        self.per_monomial(e, |m| self.normalize_monomial(m))
    }

    pub fn d_dyadic(&self, e: &DyadicElement) -> Result<DyadicElement> {
        self.per_monomial(e, |m| self.d(&Element::from(m.clone())))
    }

    pub fn multiply_dyadic(&self, a: &DyadicElement, b: &DyadicElement) -> Result<DyadicElement> {
        let level = a.level().max(b.level());
        let p = self.multiply(&a.to_integer(level)?, &b.to_integer(level)?)?;
        Ok(DyadicElement::from_scaled(&p, level))
    }

    fn per_monomial(&self, e: &DyadicElement, f: impl Fn(&Monomial) -> Result<Element>) -> Result<DyadicElement> {
        let mut terms = Vec::new();
        for m in e.terms() {
            let level = m.level();
            terms.extend(DyadicElement::from_scaled(&f(&m.to_integer(level)?)?, level).terms);
        }
        Ok(DyadicElement::from_monomials(terms))
    }

    /// Normal form by rewriting dyadic pairs directly, without scaling.
    pub fn normalize_dyadic_direct(&self, e: &DyadicElement) -> Result<DyadicElement> {
        let mut done = Vec::new();
        let mut stack: Vec<DyadicMonomial> = e.terms().to_vec();
        let mut steps = 0u64;
        while let Some(m) = stack.pop() {
            let Some(p) = m.first_inadmissible() else {
                done.push(m);
                continue;
            };
            steps += 1;
            if steps > self.step_budget() {
                let origin = e.terms().first().and_then(|m| m.to_integer(m.level()).ok()).unwrap_or_default();
                return Err(Error::StepBudget { monomial: origin, budget: self.step_budget() });
            }
            let rhs = adem_rewrite_pair_dyadic(m.0[p], m.0[p + 1])?;
            for t in rhs.terms() {
                let mut v = m.0[..p].to_vec();
                v.extend_from_slice(&t.0);
                v.extend_from_slice(&m.0[p + 2..]);
                stack.push(DyadicMonomial(v));
            }
        }
        Ok(DyadicElement::from_monomials(done))
    }

    /// The differential from the dyadic generator formula and the Leibniz
    /// rule, normalized directly.
    pub fn d_dyadic_direct(&self, e: &DyadicElement) -> Result<DyadicElement> {
        let mut terms = Vec::new();
        for m in e.terms() {
            for (r, &n) in m.0.iter().enumerate() {
                let left = DyadicMonomial(m.0[..r].to_vec());
                let right = DyadicMonomial(m.0[r + 1..].to_vec());
                for t in d_generator_dyadic(n).terms() {
                    terms.push(left.concat(t).concat(&right));
                }
            }
        }
        self.normalize_dyadic_direct(&DyadicElement::from_monomials(terms))
    }

    /// Dyadic-admissible monomials of length `s` and internal degree `u` with
    /// level at most `level_cap`.
    pub fn dyadic_basis(&self, s: u32, u: DyadicRational, level_cap: u32) -> Result<Vec<DyadicMonomial>> {
        let t = u
            .scaled_numerator(level_cap)
            .and_then(|t| u32::try_from(t).ok())
            .ok_or_else(|| Error::InvalidArgument(format!("2^{level_cap}·{u} is not a non-negative integer")))?;
        let slice = self.basis(ComplexKind::Lambda, s, t);
        let mut out: Vec<_> = slice
            .monomials()
            .iter()
            .map(|m| DyadicMonomial::from_integer(m).scale(-(level_cap as i32)))
            .collect();
        out.sort_unstable_by(|a, b| b.cmp(a));
        Ok(out)
    }

    /// The directed system whose colimit is `H^{s,u}(θ⁻¹Λ)`, truncated to
    /// `levels + 1` terms starting at the least integral degree `2^k u`.
    pub fn localized_ext(&self, s: u32, u: DyadicRational, levels: u32) -> Result<LocalizedExtReport> {
        if u <= DyadicRational::ZERO {
            return Err(Error::InvalidArgument(format!("internal degree {u} must be positive")));
        }
        let k0 = u.exponent();
        let mut out = Vec::new();
        let mut ranks = Vec::new();
        let mut composite: Option<BitMatrix> = None;
        for i in 0..=levels {
            let k = k0 + i;
            let t = u
                .scaled_numerator(k)
                .and_then(|t| u32::try_from(t).ok())
                .ok_or_else(|| Error::InvalidArgument(format!("degree 2^{k}·{u} is out of range")))?;
            let dim = self.cohomology(ComplexKind::Lambda, s, t)?.dim();
            out.push(LocalizedLevel { k, t, dim });
            if i == levels {
                break;
            }
            let map = self.sq0_map(s, t)?.matrix;
            ranks.push(map.rank());
            composite = Some(match composite {
                None => map,
                Some(c) => map.mul(&c),
            });
        }
        let composite_rank = match &composite {
            Some(c) => c.rank(),
            None => out[0].dim,
        };
        let stabilized = match (ranks.last(), out.len()) {
            (Some(&r), n) => r == out[n - 2].dim && r == out[n - 1].dim,
            (None, _) => false,
        };
        Ok(LocalizedExtReport { s, u, levels: out, map_ranks: ranks, composite_rank, stabilized })
    }
}
