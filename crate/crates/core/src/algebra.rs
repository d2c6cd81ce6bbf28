//! The algebra Λ: Adem rewriting to the admissible basis, products, θ, and
//! the raw relations.
//!
//! Normal forms are computed right to left. The normal form of a word is
//! obtained by left-multiplying its generators, one at a time, onto the
//! normal form of the suffix; each such step has at most one inadmissible
//! pair, the leftmost, which is rewritten with the admissible Adem relation
//! and resolved recursively. Every intermediate `generator · admissible`
//! word is memoized.

use std::sync::Arc;

use parking_lot::RwLock;
use rustc_hash::FxHashMap;

use crate::element::{cancel_pairs, Element};
use crate::error::{Error, Result};
use crate::monomial::{GeneratorIndex, Monomial};

/// Default cap on Adem rewrites spent normalizing a single monomial.
pub const DEFAULT_STEP_BUDGET: u64 = 10_000_000;

const DEFAULT_MEMO_CAP: usize = 4_000_000;

/// `C(a, b) mod 2`, taken to be zero unless `0 ≤ b ≤ a`.
pub fn binom_mod2(a: i64, b: i64) -> bool {
    a >= 0 && b >= 0 && b <= a && (b & !a) == 0
}

/// Right-hand side of the admissible relation
/// `λ_i λ_{2i+1+n} = Σ_j C(n-j-1, j) λ_{i+n-j} λ_{2i+1+j}` as subscript pairs.
pub(crate) fn adem_terms(i: GeneratorIndex, j: GeneratorIndex) -> impl Iterator<Item = (GeneratorIndex, GeneratorIndex)> {
    let (i, j) = (i as i64, j as i64);
    let n = j - 2 * i - 1;
    debug_assert!(n >= 0);
    (0..=n / 2)
        .filter(move |&k| binom_mod2(n - k - 1, k))
        .map(move |k| ((i + n - k) as GeneratorIndex, (2 * i + 1 + k) as GeneratorIndex))
}

/// Terms of `d(λ_n) = Σ_{j≥1} C(n-j, j) λ_{n-j} λ_{j-1}` as subscript pairs.
pub(crate) fn d_generator_terms(n: GeneratorIndex) -> impl Iterator<Item = (GeneratorIndex, GeneratorIndex)> {
    let n = n as i64;
    (1..=n / 2)
        .filter(move |&j| binom_mod2(n - j, j))
        .map(move |j| ((n - j) as GeneratorIndex, (j - 1) as GeneratorIndex))
}

struct Steps<'a> {
    used: u64,
    budget: u64,
    origin: &'a Monomial,
}

impl Steps<'_> {
    #[inline]
    fn tick(&mut self) -> Result<()> {
        self.used += 1;
        if self.used > self.budget {
            return Err(Error::StepBudget { monomial: self.origin.clone(), budget: self.budget });
        }
        Ok(())
    }
}

type Memo = RwLock<FxHashMap<Monomial, Arc<[Monomial]>>>;

/// Computation engine for Λ and the complexes built from it.
///
/// All caches are internal and synchronized, so one engine can be shared
/// across threads; results do not depend on cache state.
pub struct Lambda {
    budget: u64,
    memo_cap: usize,
    left_mul_memo: Memo,
    d_memo: Memo,
    pub(crate) caches: crate::cochain::Caches,
}

impl Default for Lambda {
    fn default() -> Self {
        Self::new()
    }
}

impl Lambda {
    pub fn new() -> Self {
        Self::with_step_budget(DEFAULT_STEP_BUDGET)
    }

    /// An engine that gives up after `budget` rewrites on any one monomial.
    pub fn with_step_budget(budget: u64) -> Self {
        Lambda {
            budget,
            memo_cap: DEFAULT_MEMO_CAP,
            left_mul_memo: RwLock::default(),
            d_memo: RwLock::default(),
            caches: Default::default(),
        }
    }

    pub fn step_budget(&self) -> u64 {
        self.budget
    }

    /// Drop every memo table and cached slice.
    pub fn clear_caches(&self) {
        self.left_mul_memo.write().clear();
        self.d_memo.write().clear();
        self.caches.clear();
    }

    fn remember(&self, memo: &Memo, key: Monomial, value: Arc<[Monomial]>) {
        let mut m = memo.write();
        if m.len() >= self.memo_cap {
            m.clear();
        }
        m.insert(key, value);
    }

    /// Append the normal form of `λ_g · a` to `out`, where `a` is admissible.
    fn left_mul_into(&self, g: GeneratorIndex, a: &[GeneratorIndex], out: &mut Vec<Monomial>, steps: &mut Steps) -> Result<()> {
        match a.first() {
            Some(&a0) if 2 * (g as u32) < a0 as u32 => {}
            _ => {
                out.push(Monomial::prepend(g, a));
                return Ok(());
            }
        }
        let key = Monomial::prepend(g, a);
        if let Some(v) = self.left_mul_memo.read().get(&key) {
            out.extend(v.iter().cloned());
            return Ok(());
        }
        steps.tick()?;
        let mut acc = Vec::new();
        let mut mid = Vec::new();
        for (x, y) in adem_terms(g, a[0]) {
            mid.clear();
            self.left_mul_into(y, &a[1..], &mut mid, steps)?;
            for b in cancel_pairs(std::mem::take(&mut mid)) {
                self.left_mul_into(x, b.subscripts(), &mut acc, steps)?;
            }
        }
        let result: Arc<[Monomial]> = cancel_pairs(acc).into();
        out.extend(result.iter().cloned());
        self.remember(&self.left_mul_memo, key, result);
        Ok(())
    }

    fn normalize_word(&self, word: &Monomial, out: &mut Vec<Monomial>) -> Result<()> {
        let subs = word.subscripts();
        // longest admissible suffix
        let mut start = subs.len().saturating_sub(1);
        while start > 0 && 2 * (subs[start - 1] as u32) >= subs[start] as u32 {
            start -= 1;
        }
        if start == 0 {
            out.push(word.clone());
            return Ok(());
        }
        let mut steps = Steps { used: 0, budget: self.budget, origin: word };
        let mut acc = vec![Monomial::new(&subs[start..])];
        for &g in subs[..start].iter().rev() {
            let mut next = Vec::new();
            for a in &acc {
                self.left_mul_into(g, a.subscripts(), &mut next, &mut steps)?;
            }
            acc = cancel_pairs(next);
        }
        out.extend(acc);
        Ok(())
    }

    /// Canonical form on the admissible basis.
    pub fn normalize(&self, e: &Element) -> Result<Element> {
        if e.is_admissible() {
            return Ok(e.clone());
        }
        let mut out = Vec::new();
        for m in e.iter() {
            self.normalize_word(m, &mut out)?;
        }
        Ok(Element::from_sorted(cancel_pairs(out)))
    }

    pub fn normalize_monomial(&self, m: &Monomial) -> Result<Element> {
        let mut out = Vec::new();
        self.normalize_word(m, &mut out)?;
        Ok(Element::from_sorted(cancel_pairs(out)))
    }

    /// Right-hand side of the admissible Adem relation for the pair
    /// `λ_i λ_j` with `j ≥ 2i+1`.
    pub fn adem_rewrite_pair(&self, i: GeneratorIndex, j: GeneratorIndex) -> Result<Element> {
        if (j as u32) < 2 * i as u32 + 1 {
            return Err(Error::AdmissiblePair(i as u64, j as u64));
        }
        Ok(Element::from_monomials(adem_terms(i, j).map(|(x, y)| Monomial::new(&[x, y]))))
    }

    /// Product `a · b`, normalized.
    pub fn multiply(&self, a: &Element, b: &Element) -> Result<Element> {
        let mut out = Vec::new();
        for x in a.iter() {
            for y in b.iter() {
                self.normalize_word(&x.concat(y), &mut out)?;
            }
        }
        Ok(Element::from_sorted(cancel_pairs(out)))
    }

    /// `d(λ_n)`, already admissible.
    pub fn d_generator(&self, n: GeneratorIndex) -> Element {
        Element::from_monomials(d_generator_terms(n).map(|(x, y)| Monomial::new(&[x, y])))
    }

    /// `d` of an admissible monomial, memoized.
    pub(crate) fn d_admissible(&self, m: &Monomial) -> Result<Arc<[Monomial]>> {
        if let Some(v) = self.d_memo.read().get(m) {
            return Ok(v.clone());
        }
        let subs = m.subscripts();
        let result: Arc<[Monomial]> = match subs.len() {
            0 => Arc::from(Vec::new()),
            1 => self.d_generator(subs[0]).into_terms().into(),
            _ => {
                let (g, rest) = (subs[0], &subs[1..]);
                let mut steps = Steps { used: 0, budget: self.budget, origin: m };
                let mut acc = Vec::new();
                let mut mid = Vec::new();
                // d(λ_g) · rest
                for (x, y) in d_generator_terms(g) {
                    mid.clear();
                    self.left_mul_into(y, rest, &mut mid, &mut steps)?;
                    for b in cancel_pairs(std::mem::take(&mut mid)) {
                        self.left_mul_into(x, b.subscripts(), &mut acc, &mut steps)?;
                    }
                }
                // λ_g · d(rest)
                for b in self.d_admissible(&Monomial::new(rest))?.iter() {
                    self.left_mul_into(g, b.subscripts(), &mut acc, &mut steps)?;
                }
                cancel_pairs(acc).into()
            }
        };
        self.remember(&self.d_memo, m.clone(), result.clone());
        Ok(result)
    }

    /// The differential, extended as a derivation and normalized.
    pub fn d(&self, e: &Element) -> Result<Element> {
        let e = self.normalize(e)?;
        let mut out = Vec::new();
        for m in e.iter() {
            out.extend(self.d_admissible(m)?.iter().cloned());
        }
        Ok(Element::from_sorted(cancel_pairs(out)))
    }

    /// The Leibniz expansion of `d(m)` as raw words, before any Adem rewriting.
    pub fn d_unnormalized(&self, m: &Monomial) -> Vec<Monomial> {
        let subs = m.subscripts();
        let mut out = Vec::new();
        for (k, &n) in subs.iter().enumerate() {
            for (x, y) in d_generator_terms(n) {
                let mut w: Vec<GeneratorIndex> = subs[..k].to_vec();
                w.extend([x, y]);
                w.extend_from_slice(&subs[k + 1..]);
                out.push(Monomial::new(&w));
            }
        }
        out
    }

    /// `θ^k`, which sends `λ_n` to `λ_{2^k(n+1)-1}` and preserves admissibility.
    pub fn theta_pow(&self, e: &Element, k: u32) -> Element {
        Element::from_sorted(e.iter().map(|m| m.theta_pow(k)).collect())
    }

    /// Preimage under `θ^k` of a canonical element.
    pub fn theta_unpow(&self, e: &Element, k: u32) -> std::result::Result<Element, NotInImage> {
        e.iter()
            .map(|m| m.theta_unpow(k).ok_or_else(|| NotInImage { monomial: m.clone(), power: k }))
            .collect::<std::result::Result<Vec<_>, _>>()
            .map(Element::from_sorted)
    }
}

/// Raised by [`Lambda::theta_unpow`] for a monomial outside `im θ^k`.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{monomial} is not in the image of θ^{power}")]
pub struct NotInImage {
    pub monomial: Monomial,
    pub power: u32,
}

/// The symmetric relation `Σ_{i+j=n} C(i+j, i) λ_{i-1+m} λ_{j-1+2m}` for
/// `m ≥ 1`, unnormalized.
pub fn symmetric_relation(m: u32, n: u32) -> Element {
    assert!(m >= 1, "symmetric relations are indexed by m ≥ 1");
    let (m, n) = (m as i64, n as i64);
    Element::from_monomials((0..=n).filter(|&i| binom_mod2(n, i)).map(|i| {
        let j = n - i;
        Monomial::new(&[(i - 1 + m) as GeneratorIndex, (j - 1 + 2 * m) as GeneratorIndex])
    }))
}

/// The symmetric form of the differential,
/// `d(λ_{n-1}) = Σ_{i+j=n, i,j>0} C(i+j, j) λ_{i-1} λ_{j-1}`, unnormalized.
pub fn symmetric_differential(n_minus_one: GeneratorIndex) -> Element {
    let n = n_minus_one as i64 + 1;
    Element::from_monomials(
        (1..n)
            .filter(|&i| binom_mod2(n, n - i))
            .map(|i| Monomial::new(&[(i - 1) as GeneratorIndex, (n - i - 1) as GeneratorIndex])),
    )
}
