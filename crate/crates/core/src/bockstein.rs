//! The Bockstein spectral sequence of the filtration `F^pΛ = im θ^p`.
//!
//! Everything happens in one internal degree `U` at a time. Admissible
//! monomials split by θ-depth, so `F^p C^{k,U}` is spanned by the basis
//! monomials of depth at least `p` and every chain has a well defined level.
//! Pages come from the usual formulas
//!
//! ```text
//! Z_r^p(k) = { x ∈ F^p C^k : dx ∈ F^{p+r} }
//! E_r^p(k) = Z_r^p(k) / (Z_{r-1}^{p+1}(k) + d Z_{r-1}^{p-r+1}(k-1))
//! ```
//!
//! The sources `E_r^0(n)` and targets `E_r^r(n+1)` only see a small window
//! of the complex: the Λ′-cocycles at level 0 in degree `n`, the Λ′-cocycles
//! at level 1 in degree `n+1`, and everything of level at least 1 or 2
//! above them. Sources are reported in the coordinates of `H^{n,U}(Λ′)`,
//! targets as classes of `H^{n+1,U/2^r}(Λ′)`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::Lambda;
use crate::basis::{BasisSlice, ComplexKind};
use crate::cochain::{project_to_prime, CohomologyPresentation};
use crate::element::Element;
use crate::error::{Error, Result};
use crate::linalg::{kernel_basis, quotient_reps, solve, BitMatrix, BitVec, Subspace};
use crate::monomial::{Bidegree, Monomial};

fn depth(m: &Monomial) -> u32 {
    m.theta_depth().unwrap_or(u32::MAX)
}

fn divides(p: u32, u: u32) -> bool {
    p < 32 && u % (1 << p) == 0
}

/// One homological degree of a window: optionally the Λ′-cocycles at a
/// fixed level, then every basis chain from `direct_level` up.
struct Block {
    u: u32,
    cocycles: Option<(u32, Arc<CohomologyPresentation>)>,
    direct_level: u32,
    direct: Option<Arc<BasisSlice>>,
    levels: Vec<u32>,
}

impl Block {
    fn new(lam: &Lambda, k: Option<u32>, u: u32, cocycle_level: Option<u32>, direct_level: u32) -> Result<Block> {
        let Some(k) = k else {
            return Ok(Block { u, cocycles: None, direct_level, direct: None, levels: Vec::new() });
        };
        let cocycles = match cocycle_level {
            Some(l) if divides(l, u) => Some((l, lam.cohomology(ComplexKind::LambdaPrime, k, u >> l)?)),
            _ => None,
        };
        let direct = divides(direct_level, u).then(|| lam.basis(ComplexKind::Lambda, k, u >> direct_level));
        let mut levels = Vec::new();
        if let Some((l, p)) = &cocycles {
            levels.extend(std::iter::repeat(*l).take(p.cocycles().dim()));
        }
        if let Some(b) = &direct {
            levels.extend(b.monomials().iter().map(|m| direct_level.saturating_add(depth(m))));
        }
        Ok(Block { u, cocycles, direct_level, direct, levels })
    }

    fn dim(&self) -> usize {
        self.levels.len()
    }

    fn cocycle_dim(&self) -> usize {
        self.cocycles.as_ref().map_or(0, |(_, p)| p.cocycles().dim())
    }

    /// Coordinates of a chain of `Λ^{k,U}` lying in this block.
    fn coords(&self, e: &Element) -> Result<BitVec> {
        let mut out = BitVec::zeros(self.dim());
        let mut low = Vec::new();
        for m in e.iter() {
            let d = depth(m);
            match &self.cocycles {
                Some((l, _)) if d == *l => {
                    low.push(m.theta_unpow(*l).expect("depth checked"));
                    continue;
                }
                _ => {}
            }
            let basis = self.direct.as_ref().filter(|_| d >= self.direct_level);
            let Some(basis) = basis else {
                return Err(Error::Infeasible(format!("{m} lies below the window in degree {}", self.u)));
            };
            let q = m.theta_unpow(self.direct_level).expect("depth checked");
            let i = basis.index_of(&q).ok_or_else(|| basis.missing(&q))?;
            out.flip(self.cocycle_dim() + i);
        }
        if let Some((_, p)) = &self.cocycles {
            let v = p.basis().vector(&Element::from_monomials(low))?;
            let c = p.cocycles().coordinates(&v).ok_or_else(|| Error::NotACocycle(p.basis().element(&v).to_string()))?;
            for i in c.iter_ones() {
                out.flip(i);
            }
        } else if !low.is_empty() {
            unreachable!()
        }
        Ok(out)
    }

    fn element(&self, v: &BitVec) -> Element {
        let kd = self.cocycle_dim();
        let mut terms = Vec::new();
        if let Some((l, p)) = &self.cocycles {
            let mut x = BitVec::zeros(p.basis().len());
            for i in v.iter_ones().take_while(|&i| i < kd) {
                x.xor_assign(&p.cocycles().rows()[i]);
            }
            terms.extend(x.iter_ones().map(|i| p.basis().get(i).theta_pow(*l)));
        }
        if let Some(b) = &self.direct {
            terms.extend(v.iter_ones().filter(|&i| i >= kd).map(|i| b.get(i - kd).theta_pow(self.direct_level)));
        }
        Element::from_monomials(terms)
    }
}

/// Consecutive blocks joined by the differential.
struct Filtered {
    blocks: Vec<Block>,
    d: Vec<BitMatrix>,
}

impl Filtered {
    fn new(lam: &Lambda, blocks: Vec<Block>) -> Result<Filtered> {
        let mut d = Vec::new();
        for w in blocks.windows(2) {
            let cols = (0..w[0].dim())
                .map(|j| w[1].coords(&lam.d(&w[0].element(&BitVec::unit(w[0].dim(), j)))?))
                .collect::<Result<Vec<_>>>()?;
            d.push(BitMatrix::from_columns(w[1].dim(), &cols));
        }
        Ok(Filtered { blocks, d })
    }

    /// `{x in block i : level(x) ≥ q, level(dx) ≥ t}`.
    fn zgen(&self, i: usize, q: u32, t: u32) -> Subspace {
        let block = &self.blocks[i];
        let cols: Vec<usize> = (0..block.dim()).filter(|&j| block.levels[j] >= q).collect();
        let rows: Vec<usize> = match self.blocks.get(i + 1) {
            Some(next) if i < self.d.len() => (0..next.dim()).filter(|&r| next.levels[r] < t).collect(),
            _ => Vec::new(),
        };
        let sub = BitMatrix::from_rows(
            cols.len(),
            rows.iter()
                .map(|&r| {
                    let row = self.d[i].row(r);
                    BitVec::from_indices(cols.len(), cols.iter().enumerate().filter(|(_, &c)| row.get(c)).map(|(k, _)| k))
                })
                .collect(),
        );
        let ker = kernel_basis(&sub);
        let gens = ker
            .rows()
            .iter()
            .map(|v| BitVec::from_indices(block.dim(), v.iter_ones().map(|k| cols[k])))
            .collect();
        Subspace::from_generators(block.dim(), gens)
    }

    /// Numerator and denominator of `E_r^p` at block `i`.
    fn page(&self, i: usize, r: u32, p: u32) -> Result<(Subspace, Subspace)> {
        let z = self.zgen(i, p, p + r);
        let mut den = self.zgen(i, p + 1, p + r);
        if i > 0 {
            let below = self.zgen(i - 1, (p + 1).saturating_sub(r), p);
            den = den.sum(&below.image(&self.d[i - 1]))?;
        }
        if !den.is_subspace_of(&z) {
            return Err(Error::NotASubspace);
        }
        Ok((z, den))
    }
}

/// A class surviving to some page, with a chain `z` of Λ whose level-0 part
/// is the class representative and whose coboundary lies in `F^r`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PageClass {
    pub label: String,
    pub representative: Element,
    pub witness: Element,
}

/// `E_r^0` in bidegree `(n, u)` as a subspace of `H^{n,u}(Λ′)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PageEntry {
    pub r: u32,
    pub n: u32,
    pub u: u32,
    pub dim: usize,
    pub classes: Vec<PageClass>,
}

/// A nonzero `d_r` from `E_r^0(n, u)` into `E_r^r(n+1, u)`, the latter read
/// as a class of `H^{n+1,u/2^r}(Λ′)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DifferentialRecord {
    pub r: u32,
    pub n: u32,
    pub u: u32,
    pub source_label: String,
    pub source: Element,
    pub target_label: String,
    /// Min-leading representative in `H^{n+1,u/2^r}(Λ′)`.
    pub target: Element,
    /// `z` in Λ with `d z = θ^r(w)`.
    pub witness: Element,
    /// `w`, a cocycle of `Λ^{n+1,u/2^r}` representing the bottom of a
    /// Sq⁰-family of length `r`.
    pub abutment: Element,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyOrigin {
    /// `[w]` for the target of a `d_r`; the family has length `r`.
    DifferentialTarget,
    /// `[z]` for a cycle surviving to `E_∞^0`.
    PermanentCycle,
}

/// A Sq⁰-family `{(Sq⁰)^i x : i ≥ 0}` in H(Λ).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Family {
    pub origin: FamilyOrigin,
    pub bidegree: Bidegree,
    pub generator: Element,
    /// Predicted length: `Some(r)` for a `d_r` target, `None` for a
    /// permanent cycle.
    pub predicted_length: Option<u32>,
    /// Number of leading powers `(Sq⁰)^i x` that were computed to be nonzero.
    pub nonzero_powers: u32,
    /// First power found to vanish, if any, within the degree bound.
    pub first_zero_power: Option<u32>,
}

/// Everything about one `(n, u)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlotReport {
    pub line: u32,
    pub u: u32,
    pub pages: Vec<PageEntry>,
    pub differentials: Vec<DifferentialRecord>,
    pub families: Vec<Family>,
}

impl SlotReport {
    pub fn e_infinity(&self) -> &PageEntry {
        self.pages.last().expect("at least one page")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SSReport {
    pub line: u32,
    pub u_max: u32,
    pub slots: Vec<SlotReport>,
}

impl SSReport {
    pub fn differentials(&self) -> impl Iterator<Item = &DifferentialRecord> {
        self.slots.iter().flat_map(|s| &s.differentials)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub what: String,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConsistencyReport {
    pub line: u32,
    pub u_max: u32,
    pub checks: Vec<Check>,
}

impl ConsistencyReport {
    pub fn ok(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }
}

/// Largest `r` for which `d_r` out of `E_r^0(n, u)` can be nonzero.
pub fn last_page(n: u32, u: u32) -> u32 {
    let mut r = 0;
    while divides(r + 1, u) && (u >> (r + 1)) > n {
        r += 1;
    }
    r
}

struct SlotWindow {
    n: u32,
    u: u32,
    prime: Arc<CohomologyPresentation>,
    w: Filtered,
    /// `H^{n,u}(Λ′)` coordinates of each window coordinate at degree `n`.
    pi: BitMatrix,
}

impl SlotWindow {
    fn new(lam: &Lambda, n: u32, u: u32) -> Result<SlotWindow> {
        let prime = lam.cohomology(ComplexKind::LambdaPrime, n, u)?;
        let blocks = vec![
            Block::new(lam, n.checked_sub(1), u, None, 0)?,
            Block::new(lam, Some(n), u, Some(0), 1)?,
            Block::new(lam, Some(n + 1), u, Some(1), 2)?,
            Block::new(lam, Some(n + 2), u, None, 2)?,
        ];
        let w = Filtered::new(lam, blocks)?;
        let vn = &w.blocks[1];
        let cols: Vec<BitVec> = (0..vn.dim())
            .map(|j| {
                if j < vn.cocycle_dim() {
                    prime.coordinates(&prime.cocycles().rows()[j])
                } else {
                    BitVec::zeros(prime.dim())
                }
            })
            .collect();
        let pi = BitMatrix::from_columns(prime.dim(), &cols);
        Ok(SlotWindow { n, u, prime, w, pi })
    }

    fn vn(&self) -> &Block {
        &self.w.blocks[1]
    }

    /// `E_r^0(n)` inside `H^{n,u}(Λ′)`.
    fn source_page(&self, r: u32) -> Subspace {
        self.w.zgen(1, 0, r).image(&self.pi)
    }

    /// Chain-level lift in `Λ′^{n,u}` of a subspace of `H^{n,u}(Λ′)`, plus coboundaries.
    fn lift(&self, s: &Subspace) -> Result<Subspace> {
        let gens = s.rows().iter().map(|c| self.prime.representative_vector(c)).collect();
        Subspace::from_generators(self.prime.basis().len(), gens).sum(self.prime.coboundaries())
    }

    /// A chain with level-0 part `x` whose coboundary has level at least
    /// `r`; with `r = u32::MAX` the coboundary must vanish.
    fn witness(&self, x: &BitVec, r: u32) -> Result<Element> {
        let vn = self.vn();
        let kd = vn.cocycle_dim();
        let kc = vn.cocycles.as_ref().expect("level-0 cocycles").1.cocycles().coordinates(x).ok_or(Error::NotASubspace)?;
        let mut v = BitVec::zeros(vn.dim());
        for i in kc.iter_ones() {
            v.flip(i);
        }
        let next = &self.w.blocks[2];
        let rows: Vec<usize> = (0..next.dim()).filter(|&i| next.levels[i] < r).collect();
        let free: Vec<usize> = (kd..vn.dim()).collect();
        let d = &self.w.d[1];
        let m = BitMatrix::from_rows(
            free.len(),
            rows.iter()
                .map(|&i| BitVec::from_indices(free.len(), free.iter().enumerate().filter(|(_, &c)| d.get(i, c)).map(|(k, _)| k)))
                .collect(),
        );
        let dv = d.mul_vec(&v);
        let rhs = BitVec::from_indices(rows.len(), rows.iter().enumerate().filter(|(_, &i)| dv.get(i)).map(|(k, _)| k));
        let f = solve(&m, &rhs).ok_or_else(|| Error::Infeasible(format!("no lift of a class at ({}, {}) to page {r}", self.n, self.u)))?;
        for k in f.iter_ones() {
            v.flip(free[k]);
        }
        Ok(vn.element(&v))
    }

    fn page_entry(&self, r: u32, e: &Subspace) -> Result<PageEntry> {
        let lifted = self.lift(e)?;
        let reps = quotient_reps(&lifted, self.prime.coboundaries())?;
        let basis = self.prime.basis();
        let classes = reps
            .iter()
            .map(|x| {
                let representative = basis.element(x);
                Ok(PageClass {
                    label: representative.leading_term().map(Monomial::label).unwrap_or_default(),
                    witness: self.witness(x, r)?,
                    representative,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PageEntry { r, n: self.n, u: self.u, dim: e.dim(), classes })
    }
}

impl Lambda {
    fn slot(&self, n: u32, u: u32, u_max: u32) -> Result<SlotReport> {
        let win = SlotWindow::new(self, n, u)?;
        let last = last_page(n, u);
        let mut pages = Vec::new();
        let mut differentials = Vec::new();
        let mut families = Vec::new();
        let mut current = win.source_page(1);
        for r in 1..=last {
            pages.push(win.page_entry(r, &current)?);
            let z = win.w.zgen(1, 0, r);
            let (_, den) = win.w.page(2, r, r)?;
            let residues: Vec<BitVec> = z.rows().iter().map(|v| den.reduce(&win.w.d[1].mul_vec(v))).collect();
            let m = BitMatrix::from_columns(win.w.blocks[2].dim(), &residues);
            let ker = kernel_basis(&m)
                .rows()
                .iter()
                .map(|c| win.pi.mul_vec(&z.combine(c)))
                .collect();
            let ker = Subspace::from_generators(win.prime.dim(), ker);
            if ker != win.source_page(r + 1) {
                return Err(Error::Infeasible(format!("E_{} at ({n}, {u}) disagrees with ker d_{r}", r + 1)));
            }
            if ker.dim() < current.dim() {
                let from = win.lift(&current)?;
                let killed = win.lift(&ker)?;
                for x in quotient_reps(&from, &killed)? {
                    let rec = self.differential_record(&win, r, &x, &killed)?;
                    families.push(self.family(
                        FamilyOrigin::DifferentialTarget,
                        &rec.abutment,
                        Some(r),
                        u_max,
                    )?);
                    differentials.push(rec);
                }
            }
            current = ker;
        }
        let mut infinity = win.page_entry(u32::MAX, &current)?;
        infinity.r = last + 1;
        for c in &infinity.classes {
            families.push(self.family(FamilyOrigin::PermanentCycle, &c.witness, None, u_max)?);
        }
        pages.push(infinity);
        Ok(SlotReport { line: n, u, pages, differentials, families })
    }

    fn differential_record(&self, win: &SlotWindow, r: u32, x: &BitVec, killed: &Subspace) -> Result<DifferentialRecord> {
        let basis = win.prime.basis();
        let source = basis.element(x);
        // Sources carry a positive even number of even subscripts
        let odd: Element = source.filter(|m| m.even_count() % 2 == 1);
        if !killed.contains(&basis.vector(&odd)?) {
            return Err(Error::Infeasible(format!("d_{r} source {source} has no representative with an even number of even subscripts")));
        }
        let witness = win.witness(x, r)?;
        let dz = self.d(&witness)?;
        let abutment = self
            .theta_unpow(&dz, r)
            .map_err(|e| Error::Infeasible(format!("coboundary of the witness for {source} is not in im θ^{r}: {e}")))?;
        let tu = win.u >> r;
        let target_p = self.cohomology(ComplexKind::LambdaPrime, win.n + 1, tu)?;
        let class = self.class_of(&project_to_prime(&abutment), &target_p)?;
        if class.is_zero() {
            return Err(Error::Infeasible(format!("d_{r} of {source} has a zero target class")));
        }
        let target = target_p.representative(&class.coords);
        Ok(DifferentialRecord {
            r,
            n: win.n,
            u: win.u,
            source_label: source.leading_term().map(Monomial::label).unwrap_or_default(),
            source,
            target_label: target.leading_term().map(Monomial::label).unwrap_or_default(),
            target,
            witness,
            abutment,
        })
    }

    fn family(&self, origin: FamilyOrigin, generator: &Element, predicted: Option<u32>, u_max: u32) -> Result<Family> {
        let b = generator.bidegree().ok_or_else(|| Error::InvalidArgument("zero family generator".into()))?;
        let mut nonzero_powers = 0;
        let mut first_zero_power = None;
        // for a d_r target, (Sq⁰)^r vanishes by the witness itself
        let limit = predicted.map_or(u32::MAX, |r| r);
        let mut i = 0;
        while i < limit && (b.t as u64) << i <= u_max.max(b.t) as u64 {
            let x = self.theta_pow(generator, i);
            if self.is_coboundary(ComplexKind::Lambda, &x)? {
                first_zero_power = Some(i);
                break;
            }
            nonzero_powers += 1;
            i += 1;
        }
        if first_zero_power.is_none() && i == limit {
            first_zero_power = predicted;
        }
        Ok(Family { origin, bidegree: b, generator: generator.clone(), predicted_length: predicted, nonzero_powers, first_zero_power })
    }

    /// `E_r^0(n, u)`; pages past the last differential are `E_∞`.
    pub fn page(&self, r: u32, n: u32, u: u32) -> Result<PageEntry> {
        if r == 0 {
            return Err(Error::InvalidArgument("pages start at r = 1".into()));
        }
        let slot = self.slot(n, u, u)?;
        let i = (r as usize - 1).min(slot.pages.len() - 1);
        let mut page = slot.pages[i].clone();
        page.r = r;
        Ok(page)
    }

    /// The nonzero `d_r` out of `E_r^0(n, u)`, one record per basis class of
    /// a complement of the kernel.
    pub fn differential(&self, r: u32, n: u32, u: u32) -> Result<Vec<DifferentialRecord>> {
        Ok(self.slot(n, u, u)?.differentials.into_iter().filter(|d| d.r == r).collect())
    }

    /// All slots `(n, u)` with `1 ≤ u ≤ u_max`.
    pub fn bss_run(&self, n: u32, u_max: u32) -> Result<SSReport> {
        let slots = (n.max(1)..=u_max).map(|u| self.slot(n, u, u_max)).collect::<Result<Vec<_>>>()?;
        Ok(SSReport { line: n, u_max, slots })
    }

    /// Check that every differential predicts the right Sq⁰-family length
    /// and that every permanent cycle is a nonzero class of H(Λ).
    pub fn consistency_check(&self, n: u32, u_max: u32) -> Result<ConsistencyReport> {
        let report = self.bss_run(n, u_max)?;
        Ok(self.consistency_of(&report))
    }

    pub fn consistency_of(&self, report: &SSReport) -> ConsistencyReport {
        let mut checks = Vec::new();
        for slot in &report.slots {
            for d in &slot.differentials {
                let r = d.r;
                let below = self.theta_pow(&d.abutment, r - 1);
                let nonzero = self.is_coboundary(ComplexKind::Lambda, &below).map(|b| !b).unwrap_or(false);
                checks.push(Check {
                    what: format!("(Sq0)^{} of the d_{r} target from ({}, {}) is nonzero", r - 1, d.n, d.u),
                    ok: nonzero,
                });
                let top = self.theta_pow(&d.abutment, r);
                let vanishes = self.d(&d.witness).map(|dz| dz == top).unwrap_or(false);
                checks.push(Check {
                    what: format!("(Sq0)^{r} of the d_{r} target from ({}, {}) vanishes", d.n, d.u),
                    ok: vanishes,
                });
            }
            for f in slot.families.iter().filter(|f| f.origin == FamilyOrigin::PermanentCycle) {
                let cocycle = self.d(&f.generator).map(|d| d.is_zero()).unwrap_or(false);
                checks.push(Check {
                    what: format!("permanent cycle {} at ({}, {}) is a nonzero class", f.generator.label(), slot.line, slot.u),
                    ok: cocycle && f.nonzero_powers >= 1,
                });
            }
        }
        ConsistencyReport { line: report.line, u_max: report.u_max, checks }
    }

    /// `dim E_∞^p(n, u)` for every `p`, from the whole filtered complex.
    pub fn e_infinity_dims(&self, n: u32, u: u32) -> Result<Vec<usize>> {
        let blocks = vec![
            Block::new(self, n.checked_sub(1), u, None, 0)?,
            Block::new(self, Some(n), u, None, 0)?,
            Block::new(self, Some(n + 1), u, None, 0)?,
        ];
        let w = Filtered::new(self, blocks)?;
        let top = (0..32).take_while(|&p| divides(p, u) && (u >> p) >= n).last().unwrap_or(0);
        (0..=top)
            .map(|p| {
                let (z, den) = w.page(1, top + 2, p)?;
                Ok(z.dim() - den.dim())
            })
            .collect()
    }

    /// `dim E_1^p(n, u)` from the whole filtered complex, for comparison
    /// with `H^{n,u/2^p}(Λ′)`.
    pub fn e_one_dims(&self, n: u32, u: u32) -> Result<Vec<usize>> {
        let blocks = vec![
            Block::new(self, n.checked_sub(1), u, None, 0)?,
            Block::new(self, Some(n), u, None, 0)?,
            Block::new(self, Some(n + 1), u, None, 0)?,
        ];
        let w = Filtered::new(self, blocks)?;
        let top = (0..32).take_while(|&p| divides(p, u) && (u >> p) >= n).last().unwrap_or(0);
        (0..=top)
            .map(|p| {
                let (z, den) = w.page(1, 1, p)?;
                Ok(z.dim() - den.dim())
            })
            .collect()
    }

    /// Graded dimensions of `H^{n,u}(Λ)` filtered by the images of
    /// `(Sq⁰)^p`, computed from ranks of iterated Sq⁰.
    pub fn sq0_associated_graded(&self, n: u32, u: u32) -> Result<Vec<usize>> {
        let top = (0..32).take_while(|&p| divides(p, u) && (u >> p) >= n).last().unwrap_or(0);
        let mut ranks = vec![self.cohomology(ComplexKind::Lambda, n, u)?.dim()];
        for p in 1..=top {
            // (Sq0)^p : H^{n,u/2^p} → H^{n,u}
            let mut m = self.sq0_map(n, u >> p)?.matrix;
            for q in (1..p).rev() {
                m = self.sq0_map(n, u >> q)?.matrix.mul(&m);
            }
            ranks.push(m.rank());
        }
        ranks.push(0);
        Ok(ranks.windows(2).map(|w| w[0] - w[1]).collect())
    }
}
