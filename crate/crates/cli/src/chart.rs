//! Stem-by-filtration charts of H(Λ′) and the embedded reference chart.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use lforge::bockstein::last_page;
use lforge::{BitVec, ComplexKind, Lambda, Monomial};
use serde::{Deserialize, Serialize};

use crate::CliError;

const FIXTURE: &str = include_str!("../data/figure1.txt");

/// One labelled class of the published chart.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixtureCell {
    pub filtration: u32,
    pub stem: u32,
    pub label: String,
    pub monomial: Monomial,
    pub underlined: bool,
}

/// Reads `221^5`-style labels: digits are subscripts and `^k` repeats the
/// last one `k` times in total.
pub fn parse_figure_label(label: &str) -> Result<Monomial, CliError> {
    let bad = || CliError::Usage(format!("bad chart label {label:?}"));
    if label.starts_with('(') {
        return label.parse().map_err(|_| bad());
    }
    let (digits, power) = match label.split_once('^') {
        Some((d, p)) => (d, p.parse::<usize>().map_err(|_| bad())?),
        None => (label, 1),
    };
    let mut subs: Vec<u16> = digits.chars().map(|c| c.to_digit(10).map(|d| d as u16)).collect::<Option<_>>().ok_or_else(bad)?;
    let last = *subs.last().ok_or_else(bad)?;
    if power == 0 {
        return Err(bad());
    }
    subs.extend(std::iter::repeat(last).take(power - 1));
    Ok(Monomial::new(&subs))
}

/// Chart notation: a power of one generator is `0^n`, a trailing run of
/// five or more is written with `^`, and everything else is spelled out.
pub fn figure_label(m: &Monomial) -> String {
    let Some(compact) = m.compact() else { return m.to_string() };
    let subs = m.subscripts();
    let last = subs[subs.len() - 1];
    let run = subs.iter().rev().take_while(|&&n| n == last).count();
    if run == subs.len() && run >= 2 {
        format!("{last}^{run}")
    } else if run >= 5 {
        format!("{}^{run}", &compact[..subs.len() - run + 1])
    } else {
        compact
    }
}

pub fn parse_fixture(text: &str) -> Result<Vec<FixtureCell>, CliError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = || CliError::Usage(format!("fixture line {}: {line:?}", i + 1));
        let mut parts = line.split_whitespace();
        let filtration = parts.next().and_then(|p| p.parse().ok()).ok_or_else(bad)?;
        let stem = parts.next().and_then(|p| p.parse().ok()).ok_or_else(bad)?;
        let raw = parts.next().ok_or_else(bad)?;
        if parts.next().is_some() {
            return Err(bad());
        }
        let (label, underlined) = match raw.strip_suffix('*') {
            Some(l) => (l, true),
            None => (raw, false),
        };
        let monomial = parse_figure_label(label)?;
        if monomial.len() as u32 != filtration || monomial.stem() != stem {
            return Err(bad());
        }
        out.push(FixtureCell { filtration, stem, label: label.to_string(), monomial, underlined });
    }
    Ok(out)
}

/// The published chart of H(Λ′) through the 14-stem.
pub fn figure1_fixture() -> Vec<FixtureCell> {
    parse_fixture(FIXTURE).expect("embedded fixture parses")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum LabelMode {
    /// Use the fixture's leading term whenever some representative of the
    /// computed class has it; otherwise fall back to min-leading.
    #[default]
    Figure,
    /// The smallest leading term among all representatives.
    MinLeading,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChartClass {
    pub label: String,
    pub monomial: Monomial,
    /// Supports a Bockstein differential.
    pub underlined: bool,
    /// The page of that differential.
    pub page: Option<u32>,
    /// The label was checked to be the leading term of a representative.
    pub certified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChartCell {
    pub stem: u32,
    pub filtration: u32,
    pub dim: usize,
    pub classes: Vec<ChartClass>,
    /// e.g. `d1-source`.
    pub flags: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Chart {
    pub max_stem: u32,
    pub max_filtration: u32,
    /// Nonzero cells by filtration, then stem.
    pub cells: Vec<ChartCell>,
}

/// Builds the chart of `H^{s,t}(Λ′)` for `t - s ≤ max_stem`, `s ≤ max_filt`.
pub fn build_chart(lam: &Lambda, max_stem: u32, max_filt: u32, mode: LabelMode) -> Result<Chart, CliError> {
    let fixture = figure1_fixture();
    let mut cells = Vec::new();
    for s in 0..=max_filt {
        for stem in 0..=max_stem {
            let t = s + stem;
            let p = lam.cohomology(ComplexKind::LambdaPrime, s, t)?;
            if p.dim() == 0 {
                continue;
            }
            let pages = death_pages(lam, s, t, p.dim())?;
            let hints: Vec<&FixtureCell> = fixture.iter().filter(|f| f.filtration == s && f.stem == stem).collect();
            let mut classes = Vec::new();
            for (i, (rep, &page)) in p.reps().iter().zip(&pages).enumerate() {
                let coords = BitVec::unit(p.dim(), i);
                let mut leading = rep.leading_term().cloned().expect("nonzero representative");
                let mut certified = false;
                if mode == LabelMode::Figure && p.dim() == 1 && hints.len() == 1 {
                    if let Some(r) = p.representative_with_leading_term(&coords, &hints[0].monomial)? {
                        leading = r.leading_term().cloned().expect("nonzero representative");
                        certified = true;
                    }
                }
                classes.push(ChartClass {
                    label: figure_label(&leading),
                    monomial: leading,
                    underlined: page.is_some(),
                    page,
                    certified,
                });
            }
            let mut flags: Vec<String> = classes.iter().filter_map(|c| c.page).map(|r| format!("d{r}-source")).collect();
            flags.sort();
            flags.dedup();
            cells.push(ChartCell { stem, filtration: s, dim: p.dim(), classes, flags });
        }
    }
    Ok(Chart { max_stem, max_filtration: max_filt, cells })
}

/// For each basis class of `H^{s,t}(Λ′)`, the first page on which it stops
/// being a permanent cycle, or `None` if it survives to `E_∞`.
fn death_pages(lam: &Lambda, s: u32, t: u32, dim: usize) -> Result<Vec<Option<u32>>, CliError> {
    let last = last_page(s, t);
    if last == 0 {
        return Ok(vec![None; dim]);
    }
    let p = lam.cohomology(ComplexKind::LambdaPrime, s, t)?;
    let span = |r: u32| -> Result<lforge::linalg::Subspace, CliError> {
        let page = lam.page(r, s, t)?;
        let gens = page.classes.iter().map(|c| Ok(lam.class_of(&c.representative, &p)?.coords)).collect::<Result<Vec<_>, CliError>>()?;
        Ok(lforge::linalg::Subspace::from_generators(dim, gens))
    };
    let mut out = vec![None; dim];
    let mut prev = lforge::linalg::Subspace::full(dim);
    for r in 1..=last {
        // E_{r+1}^0 is the kernel of d_r on E_r^0.
        let next = span(r + 1)?;
        for (i, slot) in out.iter_mut().enumerate() {
            let e = BitVec::unit(dim, i);
            if slot.is_none() && prev.contains(&e) && !next.contains(&e) {
                *slot = Some(r);
            }
        }
        prev = next;
    }
    Ok(out)
}

/// Differences between a chart and the fixture, restricted to the chart's
/// range. Empty means an exact match.
pub fn compare_with_fixture(chart: &Chart, fixture: &[FixtureCell]) -> Vec<String> {
    let mut want: BTreeMap<(u32, u32), Vec<&FixtureCell>> = BTreeMap::new();
    for f in fixture.iter().filter(|f| f.stem <= chart.max_stem && f.filtration <= chart.max_filtration) {
        want.entry((f.filtration, f.stem)).or_default().push(f);
    }
    let mut out = Vec::new();
    for cell in &chart.cells {
        let key = (cell.filtration, cell.stem);
        let expected = want.remove(&key).unwrap_or_default();
        if expected.len() != cell.dim {
            out.push(format!("(s={}, stem={}): dimension {} but the figure has {}", key.0, key.1, cell.dim, expected.len()));
            continue;
        }
        for f in expected {
            match cell.classes.iter().find(|c| c.monomial == f.monomial) {
                None => out.push(format!(
                    "(s={}, stem={}): no class labelled {}; computed {}",
                    key.0,
                    key.1,
                    f.label,
                    cell.classes.iter().map(|c| c.label.as_str()).collect::<Vec<_>>().join(",")
                )),
                Some(c) if c.underlined != f.underlined => out.push(format!(
                    "(s={}, stem={}): {} underline {} but the figure has {}",
                    key.0, key.1, f.label, c.underlined, f.underlined
                )),
                Some(_) => {}
            }
        }
    }
    for ((s, stem), fs) in want {
        out.push(format!("(s={s}, stem={stem}): figure has {} but nothing was computed", fs[0].label));
    }
    out
}

/// Grid in the figure's orientation: top filtration first, stems across.
pub fn render_text(chart: &Chart) -> String {
    let cell_text = |c: &ChartCell| {
        c.classes.iter().map(|k| if k.underlined { format!("{}*", k.label) } else { k.label.clone() }).collect::<Vec<_>>().join(",")
    };
    let mut grid: BTreeMap<(u32, u32), String> = BTreeMap::new();
    for c in &chart.cells {
        grid.insert((c.filtration, c.stem), cell_text(c));
    }
    let widths: Vec<usize> = (0..=chart.max_stem)
        .map(|stem| {
            let w = (0..=chart.max_filtration).filter_map(|s| grid.get(&(s, stem))).map(|x| x.chars().count()).max();
            w.unwrap_or(0).max(stem.to_string().len())
        })
        .collect();
    let mut out = String::new();
    let margin = chart.max_filtration.to_string().len().max(1);
    for s in (0..=chart.max_filtration).rev() {
        let _ = write!(out, "{s:>margin$} |");
        for stem in 0..=chart.max_stem {
            let x = grid.get(&(s, stem)).map(String::as_str).unwrap_or("");
            let _ = write!(out, " {x:<w$}", w = widths[stem as usize]);
        }
        out.truncate(out.trim_end().len());
        out.push('\n');
    }
    let _ = write!(out, "{:>margin$} +", "");
    for w in &widths {
        let _ = write!(out, "{}", "-".repeat(w + 1));
    }
    out.push('\n');
    let _ = write!(out, "{:>margin$}  ", "");
    for stem in 0..=chart.max_stem {
        let _ = write!(out, " {stem:<w$}", w = widths[stem as usize]);
    }
    out.truncate(out.trim_end().len());
    out.push('\n');
    out
}

pub fn render_csv(chart: &Chart) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["stem", "filtration", "dim", "label", "monomial", "underlined", "page", "certified"])?;
    for c in &chart.cells {
        for k in &c.classes {
            w.write_record([
                c.stem.to_string(),
                c.filtration.to_string(),
                c.dim.to_string(),
                k.label.clone(),
                k.monomial.to_string(),
                k.underlined.to_string(),
                k.page.map(|r| r.to_string()).unwrap_or_default(),
                k.certified.to_string(),
            ])?;
        }
    }
    crate::csv_string(w)
}
