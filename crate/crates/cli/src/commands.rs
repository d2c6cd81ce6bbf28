use std::fmt::Write as _;
use std::io::Write;

use lforge::cocomplete::{d_generator_dyadic_naive, DyadicElement, DyadicRational, LocalizedExtReport};
use lforge::{project_to_prime, ComplexKind, ConsistencyReport, Element, Lambda, Monomial, SSReport, Sq0Kernel};
use serde::{Deserialize, Serialize};

use crate::cache::{Cache, CacheKey};
use crate::chart::{self, Chart, LabelMode};
use crate::{csv_string, CacheCommand, CliError, CocompleteCommand, Command, DiffMethod, Format, Settings};

/// Dimension and canonical representatives of one bidegree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologySummary {
    pub complex: String,
    pub s: u32,
    pub t: u32,
    pub stem: i64,
    pub dim: usize,
    pub labels: Vec<String>,
    pub representatives: Vec<Element>,
}

#[derive(Serialize)]
struct ElementReport<'a> {
    input: &'a str,
    result: String,
    terms: &'a [Monomial],
}

#[derive(Serialize)]
struct DyadicReport<'a> {
    input: &'a str,
    result: String,
    value: &'a DyadicElement,
}

#[derive(Serialize)]
struct BssOutput<'a> {
    report: &'a SSReport,
    check: Option<&'a ConsistencyReport>,
}

pub(crate) fn dispatch(cmd: &Command, st: &Settings, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let lam = Lambda::with_step_budget(st.step_budget);
    match cmd {
        Command::Normalize { element } => {
            let e = lam.normalize(&parse_element(element)?)?;
            emit(out, &element_output(st.format, element, &e)?)
        }
        Command::Mul { left, right } => {
            let e = lam.multiply(&parse_element(left)?, &parse_element(right)?)?;
            emit(out, &element_output(st.format, &format!("{left} * {right}"), &e)?)
        }
        Command::Diff { element, complex } => {
            let kind = parse_kind(complex)?;
            let e = diff_in(&lam, kind, &parse_element(element)?)?;
            emit(out, &element_output(st.format, element, &e)?)
        }
        Command::Basis(b) => {
            let kind = parse_kind(&b.complex)?;
            let slice = lam.basis(kind, b.s, b.t);
            let text = match st.format {
                Format::Text => slice.monomials().iter().map(|m| format!("{m}\n")).collect(),
                Format::Json => json(&serde_json::json!({
                    "complex": kind.to_string(), "s": b.s, "t": b.t, "len": slice.len(), "monomials": slice.monomials(),
                }))?,
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(Vec::new());
                    w.write_record(["index", "monomial", "label"])?;
                    for (i, m) in slice.monomials().iter().enumerate() {
                        w.write_record([i.to_string(), m.to_string(), m.label()])?;
                    }
                    csv_string(w)?
                }
            };
            emit(out, &text)
        }
        Command::Cohomology(a) => {
            let kind = parse_kind(&a.complex)?;
            let (rows, single) = match (a.s, a.t, &a.stem_range) {
                (Some(s), Some(t), None) => (vec![cohomology_summary(&lam, &st.cache, err, kind, s, t)?], true),
                (None, None, Some(range)) => {
                    let (lo, hi) = parse_range(range)?;
                    let mut rows = Vec::new();
                    for s in 0..=a.max_filt {
                        for stem in lo..=hi {
                            let row = cohomology_summary(&lam, &st.cache, err, kind, s, s + stem)?;
                            if row.dim > 0 {
                                rows.push(row);
                            }
                        }
                    }
                    (rows, false)
                }
                _ => return Err(CliError::Usage("give either --s and --t, or --stem-range".into())),
            };
            emit(out, &cohomology_output(st.format, &rows, single)?)
        }
        Command::Sq0 { s, max_internal } => {
            let rows = (*s.max(&1)..=*max_internal)
                .map(|t| sq0_row(&lam, &st.cache, err, *s, t))
                .collect::<Result<Vec<_>, _>>()?;
            emit(out, &sq0_output(st.format, &rows)?)
        }
        Command::Bss { line, max_internal, check } => {
            let report = bss_report(&lam, &st.cache, err, *line, *max_internal)?;
            let consistency = check.then(|| lam.consistency_of(&report));
            emit(out, &bss_output(st.format, &report, consistency.as_ref())?)?;
            match consistency {
                Some(c) if !c.ok() => {
                    for f in c.checks.iter().filter(|c| !c.ok) {
                        let _ = writeln!(err, "check failed: {}", f.what);
                    }
                    Err(CliError::Check(format!("consistency check failed on line {line}")))
                }
                _ => Ok(()),
            }
        }
        Command::Figure1 { max_stem, max_filt, labels, check } => {
            let c = figure_chart(&lam, &st.cache, err, *max_stem, *max_filt, *labels)?;
            let text = match st.format {
                Format::Text => chart::render_text(&c),
                Format::Json => json(&c)?,
                Format::Csv => chart::render_csv(&c)?,
            };
            emit(out, &text)?;
            if *check {
                let diffs = chart::compare_with_fixture(&c, &chart::figure1_fixture());
                if !diffs.is_empty() {
                    for d in &diffs {
                        let _ = writeln!(err, "mismatch {d}");
                    }
                    return Err(CliError::Check(format!("{} cells differ from the published chart", diffs.len())));
                }
            }
            Ok(())
        }
        Command::Cocomplete(c) => cocomplete(&lam, st.format, c, out),
        Command::Cache(c) => cache_command(&lam, &st.cache, c, out, err),
    }
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    out.write_all(text.as_bytes())?;
    Ok(())
}

fn json<T: Serialize>(v: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}

fn parse_element(text: &str) -> Result<Element, CliError> {
    text.parse::<Element>().map_err(|e| CliError::Usage(format!("{text:?}: {e}")))
}

fn parse_kind(text: &str) -> Result<ComplexKind, CliError> {
    text.parse().map_err(|_| CliError::Usage(format!("unknown complex {text:?}; use lambda, lambda-prime or theta-image-R")))
}

fn parse_range(text: &str) -> Result<(u32, u32), CliError> {
    let bad = || CliError::Usage(format!("bad range {text:?}; expected LO..HI"));
    let (lo, hi) = text.split_once("..").ok_or_else(bad)?;
    let hi = hi.strip_prefix('=').unwrap_or(hi);
    let (lo, hi) = (lo.trim().parse().map_err(|_| bad())?, hi.trim().parse().map_err(|_| bad())?);
    if lo > hi {
        return Err(bad());
    }
    Ok((lo, hi))
}

fn diff_in(lam: &Lambda, kind: ComplexKind, x: &Element) -> Result<Element, CliError> {
    let x = lam.normalize(x)?;
    Ok(match kind {
        ComplexKind::Lambda => lam.d(&x)?,
        ComplexKind::LambdaPrime => project_to_prime(&lam.d(&project_to_prime(&x))?),
        ComplexKind::ThetaImage(r) => {
            if let Some(m) = x.iter().find(|m| m.theta_unpow(r).is_none()) {
                return Err(lforge::Error::NotInBasis { monomial: m.clone(), what: kind.to_string() }.into());
            }
            lam.d(&x)?
        }
    })
}

fn element_output(format: Format, input: &str, e: &Element) -> Result<String, CliError> {
    Ok(match format {
        Format::Text => format!("{e}\n"),
        Format::Json => json(&ElementReport { input, result: e.to_string(), terms: e.terms() })?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["monomial", "label"])?;
            for m in e.iter() {
                w.write_record([m.to_string(), m.label()])?;
            }
            csv_string(w)?
        }
    })
}

pub(crate) fn compute_cohomology(lam: &Lambda, kind: ComplexKind, s: u32, t: u32) -> Result<CohomologySummary, CliError> {
    let p = lam.cohomology(kind, s, t)?;
    Ok(CohomologySummary {
        complex: kind.to_string(),
        s,
        t,
        stem: t as i64 - s as i64,
        dim: p.dim(),
        labels: p.labels(),
        representatives: p.reps().to_vec(),
    })
}

fn cohomology_summary(lam: &Lambda, cache: &Cache, err: &mut dyn Write, kind: ComplexKind, s: u32, t: u32) -> Result<CohomologySummary, CliError> {
    cache.get_or_compute(&CacheKey::new(kind.to_string(), s, t), err, || compute_cohomology(lam, kind, s, t))
}

fn cohomology_output(format: Format, rows: &[CohomologySummary], single: bool) -> Result<String, CliError> {
    Ok(match format {
        Format::Text => {
            let mut s = String::new();
            for r in rows {
                let _ = write!(s, "({},{}) stem {} dim {}", r.s, r.t, r.stem, r.dim);
                if r.dim > 0 {
                    let _ = write!(s, ": {}", r.labels.join(" "));
                }
                s.push('\n');
                if single {
                    for (label, rep) in r.labels.iter().zip(&r.representatives) {
                        let _ = writeln!(s, "  {label} = {rep}");
                    }
                }
            }
            s
        }
        Format::Json if single => json(&rows[0])?,
        Format::Json => json(&rows)?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["complex", "s", "t", "stem", "dim", "labels", "representatives"])?;
            for r in rows {
                let reps: Vec<String> = r.representatives.iter().map(|e| e.to_string()).collect();
                w.write_record([
                    r.complex.clone(),
                    r.s.to_string(),
                    r.t.to_string(),
                    r.stem.to_string(),
                    r.dim.to_string(),
                    r.labels.join(" "),
                    reps.join("; "),
                ])?;
            }
            csv_string(w)?
        }
    })
}

fn sq0_row(lam: &Lambda, cache: &Cache, err: &mut dyn Write, s: u32, t: u32) -> Result<Sq0Kernel, CliError> {
    cache.get_or_compute(&CacheKey::new("sq0", s, t), err, || Ok::<_, CliError>(lam.sq0_kernel(s, t)?))
}

fn sq0_output(format: Format, rows: &[Sq0Kernel]) -> Result<String, CliError> {
    let labels = |k: &Sq0Kernel| k.kernel.iter().map(|e| e.leading_term().map(Monomial::label).unwrap_or_default()).collect::<Vec<_>>();
    Ok(match format {
        Format::Text => {
            let mut s = String::new();
            for k in rows {
                let _ = write!(s, "t={}: {} -> {}, rank {}", k.bidegree.t, k.source_dim, k.target_dim, k.rank);
                if !k.kernel.is_empty() {
                    let _ = write!(s, ", kernel {}", labels(k).join(" "));
                }
                s.push('\n');
            }
            s
        }
        Format::Json => json(&rows)?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["s", "t", "source_dim", "target_dim", "rank", "kernel"])?;
            for k in rows {
                w.write_record([
                    k.bidegree.s.to_string(),
                    k.bidegree.t.to_string(),
                    k.source_dim.to_string(),
                    k.target_dim.to_string(),
                    k.rank.to_string(),
                    labels(k).join(" "),
                ])?;
            }
            csv_string(w)?
        }
    })
}

fn bss_report(lam: &Lambda, cache: &Cache, err: &mut dyn Write, line: u32, u_max: u32) -> Result<SSReport, CliError> {
    cache.get_or_compute(&CacheKey::new("bss", line, u_max), err, || Ok::<_, CliError>(lam.bss_run(line, u_max)?))
}

fn bss_output(format: Format, report: &SSReport, check: Option<&ConsistencyReport>) -> Result<String, CliError> {
    let diffs: Vec<_> = report.differentials().collect();
    Ok(match format {
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "line {}, u <= {}: {} differential(s)", report.line, report.u_max, diffs.len());
            for d in &diffs {
                let _ = writeln!(s, "d{} at u={}: {} -> {} (abutment {})", d.r, d.u, d.source_label, d.target_label, d.abutment.leading_term().map(Monomial::label).unwrap_or_default());
            }
            let survivors: usize = report.slots.iter().map(|sl| sl.e_infinity().dim).sum();
            let _ = writeln!(s, "classes surviving to E_inf: {survivors}");
            if let Some(c) = check {
                let failed = c.checks.iter().filter(|c| !c.ok).count();
                if failed == 0 {
                    let _ = writeln!(s, "check: ok ({} checks)", c.checks.len());
                } else {
                    let _ = writeln!(s, "check: {failed} of {} checks failed", c.checks.len());
                }
            }
            s
        }
        Format::Json => json(&BssOutput { report, check })?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["r", "n", "u", "source_label", "target_label", "source", "target", "abutment"])?;
            for d in &diffs {
                w.write_record([
                    d.r.to_string(),
                    d.n.to_string(),
                    d.u.to_string(),
                    d.source_label.clone(),
                    d.target_label.clone(),
                    d.source.to_string(),
                    d.target.to_string(),
                    d.abutment.to_string(),
                ])?;
            }
            csv_string(w)?
        }
    })
}

fn figure_key(mode: LabelMode, max_stem: u32, max_filt: u32) -> CacheKey {
    let name = match mode {
        LabelMode::Figure => "figure1",
        LabelMode::MinLeading => "figure1-min-leading",
    };
    CacheKey::new(name, max_filt, max_stem)
}

fn figure_chart(lam: &Lambda, cache: &Cache, err: &mut dyn Write, max_stem: u32, max_filt: u32, mode: LabelMode) -> Result<Chart, CliError> {
    cache.get_or_compute(&figure_key(mode, max_stem, max_filt), err, || chart::build_chart(lam, max_stem, max_filt, mode))
}

fn parse_dyadic_element(text: &str) -> Result<DyadicElement, CliError> {
    text.parse::<DyadicElement>().map_err(|e| CliError::Usage(format!("{text:?}: {e}")))
}

fn parse_dyadic(text: &str) -> Result<DyadicRational, CliError> {
    text.parse::<DyadicRational>().map_err(|e| CliError::Usage(format!("{text:?}: {e}")))
}

fn dyadic_output(format: Format, input: &str, e: &DyadicElement) -> Result<String, CliError> {
    Ok(match format {
        Format::Text => format!("{e}\n"),
        Format::Json => json(&DyadicReport { input, result: e.to_string(), value: e })?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["monomial", "level"])?;
            for m in e.terms() {
                w.write_record([m.to_string(), m.level().to_string()])?;
            }
            csv_string(w)?
        }
    })
}

fn cocomplete(lam: &Lambda, format: Format, cmd: &CocompleteCommand, out: &mut dyn Write) -> Result<(), CliError> {
    match cmd {
        CocompleteCommand::Normalize { element, direct } => {
            let x = parse_dyadic_element(element)?;
            let e = if *direct { lam.normalize_dyadic_direct(&x)? } else { lam.normalize_dyadic(&x)? };
            emit(out, &dyadic_output(format, element, &e)?)
        }
        CocompleteCommand::Diff { element, method } => {
            let x = parse_dyadic_element(element)?;
            let e = match method {
                DiffMethod::Scaled => lam.d_dyadic(&x)?,
                DiffMethod::Direct => lam.d_dyadic_direct(&x)?,
                DiffMethod::Naive => match x.terms() {
                    [m] if m.len() == 1 => lam.normalize_dyadic(&d_generator_dyadic_naive(m.subscripts()[0]))?,
                    _ => return Err(CliError::Usage("--method naive takes a single generator".into())),
                },
            };
            emit(out, &dyadic_output(format, element, &e)?)
        }
        CocompleteCommand::Orbit { n } => {
            let n = parse_dyadic(n)?;
            let rep = lforge::orbit_rep(n)?;
            let text = match format {
                Format::Text => format!("{rep}\n"),
                Format::Json => json(&serde_json::json!({ "n": n, "orbit_rep": rep }))?,
                Format::Csv => format!("n,orbit_rep\n{n},{rep}\n"),
            };
            emit(out, &text)
        }
        CocompleteCommand::Locext { s, u, levels } => {
            let r = lam.localized_ext(*s, parse_dyadic(u)?, *levels)?;
            emit(out, &locext_output(format, &r)?)
        }
    }
}

fn locext_output(format: Format, r: &LocalizedExtReport) -> Result<String, CliError> {
    Ok(match format {
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "H^{{{},{}}} of the localization", r.s, r.u);
            for (i, l) in r.levels.iter().enumerate() {
                let _ = write!(s, "  k={} t={} dim {}", l.k, l.t, l.dim);
                if let Some(rank) = r.map_ranks.get(i) {
                    let _ = write!(s, "  --Sq0 rank {rank}-->");
                }
                s.push('\n');
            }
            let _ = writeln!(s, "composite rank {}, stabilized {}", r.composite_rank, r.stabilized);
            s
        }
        Format::Json => json(r)?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["k", "t", "dim", "rank_to_next"])?;
            for (i, l) in r.levels.iter().enumerate() {
                w.write_record([l.k.to_string(), l.t.to_string(), l.dim.to_string(), r.map_ranks.get(i).map(|x| x.to_string()).unwrap_or_default()])?;
            }
            csv_string(w)?
        }
    })
}

/// Recomputes the payload a record should hold, or `None` for an unknown key.
fn recompute(lam: &Lambda, key: &CacheKey) -> Result<Option<String>, CliError> {
    let payload = match key.kind.as_str() {
        "sq0" => serde_json::to_string(&lam.sq0_kernel(key.s, key.t)?)?,
        "bss" => serde_json::to_string(&lam.bss_run(key.s, key.t)?)?,
        "figure1" => serde_json::to_string(&chart::build_chart(lam, key.t, key.s, LabelMode::Figure)?)?,
        "figure1-min-leading" => serde_json::to_string(&chart::build_chart(lam, key.t, key.s, LabelMode::MinLeading)?)?,
        other => match other.parse::<ComplexKind>() {
            Ok(kind) => serde_json::to_string(&compute_cohomology(lam, kind, key.s, key.t)?)?,
            Err(_) => return Ok(None),
        },
    };
    Ok(Some(payload))
}

fn cache_command(lam: &Lambda, cache: &Cache, cmd: &CacheCommand, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    match cmd {
        CacheCommand::Clear => {
            let n = cache.clear()?;
            emit(out, &format!("removed {n} record(s) from {}\n", cache.root().display()))
        }
        CacheCommand::Verify { recompute: fresh } => {
            let mut bad = 0;
            let records = cache.records()?;
            for (path, rec) in &records {
                let status = match rec {
                    Err(reason) => Err(format!("corrupt: {reason}")),
                    Ok(rec) if *fresh => match recompute(lam, &rec.key)? {
                        Some(p) if p == rec.payload => Ok("ok, matches recomputation"),
                        Some(_) => Err("differs from recomputation".to_string()),
                        None => Ok("ok, unknown key not recomputed"),
                    },
                    Ok(_) => Ok("ok"),
                };
                match status {
                    Ok(msg) => emit(out, &format!("{}: {msg}\n", path.display()))?,
                    Err(msg) => {
                        bad += 1;
                        let _ = writeln!(err, "{}: {msg}", path.display());
                    }
                }
            }
            emit(out, &format!("{} record(s), {bad} bad\n", records.len()))?;
            if bad > 0 {
                return Err(CliError::Check(format!("{bad} bad cache record(s); run `lforge cache clear`")));
            }
            Ok(())
        }
    }
}
