//! Serialization of the exchange formats: JSON documents for models,
//! inequalities, systems, and quantum inputs, plus the plaintext renderings
//! used in reports.
//!
//! Local cells appear as bitstrings whose character `j` is the outcome of
//! the context's variable at sorted position `j`; global assignments use
//! the same convention over the whole variable list. Probabilities and
//! coefficients are exact `p/q` strings (`p` alone when the denominator
//! is 1).

use std::collections::BTreeMap;

use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::contextuality::NoncontextualDecomposition;
use crate::inequalities::{CorrelationInequality, LogicalBellInequality, RationalInequality};
use crate::logic::{Formula, FormulaMultiset, TaggedFormula};
use crate::model::{EmpiricalModel, MeasurementCover, SupportModel};
use crate::polytope::InequalitySet;
use crate::quantum::{CMatrix, DichotomicObservable, ObservableAssignment};
use crate::{Error, Int, Rat, RatSystem, Result};

fn bad(e: impl std::fmt::Display) -> Error {
    Error::BadDocument(e.to_string())
}

/// Parse an exact rational from `p/q` or plain `p`.
pub fn parse_rat(text: &str) -> Result<Rat> {
    let reject = || Error::BadRational(text.to_string());
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (text, None),
    };
    let num: Int = num.trim().parse().map_err(|_| reject())?;
    let den: Int = match den {
        Some(d) => d.trim().parse().map_err(|_| reject())?,
        None => Int::one(),
    };
    if den.is_zero() {
        return Err(reject());
    }
    Ok(Rat::new(num, den))
}

/// Render an exact rational as `p/q`, or `p` when the denominator is 1.
pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Human-oriented rendering: the exact value with a decimal approximation
/// in parentheses for non-integers, e.g. `3/8 (0.375)`.
pub fn pretty_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        let approx = r.to_f64().unwrap_or(f64::NAN);
        format!("{} ({})", format_rat(r), approx)
    }
}

/// Cell index to bitstring; character `j` is bit `j`.
pub fn cell_to_bits(cell: u32, width: usize) -> String {
    (0..width)
        .map(|j| if (cell >> j) & 1 == 1 { '1' } else { '0' })
        .collect()
}

/// Bitstring to cell index, enforcing the context width.
pub fn bits_to_cell(bits: &str, width: usize) -> Result<u32> {
    if bits.len() != width {
        return Err(bad(format!(
            "bitstring `{bits}` has {} characters, expected {width}",
            bits.len()
        )));
    }
    let mut cell = 0u32;
    for (j, ch) in bits.chars().enumerate() {
        match ch {
            '0' => {}
            '1' => cell |= 1 << j,
            _ => return Err(bad(format!("bitstring `{bits}` contains `{ch}`"))),
        }
    }
    Ok(cell)
}

#[derive(Serialize, Deserialize)]
struct ModelDoc {
    variables: Vec<String>,
    contexts: Vec<Vec<String>>,
    rows: BTreeMap<String, BTreeMap<String, String>>,
}

#[derive(Serialize, Deserialize)]
struct SupportDoc {
    variables: Vec<String>,
    contexts: Vec<Vec<String>>,
    rows: BTreeMap<String, Vec<String>>,
}

fn cover_of(variables: Vec<String>, contexts: Vec<Vec<String>>) -> Result<MeasurementCover> {
    MeasurementCover::new(variables, contexts)
}

fn cover_doc(cover: &MeasurementCover) -> (Vec<String>, Vec<Vec<String>>) {
    (
        cover.variables().to_vec(),
        (0..cover.n_contexts())
            .map(|c| cover.context_names(c))
            .collect(),
    )
}

fn context_key(doc_key: &str, n_contexts: usize) -> Result<usize> {
    let c: usize = doc_key
        .parse()
        .map_err(|_| bad(format!("context key `{doc_key}` is not an index")))?;
    if c >= n_contexts {
        return Err(bad(format!(
            "context index {c} out of range, cover has {n_contexts}"
        )));
    }
    Ok(c)
}

pub fn write_model(m: &EmpiricalModel) -> String {
    let cover = m.cover();
    let (variables, contexts) = cover_doc(cover);
    let mut rows = BTreeMap::new();
    for c in 0..cover.n_contexts() {
        let width = cover.context_size(c);
        let mut row = BTreeMap::new();
        for cell in 0..cover.n_cells(c) {
            let p = m.prob(c, cell);
            if !p.is_zero() {
                row.insert(cell_to_bits(cell, width), format_rat(p));
            }
        }
        rows.insert(c.to_string(), row);
    }
    let doc = ModelDoc {
        variables,
        contexts,
        rows,
    };
    serde_json::to_string_pretty(&doc).expect("plain data serializes")
}

pub fn read_model(text: &str) -> Result<EmpiricalModel> {
    let doc: ModelDoc = serde_json::from_str(text).map_err(bad)?;
    let cover = cover_of(doc.variables, doc.contexts)?;
    let mut rows: Vec<Vec<Rat>> = (0..cover.n_contexts())
        .map(|c| vec![Rat::zero(); cover.n_cells(c) as usize])
        .collect();
    for (key, cells) in &doc.rows {
        let c = context_key(key, cover.n_contexts())?;
        for (bits, p) in cells {
            let cell = bits_to_cell(bits, cover.context_size(c))?;
            rows[c][cell as usize] = parse_rat(p)?;
        }
    }
    EmpiricalModel::new(cover, rows)
}

pub fn write_support(sm: &SupportModel) -> String {
    let cover = sm.cover();
    let (variables, contexts) = cover_doc(cover);
    let mut rows = BTreeMap::new();
    for c in 0..cover.n_contexts() {
        let width = cover.context_size(c);
        rows.insert(
            c.to_string(),
            sm.support(c)
                .iter()
                .map(|&cell| cell_to_bits(cell, width))
                .collect(),
        );
    }
    let doc = SupportDoc {
        variables,
        contexts,
        rows,
    };
    serde_json::to_string_pretty(&doc).expect("plain data serializes")
}

pub fn read_support(text: &str) -> Result<SupportModel> {
    let doc: SupportDoc = serde_json::from_str(text).map_err(bad)?;
    let cover = cover_of(doc.variables, doc.contexts)?;
    let mut supports: Vec<std::collections::BTreeSet<u32>> =
        vec![Default::default(); cover.n_contexts()];
    for (key, cells) in &doc.rows {
        let c = context_key(key, cover.n_contexts())?;
        for bits in cells {
            supports[c].insert(bits_to_cell(bits, cover.context_size(c))?);
        }
    }
    SupportModel::new(cover, supports)
}

#[derive(Serialize, Deserialize)]
struct MultisetEntryDoc {
    k: u64,
    context: Vec<String>,
    formula: String,
}

pub fn write_multiset(ms: &FormulaMultiset) -> String {
    let entries: Vec<MultisetEntryDoc> = ms
        .entries()
        .iter()
        .map(|(k, tf)| MultisetEntryDoc {
            k: *k,
            context: tf.context().to_vec(),
            formula: tf.formula().to_string(),
        })
        .collect();
    serde_json::to_string_pretty(&entries).expect("plain data serializes")
}

pub fn read_multiset(text: &str) -> Result<FormulaMultiset> {
    let entries: Vec<MultisetEntryDoc> = serde_json::from_str(text).map_err(bad)?;
    let mut ms = FormulaMultiset::new();
    for e in entries {
        let formula = Formula::parse(&e.formula)?;
        ms.push(e.k, TaggedFormula::new(e.context, formula)?);
    }
    Ok(ms)
}

#[derive(Serialize, Deserialize)]
struct LogicalDoc {
    multiset: Vec<MultisetEntryDoc>,
    bound: u64,
}

pub fn write_logical(ineq: &LogicalBellInequality) -> String {
    let multiset: Vec<MultisetEntryDoc> = ineq
        .multiset()
        .entries()
        .iter()
        .map(|(k, tf)| MultisetEntryDoc {
            k: *k,
            context: tf.context().to_vec(),
            formula: tf.formula().to_string(),
        })
        .collect();
    let doc = LogicalDoc {
        multiset,
        bound: ineq.bound(),
    };
    serde_json::to_string_pretty(&doc).expect("plain data serializes")
}

/// Read a logical inequality, taking the stated bound on faith; callers
/// can re-check with `verify_consistency`.
pub fn read_logical(text: &str) -> Result<LogicalBellInequality> {
    let doc: LogicalDoc = serde_json::from_str(text).map_err(bad)?;
    let mut ms = FormulaMultiset::new();
    for e in doc.multiset {
        let formula = Formula::parse(&e.formula)?;
        ms.push(e.k, TaggedFormula::new(e.context, formula)?);
    }
    Ok(LogicalBellInequality::new_unchecked(ms, doc.bound))
}

#[derive(Serialize, Deserialize)]
struct RationalDoc {
    coeffs: BTreeMap<String, String>,
    bound: String,
}

fn rational_doc(cover: &MeasurementCover, ineq: &RationalInequality) -> RationalDoc {
    let mut coeffs = BTreeMap::new();
    for c in 0..cover.n_contexts() {
        let width = cover.context_size(c);
        let offset = cover.row_offset(c);
        for cell in 0..cover.n_cells(c) {
            let r = &ineq.coeffs()[offset + cell as usize];
            if !r.is_zero() {
                coeffs.insert(format!("{c}:{}", cell_to_bits(cell, width)), format_rat(r));
            }
        }
    }
    RationalDoc {
        coeffs,
        bound: format_rat(ineq.bound()),
    }
}

fn rational_of(cover: &MeasurementCover, doc: &RationalDoc) -> Result<RationalInequality> {
    let mut coeffs = vec![Rat::zero(); cover.n_table_cells()];
    for (key, value) in &doc.coeffs {
        let (ctx, bits) = key
            .split_once(':')
            .ok_or_else(|| bad(format!("cell key `{key}` is not `<context>:<bits>`")))?;
        let c = context_key(ctx, cover.n_contexts())?;
        let cell = bits_to_cell(bits, cover.context_size(c))?;
        coeffs[cover.row_offset(c) + cell as usize] = parse_rat(value)?;
    }
    RationalInequality::new(cover, coeffs, parse_rat(&doc.bound)?)
}

pub fn write_rational(cover: &MeasurementCover, ineq: &RationalInequality) -> String {
    serde_json::to_string_pretty(&rational_doc(cover, ineq)).expect("plain data serializes")
}

pub fn read_rational(cover: &MeasurementCover, text: &str) -> Result<RationalInequality> {
    let doc: RationalDoc = serde_json::from_str(text).map_err(bad)?;
    rational_of(cover, &doc)
}

#[derive(Serialize, Deserialize)]
struct CorrelationDoc {
    coeffs: BTreeMap<String, i64>,
    bound: i64,
}

pub fn write_correlation(cover: &MeasurementCover, ineq: &CorrelationInequality) -> String {
    debug_assert_eq!(ineq.coeffs().len(), cover.n_contexts());
    let mut coeffs = BTreeMap::new();
    for (c, l) in ineq.coeffs().iter().enumerate() {
        if !l.is_zero() {
            let l = l.to_i64().expect("correlation coefficients stay small");
            coeffs.insert(c.to_string(), l);
        }
    }
    let doc = CorrelationDoc {
        coeffs,
        bound: ineq
            .bound()
            .to_i64()
            .expect("correlation bounds stay small"),
    };
    serde_json::to_string_pretty(&doc).expect("plain data serializes")
}

pub fn read_correlation(cover: &MeasurementCover, text: &str) -> Result<CorrelationInequality> {
    let doc: CorrelationDoc = serde_json::from_str(text).map_err(bad)?;
    let mut coeffs = vec![Int::zero(); cover.n_contexts()];
    for (key, l) in &doc.coeffs {
        let c = context_key(key, cover.n_contexts())?;
        coeffs[c] = Int::from(*l);
    }
    CorrelationInequality::new(cover, coeffs, Int::from(doc.bound))
}

pub fn write_decomposition(d: &NoncontextualDecomposition) -> String {
    let n = d.cover().n_vars();
    let map: BTreeMap<String, String> = d
        .weights()
        .iter()
        .map(|(&bits, w)| (cell_to_bits(bits, n), format_rat(w)))
        .collect();
    serde_json::to_string_pretty(&map).expect("plain data serializes")
}

pub fn read_decomposition(
    cover: &MeasurementCover,
    text: &str,
) -> Result<NoncontextualDecomposition> {
    let map: BTreeMap<String, String> = serde_json::from_str(text).map_err(bad)?;
    let mut weights = BTreeMap::new();
    for (bits, w) in &map {
        weights.insert(bits_to_cell(bits, cover.n_vars())?, parse_rat(w)?);
    }
    NoncontextualDecomposition::new(cover.clone(), weights)
}

#[derive(Serialize, Deserialize)]
struct LinearRowDoc {
    coeffs: Vec<String>,
    rhs: String,
}

#[derive(Serialize, Deserialize)]
struct LinearSystemDoc {
    n_vars: usize,
    rows: Vec<LinearRowDoc>,
}

/// Rows are `coeffs . x <= rhs`.
pub fn write_linear_system(sys: &RatSystem) -> String {
    let doc = LinearSystemDoc {
        n_vars: sys.n_vars(),
        rows: sys
            .rows()
            .iter()
            .map(|r| LinearRowDoc {
                coeffs: r.coeffs.iter().map(format_rat).collect(),
                rhs: format_rat(&r.rhs),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("plain data serializes")
}

pub fn read_linear_system(text: &str) -> Result<RatSystem> {
    let doc: LinearSystemDoc = serde_json::from_str(text).map_err(bad)?;
    let mut sys = RatSystem::new(doc.n_vars);
    for row in &doc.rows {
        if row.coeffs.len() != doc.n_vars {
            return Err(bad(format!(
                "row has {} coefficients, system has {} variables",
                row.coeffs.len(),
                doc.n_vars
            )));
        }
        let coeffs = row
            .coeffs
            .iter()
            .map(|s| parse_rat(s))
            .collect::<Result<Vec<Rat>>>()?;
        sys.push(coeffs, parse_rat(&row.rhs)?);
    }
    Ok(sys)
}

#[derive(Serialize, Deserialize)]
struct InequalitySetDoc {
    inequalities: Vec<RationalDoc>,
}

pub fn write_inequality_set(cover: &MeasurementCover, set: &InequalitySet) -> String {
    let doc = InequalitySetDoc {
        inequalities: set
            .inequalities()
            .iter()
            .map(|r| rational_doc(cover, r))
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("plain data serializes")
}

pub fn read_inequality_set(cover: &MeasurementCover, text: &str) -> Result<InequalitySet> {
    let doc: InequalitySetDoc = serde_json::from_str(text).map_err(bad)?;
    let rows = doc
        .inequalities
        .iter()
        .map(|d| rational_of(cover, d))
        .collect::<Result<Vec<_>>>()?;
    Ok(InequalitySet::new(cover.n_table_cells(), rows))
}

#[derive(Serialize, Deserialize)]
struct ObservablesDoc {
    dim: usize,
    /// Outcome-0 projectors as row-major `[re, im]` entries; the outcome-1
    /// projector is the complement.
    observables: BTreeMap<String, Vec<[f64; 2]>>,
}

pub fn write_observables(obs: &ObservableAssignment) -> String {
    let d = obs.dim();
    let mut observables = BTreeMap::new();
    for name in obs.names() {
        let p0 = obs.get(name).expect("iterating own names").projector(0);
        let mut flat = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                let z = p0.get(i, j);
                flat.push([z.re, z.im]);
            }
        }
        observables.insert(name.clone(), flat);
    }
    let doc = ObservablesDoc {
        dim: d,
        observables,
    };
    serde_json::to_string_pretty(&doc).expect("plain data serializes")
}

pub fn read_observables(text: &str) -> Result<ObservableAssignment> {
    let doc: ObservablesDoc = serde_json::from_str(text).map_err(bad)?;
    let mut obs = ObservableAssignment::new(doc.dim)?;
    for (name, flat) in &doc.observables {
        if flat.len() != doc.dim * doc.dim {
            return Err(bad(format!(
                "matrix for `{name}` has {} entries, expected {}",
                flat.len(),
                doc.dim * doc.dim
            )));
        }
        let mut p0 = CMatrix::zeros(doc.dim);
        for (k, &[re, im]) in flat.iter().enumerate() {
            p0.set(k / doc.dim, k % doc.dim, num_complex::Complex64::new(re, im));
        }
        let observable = DichotomicObservable::from_projector(p0).map_err(|e| match e {
            Error::NotAProjector { reason, .. } => Error::NotAProjector {
                variable: name.clone(),
                reason,
            },
            other => other,
        })?;
        obs.insert(name, observable)?;
    }
    Ok(obs)
}

#[derive(Serialize, Deserialize)]
struct RaysDoc {
    rays: Vec<Vec<f64>>,
}

pub fn write_rays(rays: &[Vec<f64>]) -> String {
    let doc = RaysDoc {
        rays: rays.to_vec(),
    };
    serde_json::to_string_pretty(&doc).expect("plain data serializes")
}

pub fn read_rays(text: &str) -> Result<Vec<Vec<f64>>> {
    let doc: RaysDoc = serde_json::from_str(text).map_err(bad)?;
    Ok(doc.rays)
}

/// `2 p(00|a,b) - p(11|a',b') <= 1/2` style rendering.
pub fn render_rational(cover: &MeasurementCover, ineq: &RationalInequality) -> String {
    let mut terms: Vec<(Rat, String)> = Vec::new();
    for c in 0..cover.n_contexts() {
        let width = cover.context_size(c);
        let offset = cover.row_offset(c);
        let names = cover.context_names(c).join(",");
        for cell in 0..cover.n_cells(c) {
            let r = &ineq.coeffs()[offset + cell as usize];
            if !r.is_zero() {
                let atom = format!("p({}|{})", cell_to_bits(cell, width), names);
                terms.push((r.clone(), atom));
            }
        }
    }
    render_terms(terms, &format_rat(ineq.bound()))
}

/// `E(a,b) + E(a,b') + E(a',b) - E(a',b') <= 2` style rendering.
pub fn render_correlation(cover: &MeasurementCover, ineq: &CorrelationInequality) -> String {
    let terms: Vec<(Rat, String)> = ineq
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, l)| !l.is_zero())
        .map(|(c, l)| {
            (
                Rat::from_integer(l.clone()),
                format!("E({})", cover.context_names(c).join(",")),
            )
        })
        .collect();
    render_terms(terms, &ineq.bound().to_string())
}

/// `2 p(a <-> b) + p(!(a & b)) <= 3` style rendering.
pub fn render_logical(ineq: &LogicalBellInequality) -> String {
    let terms: Vec<(Rat, String)> = ineq
        .multiset()
        .entries()
        .iter()
        .map(|(k, tf)| {
            (
                Rat::from_integer(Int::from(*k)),
                format!("p({})", tf.formula()),
            )
        })
        .collect();
    render_terms(terms, &ineq.bound().to_string())
}

fn render_terms(terms: Vec<(Rat, String)>, bound: &str) -> String {
    if terms.is_empty() {
        return format!("0 <= {bound}");
    }
    let mut out = String::new();
    for (i, (coeff, atom)) in terms.iter().enumerate() {
        let mag = coeff.abs();
        if i == 0 {
            if coeff.is_negative() {
                out.push('-');
            }
        } else if coeff.is_negative() {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        if !mag.is_one() {
            out.push_str(&format_rat(&mag));
            out.push(' ');
        }
        out.push_str(atom);
    }
    format!("{out} <= {bound}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contextuality::find_noncontextual_decomposition;
    use crate::inequalities::canonical_support_inequality;
    use crate::model::bell_scenario_cover;
    use crate::polytope::noncontextual_polytope;
    use crate::{rat, rat_int, zoo, DEFAULT_VAR_LIMIT};

    #[test]
    fn rational_strings() {
        assert_eq!(parse_rat("3/8").unwrap(), rat(3, 8));
        assert_eq!(parse_rat("-2").unwrap(), rat_int(-2));
        assert_eq!(parse_rat(" 1 / 2 ").unwrap(), rat(1, 2));
        assert_eq!(parse_rat("4/6").unwrap(), rat(2, 3));
        assert!(matches!(parse_rat("1/0"), Err(Error::BadRational(_))));
        assert!(matches!(parse_rat("x"), Err(Error::BadRational(_))));
        assert!(matches!(parse_rat("1/2/3"), Err(Error::BadRational(_))));
        assert_eq!(format_rat(&rat(-1, 2)), "-1/2");
        assert_eq!(format_rat(&rat_int(7)), "7");
        assert_eq!(pretty_rat(&rat(3, 8)), "3/8 (0.375)");
        assert_eq!(pretty_rat(&rat_int(2)), "2");
    }

    #[test]
    fn bitstrings_use_position_for_character_index() {
        assert_eq!(cell_to_bits(0b011, 3), "110");
        assert_eq!(bits_to_cell("110", 3).unwrap(), 0b011);
        assert!(bits_to_cell("01", 3).is_err());
        assert!(bits_to_cell("01x", 3).is_err());
    }

    #[test]
    fn model_documents_round_trip() {
        let m = zoo::bell_model();
        let read = read_model(&write_model(&m)).unwrap();
        assert_eq!(read, m);
    }

    #[test]
    fn model_documents_have_the_documented_shape() {
        let text = r#"{
            "variables": ["a", "b"],
            "contexts": [["a", "b"]],
            "rows": { "0": { "00": "1/2", "11": "1/2" } }
        }"#;
        let m = read_model(text).unwrap();
        assert_eq!(m.prob(0, 0b00), &rat(1, 2));
        assert_eq!(m.prob(0, 0b01), &rat_int(0));
        let v: serde_json::Value = serde_json::from_str(&write_model(&m)).unwrap();
        assert_eq!(v["rows"]["0"]["00"], "1/2");
        assert!(v["rows"]["0"].get("01").is_none());
    }

    #[test]
    fn support_documents_round_trip() {
        let sm = zoo::hardy_support();
        let read = read_support(&write_support(&sm)).unwrap();
        assert_eq!(read, sm);
        let v: serde_json::Value = serde_json::from_str(&write_support(&sm)).unwrap();
        assert!(v["rows"]["0"].is_array());
    }

    #[test]
    fn multiset_and_logical_documents_round_trip() {
        let model = zoo::bell_model();
        let ineq = canonical_support_inequality(&model.support(), DEFAULT_VAR_LIMIT).unwrap();
        let read = read_logical(&write_logical(&ineq)).unwrap();
        assert_eq!(read.bound(), ineq.bound());
        assert_eq!(
            read.multiset().entries().len(),
            ineq.multiset().entries().len()
        );
        for ((k1, t1), (k2, t2)) in read
            .multiset()
            .entries()
            .iter()
            .zip(ineq.multiset().entries())
        {
            assert_eq!(k1, k2);
            assert_eq!(t1.context(), t2.context());
            assert_eq!(t1.formula(), t2.formula());
        }
        let ms = read_multiset(&write_multiset(ineq.multiset())).unwrap();
        assert_eq!(ms.entries().len(), ineq.multiset().entries().len());
    }

    #[test]
    fn formula_text_survives_every_operator() {
        let text = r#"[{ "k": 3, "context": ["a", "b", "c"],
                        "formula": "!(a & b) | (a ^ c) <-> TRUE" }]"#;
        let ms = read_multiset(text).unwrap();
        let back = read_multiset(&write_multiset(&ms)).unwrap();
        assert_eq!(ms.entries()[0].1.formula(), back.entries()[0].1.formula());
        assert_eq!(back.entries()[0].0, 3);
    }

    #[test]
    fn rational_documents_round_trip() {
        let cover = bell_scenario_cover(2, 2, 1).unwrap();
        let mut coeffs = vec![Rat::zero(); cover.n_table_cells()];
        coeffs[0] = rat_int(2);
        coeffs[7] = rat(-1, 2);
        let ineq = RationalInequality::new(&cover, coeffs, rat(3, 2)).unwrap();
        let text = write_rational(&cover, &ineq);
        let read = read_rational(&cover, &text).unwrap();
        assert_eq!(read, ineq);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["coeffs"]["0:00"], "2");
        assert_eq!(v["coeffs"]["1:11"], "-1/2");
        assert_eq!(v["bound"], "3/2");
    }

    #[test]
    fn correlation_documents_round_trip() {
        let (cover, ineq) = zoo::werner_wolf_a2();
        let text = write_correlation(&cover, &ineq);
        let read = read_correlation(&cover, &text).unwrap();
        assert_eq!(read, ineq);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["coeffs"]["7"], -3);
        assert_eq!(v["bound"], 4);
    }

    #[test]
    fn decomposition_documents_round_trip() {
        let cover = bell_scenario_cover(2, 2, 1).unwrap();
        let models = [
            EmpiricalModel::deterministic(
                &cover,
                &crate::model::GlobalAssignment::from_bits(0b0110, 4),
            ),
            EmpiricalModel::deterministic(
                &cover,
                &crate::model::GlobalAssignment::from_bits(0b1001, 4),
            ),
        ];
        let mixed = EmpiricalModel::mix(&models, &[rat(1, 3), rat(2, 3)]).unwrap();
        let d = find_noncontextual_decomposition(&mixed, DEFAULT_VAR_LIMIT)
            .unwrap()
            .expect("mixture of deterministic models decomposes");
        let read = read_decomposition(&cover, &write_decomposition(&d)).unwrap();
        assert_eq!(read, d);
        assert_eq!(read.reconstruct().unwrap(), mixed);
    }

    #[test]
    fn linear_system_documents_round_trip() {
        let mut sys = RatSystem::new(2);
        sys.push(vec![rat_int(1), rat(-1, 2)], rat_int(0));
        sys.push_equality(vec![rat_int(1), rat_int(1)], rat_int(1));
        let read = read_linear_system(&write_linear_system(&sys)).unwrap();
        assert_eq!(read.rows(), sys.rows());
    }

    #[test]
    fn inequality_set_documents_round_trip() {
        let cover = crate::model::MeasurementCover::from_names(
            &["a", "b"],
            &[&["a", "b"]],
        )
        .unwrap();
        let set = noncontextual_polytope(&cover, DEFAULT_VAR_LIMIT).unwrap();
        let read = read_inequality_set(&cover, &write_inequality_set(&cover, &set)).unwrap();
        assert_eq!(read.inequalities(), set.inequalities());
    }

    #[test]
    fn observable_documents_round_trip() {
        let (_, obs) = crate::quantum::bell_xy_assignment().unwrap();
        let text = write_observables(&obs);
        let read = read_observables(&text).unwrap();
        assert_eq!(read.dim(), obs.dim());
        for name in obs.names() {
            let a = obs.get(name).unwrap().projector(0);
            let b = read.get(name).unwrap().projector(0);
            assert!(a.max_abs_diff(b) == 0.0, "projector for {name} drifted");
        }
        let bad_doc = r#"{ "dim": 2, "observables": { "a": [[1,0],[1,0],[0,0],[0,0]] } }"#;
        assert!(matches!(
            read_observables(bad_doc),
            Err(Error::NotAProjector { variable, .. }) if variable == "a"
        ));
    }

    #[test]
    fn ray_documents_round_trip() {
        let rays = crate::quantum::ks18_rays();
        let read = read_rays(&write_rays(&rays)).unwrap();
        assert_eq!(read, rays);
    }

    #[test]
    fn plaintext_renderings() {
        let cover = bell_scenario_cover(2, 2, 1).unwrap();
        let chsh = CorrelationInequality::from_i64(&cover, &[1, 1, 1, -1], 2).unwrap();
        assert_eq!(
            render_correlation(&cover, &chsh),
            "E(a,b) + E(a,b') + E(a',b) - E(a',b') <= 2"
        );
        let mut coeffs = vec![Rat::zero(); cover.n_table_cells()];
        coeffs[0] = rat_int(2);
        coeffs[7] = rat(-1, 2);
        let r = RationalInequality::new(&cover, coeffs, rat(3, 2)).unwrap();
        assert_eq!(
            render_rational(&cover, &r),
            "2 p(00|a,b) - 1/2 p(11|a,b') <= 3/2"
        );
    }
}
