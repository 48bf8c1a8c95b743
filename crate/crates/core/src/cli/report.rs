//! Versioned report model and its markdown/JSON/CSV renderings.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::presets::FactorNorm;
use crate::basis_builder::GeneratorSet;
use crate::cleaner::{audit_minimality, AuditEntry, CleaningTrace};
use crate::error::internal;
use crate::harmonic::HarmonicSignature;
use crate::poly_algebra::Parity;
use crate::translator::{check_translation, rat_string, translate, translate_im_trace_form};
use crate::{Group, Mode, Result};

/// Version of the JSON layout below. Bumped on any incompatible change.
pub const REPORT_VERSION: u32 = 1;

/// Seed of the random assignments used by `--verify`.
pub const VERIFY_SEED: u64 = 0x5eed;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub version: u32,
    pub reports: Vec<Report>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputDesc {
    /// `preset`, `signature` or `symmetry`.
    pub kind: String,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignatureDesc {
    pub grammar: String,
    pub pretty: String,
    pub real_dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorDesc {
    /// Variable name (`ξ`, `λ₂`, `z₂a`, …).
    pub name: String,
    pub order: i32,
    /// Squared norm of the basis tensors, as `p/q`.
    pub norm2: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub generators: usize,
    pub invariants: usize,
    pub isotropic: usize,
    pub hemitropic: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorRow {
    pub index: usize,
    pub order: u32,
    pub degree: u32,
    pub formula: String,
    pub formula_ascii: String,
    pub tensorial: String,
    pub tensorial_ascii: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace_form: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace_form_ascii: Option<String>,
    pub parity: Parity,
    pub multidegree: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub input: InputDesc,
    pub signature: SignatureDesc,
    pub group: Group,
    pub mode: Mode,
    pub counts: Counts,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub factors: Vec<FactorDesc>,
    pub generators: Vec<GeneratorRow>,
    /// Random trials per generator the tensorial formulas passed (0: not run).
    pub verified_trials: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cleaning: Option<CleaningTrace>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub audit: Option<Vec<AuditEntry>>,
}

/// What to attach to a report besides the generator table.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ReportOptions {
    pub emit_trace: bool,
    pub verify: usize,
    pub audit: bool,
    pub cleaning_trace: bool,
}

fn factor_descs(set: &GeneratorSet, norms: &[FactorNorm]) -> Vec<FactorDesc> {
    if norms.is_empty() {
        return Vec::new();
    }
    // Under SO(2) pseudo-scalars are listed among the scalars.
    let inv = crate::poly_algebra::Layout::new(&set.signature, set.group, Mode::Invariants);
    let mut out = Vec::new();
    let (minus, rest): (Vec<&FactorNorm>, Vec<&FactorNorm>) = norms.iter().partition(|f| f.order == -1);
    let (zero, planes): (Vec<&FactorNorm>, Vec<&FactorNorm>) = rest.into_iter().partition(|f| f.order == 0);
    let scalars: Vec<&FactorNorm> = match set.group {
        Group::O2 => zero.to_vec(),
        Group::SO2 => zero.iter().chain(minus.iter()).copied().collect(),
    };
    for (k, f) in scalars.iter().enumerate() {
        out.push(FactorDesc { name: inv.scalar_name(true, k, false), order: f.order, norm2: rat_string(&f.norm2) });
    }
    if set.group == Group::O2 {
        for (i, f) in minus.iter().enumerate() {
            out.push(FactorDesc { name: inv.scalar_name(false, i, false), order: -1, norm2: rat_string(&f.norm2) });
        }
    }
    for (i, f) in planes.iter().enumerate() {
        out.push(FactorDesc { name: inv.var_name(i, false), order: f.order, norm2: rat_string(&f.norm2) });
    }
    out
}

/// Build the report of one computed basis.
pub fn build_report(input: InputDesc, set: &GeneratorSet, norms: &[FactorNorm], trace: Option<CleaningTrace>, opts: ReportOptions) -> Result<Report> {
    let layout = &set.layout;
    let rows: Vec<GeneratorRow> = set
        .generators
        .par_iter()
        .enumerate()
        .map(|(i, g)| -> Result<GeneratorRow> {
            let e = translate(g, layout)?;
            if opts.verify > 0 {
                check_translation(g, &e, layout, opts.verify, VERIFY_SEED)?;
            }
            let tf = if opts.emit_trace { translate_im_trace_form(g, layout).ok() } else { None };
            if let (Some(t), true) = (&tf, opts.verify > 0) {
                check_translation(g, t, layout, opts.verify, VERIFY_SEED)?;
            }
            Ok(GeneratorRow {
                index: i + 1,
                order: g.order,
                degree: g.degree,
                formula: g.formula(layout, false),
                formula_ascii: g.formula(layout, true),
                tensorial: e.pretty(layout),
                tensorial_ascii: e.to_ascii(),
                trace_form: tf.as_ref().map(|t| t.pretty(layout)),
                trace_form_ascii: tf.as_ref().map(|t| t.to_ascii()),
                parity: g.parity,
                multidegree: g.multidegree.0.clone(),
            })
        })
        .collect::<Result<_>>()?;
    let audit = if opts.audit && set.group == Group::O2 {
        let entries = audit_minimality(set)?;
        if let Some(e) = entries.iter().find(|e| e.redundant()) {
            return internal(format!("generator {} is redundant at {}", e.generator, e.k));
        }
        Some(entries)
    } else {
        None
    };
    let sig: &HarmonicSignature = &set.signature;
    Ok(Report {
        input,
        signature: SignatureDesc { grammar: sig.to_grammar(), pretty: sig.pretty(false), real_dim: sig.real_dim() },
        group: set.group,
        mode: set.mode,
        counts: Counts {
            generators: set.len(),
            invariants: set.invariant_count(),
            isotropic: set.count_by_parity(Parity::Isotropic),
            hemitropic: set.count_by_parity(Parity::Hemitropic),
        },
        factors: factor_descs(set, norms),
        generators: rows,
        verified_trials: opts.verify,
        cleaning: if opts.cleaning_trace { trace } else { None },
        audit,
    })
}

pub fn to_json(doc: &Document) -> Result<String> {
    serde_json::to_string_pretty(doc).map_err(|e| crate::Error::Internal(format!("JSON encoding: {e}")))
}

pub fn from_json(s: &str) -> Result<Document> {
    let doc: Document = serde_json::from_str(s).map_err(|e| crate::Error::Parse(format!("report JSON: {e}")))?;
    if doc.version != REPORT_VERSION {
        return Err(crate::Error::Parse(format!("unsupported report version {}", doc.version)));
    }
    Ok(doc)
}

fn mode_word(mode: Mode, n: usize) -> &'static str {
    match (mode, n == 1) {
        (Mode::Covariants, true) => "covariant",
        (Mode::Covariants, false) => "covariants",
        (Mode::Invariants, true) => "invariant",
        (Mode::Invariants, false) => "invariants",
    }
}

/// Summary line, e.g. `9 covariants (5 invariants); 7 isotropic, 2 hemitropic`.
pub fn summary(r: &Report) -> String {
    let c = &r.counts;
    let head = match r.mode {
        Mode::Covariants => format!("{} {} ({} {})", c.generators, mode_word(r.mode, c.generators), c.invariants, mode_word(Mode::Invariants, c.invariants)),
        Mode::Invariants => format!("{} {}", c.generators, mode_word(r.mode, c.generators)),
    };
    format!("{head}; {} isotropic, {} hemitropic", c.isotropic, c.hemitropic)
}

fn md_escape(s: &str) -> String {
    s.replace('|', "\\|")
}

/// Which optional columns the markdown and CSV renderings carry.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Columns {
    pub ascii: bool,
    pub tensorial_ascii: bool,
    pub trace: bool,
}

pub fn to_markdown(doc: &Document, cols: Columns) -> String {
    let mut out = String::new();
    for (ri, r) in doc.reports.iter().enumerate() {
        if ri > 0 {
            out.push('\n');
        }
        let sig = if cols.ascii {
            HarmonicSignature::parse(&r.signature.grammar).map(|s| s.pretty(true)).unwrap_or_else(|_| r.signature.grammar.clone())
        } else {
            r.signature.pretty.clone()
        };
        out.push_str(&format!("## {}: {} {}\n\n", r.input.value, r.group, match r.mode {
            Mode::Covariants => "covariants",
            Mode::Invariants => "invariants",
        }));
        out.push_str(&format!("Signature: {sig} (`{}`)\n\n", r.signature.grammar));
        if !r.factors.is_empty() {
            let parts: Vec<String> = r.factors.iter().map(|f| format!("|{}|² = {}", f.name, f.norm2)).collect();
            out.push_str(&format!("Basis norms: {}\n\n", parts.join(", ")));
        }
        let mut by_order: BTreeMap<u32, Vec<&GeneratorRow>> = BTreeMap::new();
        for g in &r.generators {
            by_order.entry(g.order).or_default().push(g);
        }
        for (order, rows) in by_order {
            if r.mode == Mode::Covariants {
                out.push_str(&format!("### Order {order}\n\n"));
            }
            let mut head = vec!["#", "order", "degree", "complex formula", "tensorial formula"];
            if cols.tensorial_ascii {
                head.push("tensorial (ascii)");
            }
            if cols.trace {
                head.push("trace form");
            }
            head.push("parity");
            out.push_str(&format!("| {} |\n", head.join(" | ")));
            out.push_str(&format!("|{}\n", "---|".repeat(head.len())));
            for g in rows {
                let formula = if cols.ascii { &g.formula_ascii } else { &g.formula };
                let tens = if cols.ascii { &g.tensorial_ascii } else { &g.tensorial };
                let mut cells = vec![g.index.to_string(), g.order.to_string(), g.degree.to_string(), md_escape(formula), md_escape(tens)];
                if cols.tensorial_ascii {
                    cells.push(format!("`{}`", g.tensorial_ascii));
                }
                if cols.trace {
                    let t = if cols.ascii { &g.trace_form_ascii } else { &g.trace_form };
                    cells.push(t.as_deref().map(md_escape).unwrap_or_default());
                }
                cells.push(parity_word(g.parity).to_string());
                out.push_str(&format!("| {} |\n", cells.join(" | ")));
            }
            out.push('\n');
        }
        out.push_str(&format!("**{}**\n", summary(r)));
        if r.verified_trials > 0 {
            out.push_str(&format!("\nAll tensorial formulas verified on {} random assignments each.\n", r.verified_trials));
        }
        if let Some(a) = &r.audit {
            out.push_str(&format!("\nMinimality audit: {} generators checked, none redundant.\n", a.len()));
        }
    }
    out
}

fn parity_word(p: Parity) -> &'static str {
    match p {
        Parity::Isotropic => "isotropic",
        Parity::Hemitropic => "hemitropic",
    }
}

pub fn to_csv(doc: &Document, cols: Columns) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut head = vec!["input", "group", "mode", "index", "order", "degree", "formula", "tensorial"];
    if cols.trace {
        head.push("trace_form");
    }
    head.extend(["parity", "multidegree"]);
    let err = |e: csv::Error| crate::Error::Internal(format!("CSV encoding: {e}"));
    w.write_record(&head).map_err(err)?;
    for r in &doc.reports {
        for g in &r.generators {
            let (formula, tens, tf) = if cols.ascii {
                (&g.formula_ascii, &g.tensorial_ascii, &g.trace_form_ascii)
            } else {
                (&g.formula, &g.tensorial, &g.trace_form)
            };
            let md: Vec<String> = g.multidegree.iter().map(u32::to_string).collect();
            let mut rec = vec![
                r.input.value.clone(),
                match r.group {
                    Group::SO2 => "so2".into(),
                    Group::O2 => "o2".into(),
                },
                match r.mode {
                    Mode::Covariants => "covariants".into(),
                    Mode::Invariants => "invariants".into(),
                },
                g.index.to_string(),
                g.order.to_string(),
                g.degree.to_string(),
                formula.clone(),
                tens.clone(),
            ];
            if cols.trace {
                rec.push(tf.clone().unwrap_or_default());
            }
            rec.push(parity_word(g.parity).into());
            rec.push(md.join(" "));
            w.write_record(&rec).map_err(err)?;
        }
    }
    let bytes = w.into_inner().map_err(|e| crate::Error::Internal(format!("CSV encoding: {e}")))?;
    String::from_utf8(bytes).map_err(|e| crate::Error::Internal(e.to_string()))
}
