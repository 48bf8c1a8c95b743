//! Command-line front end.
//!
//! ```text
//! o2basis ela --group both --mode covariants
//! o2basis sig "H:2,4" --group so2 --mode invariants
//! o2basis sym "T4 sym=(12),(34)" --format json --verify 20
//! o2basis json report.json --format markdown
//! ```

pub mod presets;
pub mod report;

use std::io::Read;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};

use crate::cleaner::{minimal_basis_with, Strategy};
use crate::harmonic::HarmonicSignature;
use crate::{Error, Group, Mode, Result};
use presets::{find_preset, preset_catalogue, resolve_summands, FactorNorm};
use report::{build_report, Columns, Document, InputDesc, ReportOptions, REPORT_VERSION};

/// Exit status for bad invocations and unparsable input.
pub const EXIT_USAGE: i32 = 2;
/// Exit status when an internal exactness or verification check fails.
pub const EXIT_INTERNAL: i32 = 3;

/// Environment variable overriding the worker thread count.
pub const THREADS_ENV: &str = "O2BASIS_THREADS";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GroupArg {
    So2,
    O2,
    Both,
}

impl GroupArg {
    pub fn groups(self) -> Vec<Group> {
        match self {
            GroupArg::So2 => vec![Group::SO2],
            GroupArg::O2 => vec![Group::O2],
            GroupArg::Both => vec![Group::SO2, Group::O2],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Invariants,
    Covariants,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Invariants => Mode::Invariants,
            ModeArg::Covariants => Mode::Covariants,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Markdown,
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Quotient,
    Full,
}

#[derive(Debug, Parser)]
#[command(name = "o2basis", version, about = "Minimal integrity bases of SO(2)/O(2) invariant and covariant algebras of plane tensors")]
pub struct Args {
    /// A preset name, or `sig <SIGNATURE>`, `sym <SYMMETRY>`, `json <FILE|->`.
    #[arg(value_name = "INPUT", num_args = 0..=2)]
    pub input: Vec<String>,
    #[arg(long, value_enum, default_value = "both")]
    pub group: GroupArg,
    #[arg(long, value_enum, default_value = "covariants")]
    pub mode: ModeArg,
    #[arg(long, value_enum, default_value = "markdown")]
    pub format: Format,
    /// Add a column with the tensorial formula in the ASCII expression grammar.
    #[arg(long)]
    pub emit_tensorial: bool,
    /// Add the trace-power form of generators with an `Im` factor.
    #[arg(long)]
    pub emit_trace: bool,
    /// Check every tensorial formula on N random rational assignments.
    #[arg(long, value_name = "N", default_value_t = 0)]
    pub verify: usize,
    /// Run the minimality audit on O(2) bases.
    #[arg(long)]
    pub audit: bool,
    /// Include the cleaning trace of O(2) bases (JSON only).
    #[arg(long)]
    pub cleaning_trace: bool,
    #[arg(long, value_enum, default_value = "quotient")]
    pub strategy: StrategyArg,
    /// Plain ASCII formulas.
    #[arg(long)]
    pub ascii: bool,
    /// List the presets and exit.
    #[arg(long)]
    pub list_presets: bool,
}

/// What to compute.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Input {
    Preset(String),
    Signature(String),
    Symmetry(String),
    Json(PathBuf),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JobSpec {
    pub input: Input,
    pub groups: Vec<Group>,
    pub mode: Mode,
    pub strategy: Strategy,
    pub options: ReportOptions,
}

impl Input {
    pub fn from_words(words: &[String]) -> Result<Input> {
        match words {
            [] => Err(Error::Parse("missing input (a preset, `sig ...`, `sym ...` or `json ...`)".into())),
            [p] if !matches!(p.as_str(), "sig" | "sym" | "json") => Ok(Input::Preset(p.clone())),
            [k, v] => match k.as_str() {
                "sig" => Ok(Input::Signature(v.clone())),
                "sym" => Ok(Input::Symmetry(v.clone())),
                "json" => Ok(Input::Json(PathBuf::from(v))),
                _ => Err(Error::Parse(format!("unknown input kind `{k}`"))),
            },
            [k] => Err(Error::Parse(format!("`{k}` needs a value"))),
            _ => Err(Error::Parse("too many input words".into())),
        }
    }
}

fn resolve(input: &Input) -> Result<(InputDesc, HarmonicSignature, Vec<FactorNorm>)> {
    match input {
        Input::Preset(name) => {
            let p = find_preset(name)?;
            let (sig, norms) = p.resolve()?;
            Ok((InputDesc { kind: "preset".into(), value: p.name }, sig, norms))
        }
        Input::Signature(s) => {
            let sig = HarmonicSignature::parse(s)?;
            Ok((InputDesc { kind: "signature".into(), value: sig.to_grammar() }, sig, Vec::new()))
        }
        Input::Symmetry(s) => {
            let (sig, norms) = resolve_summands(std::slice::from_ref(s))?;
            Ok((InputDesc { kind: "symmetry".into(), value: s.clone() }, sig, norms))
        }
        Input::Json(_) => Err(Error::Contract("JSON input is rendered, not computed".into())),
    }
}

fn read_json(path: &PathBuf) -> Result<Document> {
    let mut s = String::new();
    let res = if path.as_os_str() == "-" {
        std::io::stdin().read_to_string(&mut s).map(|_| ())
    } else {
        std::fs::read_to_string(path).map(|t| s = t)
    };
    res.map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    report::from_json(&s)
}

/// Compute the reports of a job.
pub fn run(job: &JobSpec) -> Result<Document> {
    if let Input::Json(path) = &job.input {
        return read_json(path);
    }
    let (desc, sig, norms) = resolve(&job.input)?;
    let mut reports = Vec::new();
    for &group in &job.groups {
        let (mut set, trace) = minimal_basis_with(&sig, group, job.mode, job.strategy)?;
        set.sort_for_display();
        reports.push(build_report(desc.clone(), &set, &norms, trace, job.options)?);
    }
    Ok(Document { version: REPORT_VERSION, reports })
}

pub fn render(doc: &Document, format: Format, cols: Columns) -> Result<String> {
    match format {
        Format::Markdown => Ok(report::to_markdown(doc, cols)),
        Format::Json => report::to_json(doc).map(|s| s + "\n"),
        Format::Csv => report::to_csv(doc, cols),
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_) | Error::Contract(_) => EXIT_USAGE,
        Error::OutsideSubspace | Error::Internal(_) | Error::Translation { .. } => EXIT_INTERNAL,
    }
}

fn preset_listing() -> String {
    let mut out = String::new();
    for p in preset_catalogue() {
        let sig = p.resolve().map(|(s, _)| s.to_grammar()).unwrap_or_else(|e| e.to_string());
        out.push_str(&format!("{:<10} {:<26} {}\n", p.name, sig, p.description));
    }
    out
}

fn configure_threads() {
    if let Some(n) = std::env::var(THREADS_ENV).ok().and_then(|v| v.parse::<usize>().ok()) {
        // Fails only if a global pool already exists, which is harmless.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

/// Parse arguments, run, print. Returns the process exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args = match Args::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { 0 };
        }
    };
    configure_threads();
    if args.list_presets {
        print!("{}", preset_listing());
        return 0;
    }
    let result = Input::from_words(&args.input).and_then(|input| {
        let job = JobSpec {
            input,
            groups: args.group.groups(),
            mode: args.mode.into(),
            strategy: match args.strategy {
                StrategyArg::Quotient => Strategy::Quotient,
                StrategyArg::Full => Strategy::Full,
            },
            options: ReportOptions { emit_trace: args.emit_trace, verify: args.verify, audit: args.audit, cleaning_trace: args.cleaning_trace },
        };
        let doc = run(&job)?;
        let has_trace = doc.reports.iter().any(|r| r.generators.iter().any(|g| g.trace_form.is_some()));
        let cols = Columns { ascii: args.ascii, tensorial_ascii: args.emit_tensorial, trace: args.emit_trace || has_trace };
        render(&doc, args.format, cols)
    });
    match result {
        Ok(s) => {
            print!("{s}");
            0
        }
        Err(e) => {
            eprintln!("o2basis: {e}");
            exit_code(&e)
        }
    }
}

pub fn main() -> i32 {
    main_with_args(std::env::args_os())
}
