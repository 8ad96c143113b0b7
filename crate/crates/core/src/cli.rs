//! Command-line front end.

use std::ffi::OsString;
use std::io::Read;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::chain::{Chain, Event};
use crate::document::{render_distribution, DocumentError, ModelDocument};
use crate::error::Error;
use crate::maxitive::{is_maxitive, zero_one_view};
use crate::multivariate::{self, JointRule};
use crate::pbox::PBox;
use crate::possibility::{self, PossibilityCheck};
use crate::rational;
use crate::verify::{self, Suite, VerifyOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "pboxposs", version, about = "Exact p-box and possibility-measure computations")]
pub struct Cli {
    /// Model document (JSON); read from stdin when absent.
    #[arg(long, global = true, value_name = "PATH")]
    pub input: Option<PathBuf>,
    /// Print machine-readable JSON.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, clap::Args)]
pub struct EventArgs {
    /// Comma-separated labels, e.g. `a,c`; empty for the empty event.
    #[arg(long, allow_hyphen_values = true)]
    pub event: String,
    /// Use the complement of the listed event.
    #[arg(long)]
    pub complement: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RuleArg {
    Frechet,
    Independent,
    Rsi,
}

impl From<RuleArg> for JointRule {
    fn from(r: RuleArg) -> Self {
        match r {
            RuleArg::Frechet => JointRule::Frechet,
            RuleArg::Independent => JointRule::Independent,
            RuleArg::Rsi => JointRule::RandomSetOuter,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    Oracle,
    Maxitive,
    Roundtrip,
    Conjunction,
    Multivariate,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Self {
        match s {
            SuiteArg::Oracle => Suite::Oracle,
            SuiteArg::Maxitive => Suite::Maxitive,
            SuiteArg::Roundtrip => Suite::Roundtrip,
            SuiteArg::Conjunction => Suite::Conjunction,
            SuiteArg::Multivariate => Suite::Multivariate,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check that the document is well formed.
    Validate,
    /// Upper probability of an event.
    Upper(EventArgs),
    /// Lower probability of an event.
    Lower(EventArgs),
    /// Whether the p-box is maximum-preserving.
    IsMaxitive,
    /// Possibility distribution of a maxitive p-box.
    ToPossibility,
    /// P-box induced by a possibility distribution.
    FromPossibility,
    /// The two possibility distributions whose conjunction is the p-box.
    Decompose,
    /// Outer bounds from the two possibility components, next to the exact ones.
    Bounds(EventArgs),
    /// Joint possibility distribution of a list of marginals.
    Joint {
        #[arg(long, value_enum)]
        rule: RuleArg,
    },
    /// Run an exhaustive verification suite.
    Verify {
        #[arg(long, value_enum)]
        suite: SuiteArg,
        #[arg(long, value_name = "K")]
        max_classes: Option<usize>,
        /// Grid denominator of the enumerated values.
        #[arg(long, value_name = "G")]
        grid: Option<u32>,
    },
}

/// Captured result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Document(#[from] DocumentError),
    #[error("{0}")]
    Model(#[from] Error),
    #[error("cannot read input: {0}")]
    Io(#[from] std::io::Error),
}

/// Parses `args` (program name first) and runs the command, reading the
/// document from `--input` or from `stdin`.
pub fn run_args<I, T>(args: I, stdin: impl Read) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(&cli, stdin),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                Outcome { stdout: String::new(), stderr: text, code }
            } else {
                Outcome { stdout: text, stderr: String::new(), code }
            }
        }
    }
}

pub fn execute(cli: &Cli, stdin: impl Read) -> Outcome {
    match dispatch(cli, stdin) {
        Ok((value, code)) => {
            let mut stdout = if cli.json {
                serde_json::to_string(&value).expect("JSON output")
            } else {
                render_text(&value, 0)
            };
            if !stdout.ends_with('\n') {
                stdout.push('\n');
            }
            Outcome { stdout, stderr: String::new(), code }
        }
        Err(e) => Outcome { stdout: String::new(), stderr: format!("error: {e}\n"), code: EXIT_USAGE },
    }
}

fn read_document(cli: &Cli, mut stdin: impl Read) -> Result<ModelDocument, CliError> {
    let text = match &cli.input {
        Some(path) => std::fs::read_to_string(path)?,
        None => {
            let mut s = String::new();
            stdin.read_to_string(&mut s)?;
            s
        }
    };
    Ok(ModelDocument::from_json(&text)?)
}

/// The p-box of the document: the explicit one, or the one induced by `pi`.
fn model_pbox(doc: &ModelDocument) -> Result<PBox, CliError> {
    if doc.has_pbox() || doc.pi.is_none() {
        return Ok(doc.pbox()?);
    }
    let (_, p) = possibility::possibility_to_pbox(&doc.possibility()?)?;
    Ok(p)
}

fn parse_event(chain: &Chain, args: &EventArgs) -> Result<Event, CliError> {
    let labels: Vec<&str> = args.event.split(',').map(str::trim).filter(|l| !l.is_empty()).collect();
    let event = chain.event(labels)?;
    Ok(if args.complement { chain.complement(&event)? } else { event })
}

fn event_json(e: &Event) -> Value {
    Value::Array(e.iter().map(|l| Value::String(l.to_string())).collect())
}

fn dispatch(cli: &Cli, stdin: impl Read) -> Result<(Value, i32), CliError> {
    if let Command::Verify { suite, max_classes, grid } = &cli.command {
        let opts = VerifyOptions { max_classes: *max_classes, grid: *grid };
        let report = verify::run_suite((*suite).into(), opts)?;
        let code = if report.passed() { EXIT_OK } else { EXIT_FAILURE };
        return Ok((report.to_json(), code));
    }
    let doc = read_document(cli, stdin)?;
    let value = match &cli.command {
        Command::Validate => {
            let mut models = Vec::new();
            if doc.has_pbox() {
                models.push("pbox");
            } else if doc.classes.is_some() {
                models.push("chain");
            }
            if doc.pi.is_some() {
                models.push("pi");
            }
            if doc.marginals.is_some() {
                models.push("marginals");
            }
            json!({ "valid": true, "models": models })
        }
        Command::Upper(args) => {
            let p = model_pbox(&doc)?;
            let e = parse_event(p.chain(), args)?;
            json!({ "upper": rational::format(&p.upper_ext(&e)?) })
        }
        Command::Lower(args) => {
            let p = model_pbox(&doc)?;
            let e = parse_event(p.chain(), args)?;
            json!({ "lower": rational::format(&p.lower_ext(&e)?) })
        }
        Command::IsMaxitive => {
            let p = model_pbox(&doc)?;
            let view = zero_one_view(&p);
            json!({
                "maxitive": is_maxitive(&p),
                "lower_is_01": view.lower_is_01,
                "upper_is_01": view.upper_is_01,
            })
        }
        Command::ToPossibility => match possibility::pbox_to_possibility(&doc.pbox()?)? {
            PossibilityCheck::Possibility(pi) => json!({ "pi": render_distribution(&pi) }),
            PossibilityCheck::NotPossibility { witness } => {
                json!({ "pi": Value::Null, "witness": event_json(&witness) })
            }
        },
        Command::FromPossibility => {
            let (_, p) = possibility::possibility_to_pbox(&doc.possibility()?)?;
            serde_json::to_value(ModelDocument::from_pbox(&p)).expect("document serializes")
        }
        Command::Decompose => {
            let (pi1, pi2) = possibility::conjunction_decompose(&doc.pbox()?)?;
            json!({ "pi1": render_distribution(&pi1), "pi2": render_distribution(&pi2) })
        }
        Command::Bounds(args) => {
            let p = doc.pbox()?;
            let e = parse_event(p.chain(), args)?;
            let b = possibility::conjunction_bounds(&p, &e)?;
            json!({
                "approx_lower": rational::format(&b.approx_lower),
                "approx_upper": rational::format(&b.approx_upper),
                "lower": rational::format(&p.lower_ext(&e)?),
                "upper": rational::format(&p.upper_ext(&e)?),
            })
        }
        Command::Joint { rule } => {
            let joint = multivariate::joint(&doc.family()?, (*rule).into());
            json!({ "pi": render_distribution(&joint) })
        }
        Command::Verify { .. } => unreachable!("handled above"),
    };
    Ok((value, EXIT_OK))
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "none".into(),
        Value::Array(items) if items.iter().all(|i| !i.is_object() && !i.is_array()) => {
            format!("[{}]", items.iter().map(scalar).collect::<Vec<_>>().join(", "))
        }
        other => other.to_string(),
    }
}

fn is_scalar(v: &Value) -> bool {
    match v {
        Value::Object(_) => false,
        Value::Array(items) => items.iter().all(|i| !i.is_object() && !i.is_array()),
        _ => true,
    }
}

/// Indented `key: value` rendering of a JSON report.
pub fn render_text(value: &Value, indent: usize) -> String {
    let pad = "  ".repeat(indent);
    match value {
        Value::Object(map) => render_map(map, indent),
        Value::Array(items) if !is_scalar(value) => {
            items.iter().map(|item| format!("{pad}-\n{}", render_text(item, indent + 1))).collect()
        }
        other => format!("{pad}{}\n", scalar(other)),
    }
}

fn render_map(map: &Map<String, Value>, indent: usize) -> String {
    let pad = "  ".repeat(indent);
    let mut out = String::new();
    for (k, v) in map {
        if is_scalar(v) {
            out.push_str(&format!("{pad}{k}: {}\n", scalar(v)));
        } else {
            out.push_str(&format!("{pad}{k}:\n{}", render_text(v, indent + 1)));
        }
    }
    out
}
