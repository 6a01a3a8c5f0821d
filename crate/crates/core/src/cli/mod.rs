//! The `coreg` command line: instance files in, JSON or text reports out.
//!
//! Exit codes: 0 computed or passed, 1 a verification found a
//! counterexample, 2 usage or parse error, 3 outside the supported classes
//! or undetermined.

mod commands;
pub mod instance;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::error::Error;
pub use instance::{Instance, Item, RingSpec};

/// Version tag of the JSON report layout.
pub const REPORT_SCHEMA: &str = "coreg-report/1";

#[derive(Parser, Debug)]
#[command(name = "coreg", version, about = "Filter coregular sequences, fwidth and local homology finiteness")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Add wall-clock time to the report.
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum Command {
    /// Reduced Gröbner basis of an ideal.
    Gb {
        #[serde(skip)]
        instance: PathBuf,
        #[arg(long)]
        ideal: String,
    },
    /// Normal form of a polynomial modulo an ideal.
    Nf {
        #[serde(skip)]
        instance: PathBuf,
        #[arg(long)]
        ideal: String,
        #[arg(long)]
        poly: String,
    },
    /// Tor_i(M, X) for a module or Artinian module X.
    Tor {
        #[serde(skip)]
        instance: PathBuf,
        #[arg(long = "M")]
        #[serde(rename = "M")]
        m: String,
        #[arg(long = "N", alias = "artinian")]
        #[serde(rename = "N")]
        n: String,
        #[arg(long, default_value_t = 0)]
        index: usize,
    },
    /// Ext^i(M, L) of finitely generated modules.
    Ext {
        #[serde(skip)]
        instance: PathBuf,
        #[arg(long = "M")]
        #[serde(rename = "M")]
        m: String,
        #[arg(long = "L")]
        #[serde(rename = "L")]
        l: String,
        #[arg(long, default_value_t = 0)]
        index: usize,
    },
    /// Associated primes of a finitely generated module.
    Ass {
        #[serde(skip)]
        instance: PathBuf,
        #[arg(long = "M")]
        #[serde(rename = "M")]
        m: String,
    },
    /// Attached primes of an Artinian module.
    Att {
        #[serde(skip)]
        instance: PathBuf,
        #[arg(long = "N", alias = "artinian")]
        #[serde(rename = "N")]
        n: String,
    },
    /// Cosupport of an Artinian module.
    Cosupp {
        #[serde(skip)]
        instance: PathBuf,
        #[arg(long = "N", alias = "artinian")]
        #[serde(rename = "N")]
        n: String,
    },
    /// Length of a module or Artinian module.
    Length {
        #[serde(skip)]
        instance: PathBuf,
        #[arg(long)]
        of: String,
    },
    /// Extends a filter coregular sequence inside an ideal.
    Fseq {
        #[serde(skip)]
        instance: PathBuf,
        #[arg(long)]
        ideal: String,
        #[arg(long = "N", alias = "artinian")]
        #[serde(rename = "N")]
        n: String,
        /// Prefix to extend.
        #[arg(long)]
        seq: Option<String>,
        /// Target length; defaults to one past the prefix.
        #[arg(long)]
        length: Option<usize>,
    },
    /// fwidth(a, N) with its certificate.
    Fwidth {
        #[serde(skip)]
        instance: PathBuf,
        #[arg(long)]
        ideal: String,
        #[arg(long = "N", alias = "artinian")]
        #[serde(rename = "N")]
        n: String,
    },
    /// fdepth(a, L) of a finitely generated module.
    Fdepth {
        #[serde(skip)]
        instance: PathBuf,
        #[arg(long)]
        ideal: String,
        #[arg(long = "M")]
        #[serde(rename = "M")]
        m: String,
    },
    /// Finiteness profile of the generalized local homology H_i^a(M, N).
    Profile {
        #[serde(skip)]
        instance: PathBuf,
        #[arg(long = "M")]
        #[serde(rename = "M")]
        m: String,
        #[arg(long = "N", alias = "artinian")]
        #[serde(rename = "N")]
        n: String,
        #[arg(long)]
        ideal: String,
        #[arg(long, default_value_t = 2)]
        imax: usize,
        /// Attach truncated inverse systems to the finitely generated indices.
        #[arg(long)]
        slices: bool,
        #[arg(long, default_value_t = 8)]
        nmax: usize,
    },
    /// Checks the equivalent finiteness conditions at index n.
    VerifyTheorem {
        #[serde(skip)]
        instance: PathBuf,
        #[arg(long = "M")]
        #[serde(rename = "M")]
        m: String,
        #[arg(long = "N", alias = "artinian")]
        #[serde(rename = "N")]
        n: String,
        #[arg(long)]
        ideal: String,
        #[arg(long = "n")]
        #[serde(rename = "n")]
        index: usize,
    },
    /// Checks the cosupport inclusions along a sequence.
    VerifyInclusions {
        #[serde(skip)]
        instance: PathBuf,
        #[arg(long = "M")]
        #[serde(rename = "M")]
        m: String,
        #[arg(long = "N", alias = "artinian")]
        #[serde(rename = "N")]
        n: String,
        #[arg(long)]
        seq: String,
        /// Largest Tor index checked; defaults to the sequence length plus one.
        #[arg(long)]
        imax: Option<usize>,
    },
    /// Tor over Z by closed forms against the resolution route; Tor symmetry
    /// over a polynomial ring, where an Artinian argument stands for its predual.
    OracleTor {
        #[serde(skip)]
        instance: PathBuf,
        #[arg(long = "M")]
        #[serde(rename = "M")]
        m: String,
        #[arg(long = "N", alias = "artinian")]
        #[serde(rename = "N")]
        n: String,
        #[arg(long, default_value_t = 0)]
        index: usize,
    },
    /// Attached primes by closed form against an independent check.
    OracleAtt {
        #[serde(skip)]
        instance: PathBuf,
        #[arg(long = "N", alias = "artinian")]
        #[serde(rename = "N")]
        n: String,
    },
    /// fwidth(a, D(L)) against fdepth(a, L).
    OracleWidth {
        #[serde(skip)]
        instance: PathBuf,
        #[arg(long)]
        ideal: String,
        #[arg(long = "N", alias = "artinian")]
        #[serde(rename = "N")]
        n: String,
    },
}

impl Command {
    pub fn instance_path(&self) -> &PathBuf {
        use Command::*;
        match self {
            Gb { instance, .. }
            | Nf { instance, .. }
            | Tor { instance, .. }
            | Ext { instance, .. }
            | Ass { instance, .. }
            | Att { instance, .. }
            | Cosupp { instance, .. }
            | Length { instance, .. }
            | Fseq { instance, .. }
            | Fwidth { instance, .. }
            | Fdepth { instance, .. }
            | Profile { instance, .. }
            | VerifyTheorem { instance, .. }
            | VerifyInclusions { instance, .. }
            | OracleTor { instance, .. }
            | OracleAtt { instance, .. }
            | OracleWidth { instance, .. } => instance,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Ok,
    Counterexample,
    Undetermined,
    Error,
}

impl Status {
    pub fn exit_code(&self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Counterexample => 1,
            Status::Undetermined => 3,
            Status::Error => 2,
        }
    }
}

/// Result payload of one command.
pub struct Computed {
    pub result: Value,
    pub status: Status,
    pub warnings: Vec<String>,
}

/// Search budget, overridable through `COREG_BUDGET`.
pub fn budget() -> usize {
    std::env::var("COREG_BUDGET").ok().and_then(|s| s.parse().ok()).unwrap_or(crate::primes::DEFAULT_AVOID_BUDGET)
}

/// Runs one command against a parsed instance.
pub fn run_command(command: &Command, inst: &Instance) -> crate::Result<Computed> {
    commands::run(command, inst)
}

/// `sha256:` digest of the canonical form of an instance.
pub fn digest(inst: &Instance) -> String {
    let hash = Sha256::digest(inst.to_string().as_bytes());
    format!("sha256:{}", hash.iter().map(|b| format!("{b:02x}")).collect::<String>())
}

fn error_value(e: &Error) -> Value {
    let kind = match e {
        Error::Parse { .. } => "parse",
        Error::UnresolvedReference(_) => "unresolved-reference",
        Error::RingMismatch(_) => "ring-mismatch",
        Error::InvalidArgument(_) => "invalid-argument",
        Error::UnsupportedField(_) => "unsupported-field",
        Error::UnsupportedIdealClass(_) => "unsupported-ideal-class",
        Error::UnsupportedModuleClass(_) => "unsupported-module-class",
        Error::SearchBudgetExceeded { .. } => "search-budget-exceeded",
        Error::EnumerationBudget(_) => "enumeration-budget",
        Error::InternalInconsistency(_) => "internal-inconsistency",
        Error::Undetermined(_) => "undetermined",
        Error::NotExact(_) => "not-exact",
    };
    match e {
        Error::Parse { line, column, message } => json!({"kind": kind, "line": line, "column": column, "message": message}),
        _ => json!({"kind": kind, "message": e.to_string()}),
    }
}

fn error_status(e: &Error) -> Status {
    if e.is_unsupported() {
        Status::Undetermined
    } else if matches!(e, Error::InternalInconsistency(_) | Error::NotExact(_)) {
        Status::Counterexample
    } else {
        Status::Error
    }
}

/// Builds the full report for a command line; returns it with the exit code.
pub fn report(cli: &Cli) -> (Value, Status) {
    let path = cli.command.instance_path();
    let parsed = match std::fs::read_to_string(path) {
        Ok(src) => Instance::parse(&src),
        Err(e) => Err(vec![Error::InvalidArgument(format!("{}: {e}", path.display()))]),
    };
    report_parsed(cli, parsed, Instant::now())
}

/// The report for a command run against an already parsed instance; the
/// instance path in the command is ignored.
pub fn report_for(cli: &Cli, inst: &Instance) -> (Value, Status) {
    report_parsed(cli, Ok(inst.clone()), Instant::now())
}

fn report_parsed(cli: &Cli, parsed: std::result::Result<Instance, Vec<Error>>, start: Instant) -> (Value, Status) {
    let mut report = json!({
        "schema": REPORT_SCHEMA,
        "command": serde_json::to_value(&cli.command).expect("commands serialize"),
    });
    let finish = |mut report: Value, status: Status, body: Vec<(&str, Value)>| {
        let obj = report.as_object_mut().unwrap();
        obj.insert("status".into(), json!(status));
        for (k, v) in body {
            obj.insert(k.into(), v);
        }
        if cli.timing {
            obj.insert("timing_ms".into(), json!(start.elapsed().as_secs_f64() * 1e3));
        }
        (report, status)
    };
    let inst = match parsed {
        Ok(i) => i,
        Err(errs) => {
            let status = errs.iter().map(error_status).max_by_key(|s| s.exit_code()).unwrap_or(Status::Error);
            let errs: Vec<Value> = errs.iter().map(error_value).collect();
            return finish(report, status, vec![("errors", Value::Array(errs))]);
        }
    };
    report.as_object_mut().unwrap().insert("instance_digest".into(), json!(digest(&inst)));
    match run_command(&cli.command, &inst) {
        Ok(c) => {
            let warnings = json!(c.warnings);
            finish(report, c.status, vec![("result", c.result), ("warnings", warnings)])
        }
        Err(e) => {
            let status = error_status(&e);
            finish(report, status, vec![("errors", json!([error_value(&e)]))])
        }
    }
}

fn render_text(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                match x {
                    Value::Object(m) if !m.is_empty() => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render_text(x, indent + 1, out);
                    }
                    Value::Array(a) if a.iter().any(|e| e.is_object() || e.is_array()) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render_text(x, indent + 1, out);
                    }
                    _ => out.push_str(&format!("{pad}{k}: {}\n", scalar(x))),
                }
            }
        }
        Value::Array(items) => {
            for (i, x) in items.iter().enumerate() {
                if x.is_object() || x.is_array() {
                    out.push_str(&format!("{pad}- [{i}]\n"));
                    render_text(x, indent + 1, out);
                } else {
                    out.push_str(&format!("{pad}- {}\n", scalar(x)));
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other))),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(a) => format!("[{}]", a.iter().map(scalar).collect::<Vec<_>>().join(", ")),
        Value::Object(_) => "{}".into(),
        other => other.to_string(),
    }
}

pub fn format_report(report: &Value, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("reports serialize");
            s.push('\n');
            s
        }
        Format::Text => {
            let mut s = String::new();
            render_text(report, 0, &mut s);
            s
        }
    }
}

/// Entry point for the binary; returns the process exit code.
pub fn main_with_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return e.exit_code();
        }
    };
    let (report, status) = report(&cli);
    if let Some(errs) = report.get("errors").and_then(Value::as_array) {
        for e in errs {
            let msg = e.get("message").and_then(Value::as_str).unwrap_or("");
            match (e.get("line"), e.get("column")) {
                (Some(l), Some(c)) => {
                    let _ = writeln!(err, "{}:{l}:{c}: {msg}", cli.command.instance_path().display());
                }
                _ => {
                    let _ = writeln!(err, "error: {msg}");
                }
            }
        }
    }
    // written in one piece
    let _ = out.write_all(format_report(&report, cli.format).as_bytes());
    let _ = out.flush();
    status.exit_code()
}
