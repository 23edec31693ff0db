//! The `hirsch3` command line: classification, word problems, presentation
//! simplification and verification over descriptor files.

pub mod descriptor;
pub mod envelope;
pub mod fixtures;
pub mod render;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use hirsch3::classifier::{classify, ClassifyError};
use hirsch3::families::{GroupModel, Model};
use hirsch3::presentation::{parse_presentation, parse_word};
use hirsch3::simplifier::{normalize_basis, standardize};
use hirsch3::verifier::{verify, TrialConfig};
use serde::Serialize;
use thiserror::Error;

use descriptor::read_descriptor;
use envelope::ReportEnvelope;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INVARIANT: i32 = 3;
pub const EXIT_VERIFICATION: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => EXIT_INPUT,
            CliError::Invariant(_) => EXIT_INVARIANT,
        }
    }
}

impl From<ClassifyError> for CliError {
    fn from(e: ClassifyError) -> CliError {
        match e {
            ClassifyError::Invariant(v) => CliError::Invariant(v.join("; ")),
            other => CliError::Input(other.to_string()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "hirsch3", version, about = "Classify and verify solvable groups of Hirsch length three")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the full classification report for a descriptor file.
    Classify {
        path: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Decide whether two words are equal in the described group.
    WordEq {
        path: String,
        w1: String,
        w2: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Reduce an `a, t, u` presentation file to standard form.
    Simplify {
        path: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Run the randomized verification harness.
    Verify {
        path: String,
        #[arg(long, default_value_t = TrialConfig::default().trials)]
        trials: usize,
        #[arg(long, default_value_t = TrialConfig::default().seed)]
        seed: u64,
        /// Search window for brute-force checks.
        #[arg(long, default_value_t = TrialConfig::default().parameter_bound)]
        window: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// List or emit the shipped example descriptors.
    Examples {
        #[command(subcommand)]
        action: ExamplesAction,
    },
}

#[derive(Debug, Subcommand)]
pub enum ExamplesAction {
    List,
    Emit {
        name: String,
        /// Write `<name>.toml` into this directory instead of printing it.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

pub struct Outcome {
    pub stdout: String,
    pub code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Outcome {
        Outcome { stdout, code: EXIT_OK }
    }
}

fn emit<T: Serialize>(format: Format, envelope: &ReportEnvelope<T>) -> String {
    match format {
        Format::Json => envelope.to_json(),
        Format::Text => render::text(envelope),
    }
}

const HIRSCH3_FACTS: [&str; 3] = [
    "h(G) = 3: derived length at most 3, G/sqrt(G) virtually Z^2, Z, D_infinity or Z + Z/2",
    "c.d. G = h(G) exactly when G is constructible",
    "coherent iff FP2 when h(sqrt(G)) >= 2",
];

fn cmd_classify(path: &str, format: Format) -> Result<Outcome, CliError> {
    let (file, bytes) = read_descriptor(path)?;
    let report = classify(&file.descriptor)?;
    let mut notes = report.notes.clone();
    if report.hirsch_length == 3 {
        notes.extend(HIRSCH3_FACTS.iter().map(|s| s.to_string()));
    }
    let env = ReportEnvelope::new("classify", &bytes, file.name, &report, notes);
    Ok(Outcome::ok(emit(format, &env)))
}

#[derive(Serialize)]
struct WordEqReport {
    equal: bool,
    normal_forms: [String; 2],
}

fn cmd_word_eq(path: &str, w1: &str, w2: &str, format: Format) -> Result<Outcome, CliError> {
    let (file, bytes) = read_descriptor(path)?;
    let model = Model::new(&file.descriptor).map_err(|e| CliError::Input(e.to_string()))?;
    let gens = model.generators();
    let word = |s: &str| {
        parse_word(s, &gens).map_err(|e| {
            let (line, col) = e.line_col(s);
            CliError::Input(format!("word `{s}`:{line}:{col}: {e}"))
        })
    };
    let (a, b) = (word(w1)?, word(w2)?);
    let eval = |w| model.of_word(w).map_err(|e| CliError::Input(e.to_string()));
    let (x, y) = (eval(&a)?, eval(&b)?);
    let report = WordEqReport {
        equal: x == y,
        normal_forms: [x.to_string(), y.to_string()],
    };
    let env = ReportEnvelope::new("word-eq", &bytes, file.name, report, vec![]);
    Ok(Outcome::ok(match format {
        Format::Json => env.to_json(),
        Format::Text => format!(
            "{}\n{w1} = {}\n{w2} = {}\n",
            if env.report.equal { "equal" } else { "unequal" },
            env.report.normal_forms[0],
            env.report.normal_forms[1]
        ),
    }))
}

fn cmd_simplify(path: &str, format: Format) -> Result<Outcome, CliError> {
    let bytes = std::fs::read(path).map_err(|e| CliError::Input(format!("{path}: {e}")))?;
    let text = String::from_utf8_lossy(&bytes);
    let pres = parse_presentation(text.trim()).map_err(|e| {
        let (line, col) = e.line_col(text.trim());
        CliError::Input(format!("{path}:{line}:{col}: {e}"))
    })?;
    let sf = standardize(&pres).map_err(|e| CliError::Input(format!("{path}: {e}")))?;
    #[derive(Serialize)]
    struct SimplifyReport {
        standard_form: hirsch3::simplifier::StandardForm,
        presentation: String,
        descriptor: hirsch3::families::GroupDescriptor,
        #[serde(skip_serializing_if = "Option::is_none")]
        normalized_basis: Option<hirsch3::simplifier::BasisChange>,
    }
    let report = SimplifyReport {
        presentation: sf.dsl(),
        descriptor: sf.descriptor(),
        normalized_basis: normalize_basis(sf.m, sf.n, sf.p, sf.q).ok(),
        standard_form: sf,
    };
    let notes = vec!["a = alpha^N with N = (mnpq)^L for the window L of the commutator atoms".to_string()];
    let env = ReportEnvelope::new("simplify", &bytes, None, report, notes);
    Ok(Outcome::ok(emit(format, &env)))
}

fn cmd_verify(path: &str, cfg: TrialConfig, format: Format) -> Result<Outcome, CliError> {
    let (file, bytes) = read_descriptor(path)?;
    let report = verify(&file.descriptor, &cfg).map_err(|e| match e {
        hirsch3::verifier::VerifyError::Classify(c) => CliError::from(c),
        other => CliError::Input(other.to_string()),
    })?;
    let code = if report.passed { EXIT_OK } else { EXIT_VERIFICATION };
    let env = ReportEnvelope::new("verify", &bytes, file.name, report, vec![]);
    Ok(Outcome {
        stdout: emit(format, &env),
        code,
    })
}

fn cmd_examples(action: ExamplesAction) -> Result<Outcome, CliError> {
    match action {
        ExamplesAction::List => Ok(Outcome::ok(
            fixtures::FIXTURES
                .iter()
                .map(|f| format!("{:<16} {}\n", f.name, f.summary))
                .collect(),
        )),
        ExamplesAction::Emit { name, out } => {
            let f = fixtures::find(&name).ok_or_else(|| {
                let known: Vec<&str> = fixtures::FIXTURES.iter().map(|f| f.name).collect();
                CliError::Input(format!("unknown example `{name}`; known: {}", known.join(", ")))
            })?;
            match out {
                None => Ok(Outcome::ok(f.text.to_string())),
                Some(dir) => {
                    let path = dir.join(format!("{}.toml", f.name));
                    std::fs::write(&path, f.text)
                        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
                    Ok(Outcome::ok(format!("{}\n", path.display())))
                }
            }
        }
    }
}

pub fn run(cli: Cli) -> Result<Outcome, CliError> {
    match cli.command {
        Command::Classify { path, format } => cmd_classify(&path, format),
        Command::WordEq { path, w1, w2, format } => cmd_word_eq(&path, &w1, &w2, format),
        Command::Simplify { path, format } => cmd_simplify(&path, format),
        Command::Verify {
            path,
            trials,
            seed,
            window,
            format,
        } => {
            let cfg = TrialConfig {
                seed,
                trials,
                parameter_bound: window,
                ..TrialConfig::default()
            };
            if trials == 0 {
                return Err(CliError::Input("--trials must be at least 1".into()));
            }
            cmd_verify(&path, cfg, format)
        }
        Command::Examples { action } => cmd_examples(action),
    }
}
