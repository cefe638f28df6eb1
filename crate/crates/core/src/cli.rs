// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! The `zw` command line.
//!
//! Exit status: 0 on success, 1 when a verification or fuzz check fails,
//! 2 on usage and parse errors, 3 when a resource cap is hit.

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::diagram::json::{self, JsonError};
use crate::diagram::{from_term, parse_term, Diagram, TermError, ValidationReport};
use crate::fuzz::{run_fuzz, FuzzBounds};
use crate::normal_form::{nf_of_tensor, normalize_with, NfError, NormalizeError};
use crate::render::render_dot;
use crate::rules::{catalog, verify_soundness, Rule};
use crate::semantics::{eval_with, EvalError, EvalOptions, Ring, Tensor, DEFAULT_LEG_CAP};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Term,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "zw", version, about = "Evaluate, normalize and check ZW string diagrams")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

/// One diagram, from a file (`-` for stdin) or inline.
#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct Input {
    /// Diagram file.
    pub file: Option<PathBuf>,
    /// Inline diagram source.
    #[arg(short = 'e', long = "expr")]
    pub expr: Option<String>,
}

#[derive(Debug, Args)]
pub struct Source {
    #[command(flatten)]
    pub input: Input,
    /// Input format; defaults to json for `.json` files and term otherwise.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the tensor of a diagram.
    Eval {
        #[command(flatten)]
        source: Source,
        /// Work over the integers mod N.
        #[arg(long = "mod", value_name = "N")]
        modulus: Option<u64>,
        /// Refuse intermediate tensors with more legs than this.
        #[arg(long, default_value_t = DEFAULT_LEG_CAP)]
        leg_cap: usize,
    },
    /// Rewrite a diagram to its normal form and print it as a JSON graph.
    Normalize {
        #[command(flatten)]
        source: Source,
        /// Work over the integers mod N.
        #[arg(long = "mod", value_name = "N")]
        modulus: Option<u64>,
        /// Write the rewrite trace here, one JSON step per line.
        #[arg(long, value_name = "PATH")]
        trace: Option<PathBuf>,
        /// Refuse intermediate tensors with more legs than this.
        #[arg(long, default_value_t = DEFAULT_LEG_CAP)]
        leg_cap: usize,
    },
    /// Check every catalog rule by evaluating both sides.
    VerifyRules {
        /// Largest arity for the rule schemas.
        #[arg(long, default_value_t = 4)]
        max_arity: usize,
        /// Verify over the integers mod N and include or(N).
        #[arg(long = "mod", value_name = "N")]
        modulus: Option<u64>,
        /// Extra rule files to check along with the catalog.
        #[arg(long = "rule", value_name = "PATH")]
        rules: Vec<PathBuf>,
    },
    /// Normalize seeded random diagrams and compare with the tensor oracle.
    Fuzz {
        /// Number of diagrams.
        #[arg(long, default_value_t = 1000)]
        count: usize,
        /// Seed; case i uses stream i of this seed.
        #[arg(long)]
        seed: u64,
        /// Most vertices per diagram.
        #[arg(long, default_value_t = 10)]
        max_vertices: usize,
        /// Largest vertex arity.
        #[arg(long, default_value_t = 4)]
        max_arity: usize,
        /// Most boundary legs.
        #[arg(long, default_value_t = 6)]
        max_legs: usize,
        /// Work over the integers mod N.
        #[arg(long = "mod", value_name = "N")]
        modulus: Option<u64>,
    },
    /// Print a diagram as Graphviz DOT.
    Render {
        #[command(flatten)]
        source: Source,
    },
    /// Print the normal-form file of a tensor given in the tensor text format.
    NfOfTensor {
        /// Tensor file (`-` for stdin).
        file: PathBuf,
        /// Leg count; needed for the zero tensor, checked otherwise.
        #[arg(long)]
        legs: Option<usize>,
        /// Work over the integers mod N.
        #[arg(long = "mod", value_name = "N")]
        modulus: Option<u64>,
    },
}

#[derive(Debug, Error)]
pub enum ParseError {
    #[error(transparent)]
    Term(#[from] TermError),
    #[error(transparent)]
    Json(#[from] JsonError),
    #[error("invalid diagram: {0}")]
    Invalid(ValidationReport),
}

/// Parse a diagram in either format and validate it.
pub fn parse_diagram(src: &str, format: Format) -> Result<Diagram, ParseError> {
    let g = match format {
        Format::Term => from_term(&parse_term(src)?)?,
        Format::Json => json::from_json(src)?,
    };
    let report = g.validate();
    if report.is_empty() {
        Ok(g)
    } else {
        Err(ParseError::Invalid(report))
    }
}

/// A failed command: message and exit status.
struct Failure(i32, String);

impl Failure {
    fn usage(msg: impl ToString) -> Failure {
        Failure(EXIT_USAGE, msg.to_string())
    }
}

impl From<EvalError> for Failure {
    fn from(e: EvalError) -> Failure {
        let code = match e {
            EvalError::Invalid(_) => EXIT_USAGE,
            EvalError::LegCap { .. } | EvalError::TooWide(_) => EXIT_RESOURCE,
        };
        Failure(code, e.to_string())
    }
}

impl From<NormalizeError> for Failure {
    fn from(e: NormalizeError) -> Failure {
        let code = match e {
            NormalizeError::Invalid(_) => EXIT_USAGE,
            NormalizeError::LegCap { .. } | NormalizeError::Resource(NfError::TooWide(_)) => EXIT_RESOURCE,
            NormalizeError::Resource(_) => EXIT_USAGE,
        };
        Failure(code, e.to_string())
    }
}

fn ring(modulus: Option<u64>) -> Result<Ring, Failure> {
    match modulus {
        None => Ok(Ring::Integers),
        Some(n) => Ring::modulo(n).map_err(|_| Failure::usage("--mod must be at least 1")),
    }
}

fn read_file(path: &Path) -> Result<String, Failure> {
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| Failure::usage(format!("stdin: {e}")))?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn load(source: &Source) -> Result<Diagram, Failure> {
    let (text, guess) = match (&source.input.file, &source.input.expr) {
        (Some(path), _) => {
            let json = path.extension().is_some_and(|x| x == "json");
            (read_file(path)?, if json { Format::Json } else { Format::Term })
        }
        (None, Some(expr)) => (expr.clone(), Format::Term),
        (None, None) => return Err(Failure::usage("no input given")),
    };
    parse_diagram(&text, source.format.unwrap_or(guess)).map_err(Failure::usage)
}

fn execute(cmd: Command, out: &mut dyn Write) -> Result<i32, Failure> {
    let io = |e: std::io::Error| Failure::usage(format!("write failed: {e}"));
    match cmd {
        Command::Eval { source, modulus, leg_cap } => {
            let g = load(&source)?;
            let opts = EvalOptions { leg_cap, ..EvalOptions::default() };
            let t = eval_with(&g, ring(modulus)?, opts)?;
            write!(out, "{}", t.to_text()).map_err(io)?;
        }
        Command::Normalize { source, modulus, trace, leg_cap } => {
            let g = load(&source)?;
            let (nf, steps) = normalize_with(&g, ring(modulus)?, trace.is_some(), leg_cap)?;
            if let (Some(path), Some(steps)) = (trace, steps) {
                std::fs::write(&path, steps.to_jsonl())
                    .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
            }
            writeln!(out, "{}", json::to_json(&nf)).map_err(io)?;
        }
        Command::VerifyRules { max_arity, modulus, rules } => {
            let r = ring(modulus)?;
            let mut all = catalog(max_arity, modulus).map_err(Failure::usage)?;
            for path in &rules {
                all.push(
                    Rule::from_json(&read_file(path)?)
                        .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?,
                );
            }
            let mut failed = 0;
            for rule in &all {
                let rr = if rule.modulus.is_some() { rule.native_ring() } else { r };
                let ok = verify_soundness(rule, rr)?;
                failed += usize::from(!ok);
                writeln!(out, "{} {} ({rr})", if ok { "PASS" } else { "FAIL" }, rule.name).map_err(io)?;
            }
            writeln!(out, "{}/{} rules sound", all.len() - failed, all.len()).map_err(io)?;
            if failed > 0 {
                return Ok(EXIT_CHECK_FAILED);
            }
        }
        Command::Fuzz { count, seed, max_vertices, max_arity, max_legs, modulus } => {
            let bounds = FuzzBounds { max_vertices, max_arity, max_legs, crossings: true };
            let report = run_fuzz(count, seed, &bounds, ring(modulus)?);
            for (i, r) in report.failures() {
                writeln!(out, "case {i}: {r:?}").map_err(io)?;
            }
            writeln!(out, "{}", report.summary()).map_err(io)?;
            if report.passed() != count {
                return Ok(EXIT_CHECK_FAILED);
            }
        }
        Command::Render { source } => {
            let g = load(&source)?;
            write!(out, "{}", render_dot(&g)).map_err(io)?;
        }
        Command::NfOfTensor { file, legs, modulus } => {
            let t = Tensor::from_text(&read_file(&file)?, legs).map_err(Failure::usage)?;
            if legs.is_some_and(|l| l != t.legs()) {
                return Err(Failure::usage(format!("tensor has {} legs, --legs says {}", t.legs(), legs.unwrap())));
            }
            writeln!(out, "{}", nf_of_tensor(&t, ring(modulus)?).to_json()).map_err(io)?;
        }
    }
    Ok(EXIT_OK)
}

/// Run the command line `args` (program name first) and return the exit
/// status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
            } else {
                let _ = write!(out, "{text}");
            }
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(Failure(code, msg)) => {
            let _ = writeln!(err, "zw: {msg}");
            code
        }
    }
}
