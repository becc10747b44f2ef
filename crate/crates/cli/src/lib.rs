// SPDX-License-Identifier: Apache-2.0

//! Subcommands of the `moment-space` tool. Every run writes canonical JSON
//! and maps its outcome to an exit status: 0 when every check passes, 1 when
//! a check fails, 2 on malformed input or a failed hypothesis.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use moment_space::format::{
    algebra_from_json, canonical_string, checks_to_json, decomposition_to_json,
    legendrian_from_json, legendrian_to_json,
};
use moment_space::groups::{
    check_min_degeneracy, check_min_degeneracy_samples, check_prop_tau, check_prop_xi,
    cross_check_canonical, explicit_compact_point, kernel_plus_ad, kernel_tau,
};
use moment_space::legendrian::build;
use moment_space::{
    builtin, decompose, CanonicalType, Error, GroupRealization, LieAlgebra, ResidualReport,
    DEFAULT_TOL,
};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INPUT_ERROR: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "moment-space", version, about = "Legendrian symmetric Lie algebras and their moment-space forms")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check antisymmetry, the Jacobi identity and Killing-form invariance.
    CheckAlgebra {
        /// `builtin:<name>` or a Lie-algebra JSON file.
        input: String,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[command(flatten)]
        out: Output,
    },
    /// Build a canonical Legendrian symmetric algebra.
    Build {
        /// euclidean, compact, noncompact (or 0, +, -).
        #[arg(long = "type", value_parser = parse_kind)]
        kind: CanonicalType,
        /// `builtin:<name>` or a Lie-algebra JSON file.
        #[arg(long)]
        g: String,
        /// Apply a seeded random change of basis.
        #[arg(long)]
        scramble: Option<u64>,
        #[command(flatten)]
        out: Output,
    },
    /// Report every axiom residual of a Legendrian JSON file.
    ValidateLegendrian {
        input: PathBuf,
        /// Defaults to the data-scaled tolerance of the input.
        #[arg(long)]
        tol: Option<f64>,
        #[command(flatten)]
        out: Output,
    },
    /// Decompose a Legendrian JSON file into canonical components.
    Decompose {
        input: PathBuf,
        #[arg(long, default_value_t = moment_space::decomposition::DECOMPOSE_TOL)]
        tol: f64,
        #[command(flatten)]
        out: Output,
    },
    /// Verify the moment-space identities on a matrix-group realization.
    VerifyForms {
        #[arg(long = "case", value_parser = parse_kind)]
        kind: CanonicalType,
        /// `builtin:<name>`; a matrix model is required.
        #[arg(long)]
        g: String,
        #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        /// Report path; stdout when absent.
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct Output {
    /// Output path; stdout when absent.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

fn parse_kind(s: &str) -> Result<CanonicalType, String> {
    CanonicalType::parse(s).ok_or_else(|| format!("unknown type '{s}'"))
}

/// Failure modes of a run that prevent a report.
#[derive(Debug)]
pub enum RunError {
    Input(Error),
    Usage(String),
}

impl From<Error> for RunError {
    fn from(e: Error) -> Self {
        RunError::Input(e)
    }
}

impl std::fmt::Display for RunError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RunError::Input(e) => write!(f, "{e}"),
            RunError::Usage(m) => f.write_str(m),
        }
    }
}

/// Executes a parsed command, writes its output, and returns the exit
/// status. Diagnostics for status 2 go to stderr.
pub fn run(config: &RunConfig) -> i32 {
    match execute(&config.command) {
        Ok((doc, pass, target)) => match emit(&doc, target.as_deref()) {
            Ok(()) if pass => EXIT_PASS,
            Ok(()) => EXIT_CHECK_FAILED,
            Err(e) => {
                eprintln!("error: {e}");
                EXIT_INPUT_ERROR
            }
        },
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INPUT_ERROR
        }
    }
}

/// Writes `doc` canonically to `path`, or to stdout.
pub fn emit(doc: &Value, path: Option<&Path>) -> std::io::Result<()> {
    let text = canonical_string(doc);
    match path {
        Some(p) => fs::write(p, text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    }
}

type Outcome = (Value, bool, Option<PathBuf>);

fn execute(command: &Command) -> Result<Outcome, RunError> {
    match command {
        Command::CheckAlgebra { input, tol, out } => {
            let g = load_algebra(input)?;
            let report = algebra_report(&g, *tol);
            let doc = report_doc("check-algebra", json!({ "input": input, "tol": tol }), &report);
            Ok((doc, report.passed(), out.output.clone()))
        }
        Command::Build {
            kind,
            g,
            scramble,
            out,
        } => {
            let base = load_algebra(g)?;
            let mut l = build(*kind, &base, None)?;
            if let Some(seed) = scramble {
                l = l.scramble(*seed);
            }
            Ok((legendrian_to_json(&l), true, out.output.clone()))
        }
        Command::ValidateLegendrian { input, tol, out } => {
            let l = legendrian_from_json(&read_json(input)?, false)?;
            let tol = tol.unwrap_or_else(|| l.default_tolerance());
            let mut report = l.sym().axiom_report(tol);
            report.extend_prefixed("legendrian", &l.validate(tol));
            let doc = report_doc(
                "validate-legendrian",
                json!({ "input": input.display().to_string(), "tol": tol }),
                &report,
            );
            Ok((doc, report.passed(), out.output.clone()))
        }
        Command::Decompose { input, tol, out } => {
            let l = legendrian_from_json(&read_json(input)?, false)?;
            let d = decompose(&l, *tol)?;
            let mut doc = decomposition_to_json(&d);
            doc["command"] = json!("decompose");
            doc["version"] = json!(env!("CARGO_PKG_VERSION"));
            doc["config"] = json!({ "input": input.display().to_string(), "tol": tol });
            Ok((doc, d.passed(), out.output.clone()))
        }
        Command::VerifyForms {
            kind,
            g,
            samples,
            seed,
            tol,
            report,
        } => {
            let Some(name) = g.strip_prefix("builtin:") else {
                return Err(RunError::Usage(format!(
                    "verify-forms needs a matrix model; '{g}' is not a builtin (use builtin:<name>)"
                )));
            };
            let r = GroupRealization::builtin(*kind, name)?;
            let checks = verify_forms(&r, *samples as usize, *seed, *tol)?;
            let doc = json!({
                "case": kind.name(),
                "g": g,
                "samples": samples,
                "seed": seed,
                "tol": tol,
                "version": env!("CARGO_PKG_VERSION"),
                "checks": checks_to_json(&checks),
                "pass": checks.passed(),
            });
            Ok((doc, checks.passed(), report.clone()))
        }
    }
}

fn report_doc(command: &str, config: Value, report: &ResidualReport) -> Value {
    json!({
        "command": command,
        "version": env!("CARGO_PKG_VERSION"),
        "config": config,
        "checks": checks_to_json(report),
        "pass": report.passed(),
    })
}

fn read_json(path: &Path) -> Result<Value, RunError> {
    let text = fs::read_to_string(path).map_err(Error::from)?;
    Ok(serde_json::from_str(&text).map_err(Error::from)?)
}

/// `builtin:<name>` or a path to Lie-algebra JSON.
fn load_algebra(source: &str) -> Result<LieAlgebra, RunError> {
    match source.strip_prefix("builtin:") {
        Some(name) => Ok(builtin(name)?),
        None => Ok(algebra_from_json(&read_json(Path::new(source))?)?),
    }
}

fn algebra_report(g: &LieAlgebra, tol: f64) -> ResidualReport {
    let scale = g.max_structure_constant().max(1.0);
    let killing = g.killing_form().matrix;
    let mut report = ResidualReport::new();
    report.residual("jacobi", g.jacobi_residual(), tol * scale * scale);
    report.residual(
        "killing_symmetric",
        moment_space::linalg::max_abs(&(&killing - killing.transpose())),
        tol * scale * scale,
    );
    report.residual(
        "killing_invariant",
        g.invariance_residual(&killing),
        tol * scale.powi(3),
    );
    report
}

/// Every group-level suite, prefixed by family.
pub fn verify_forms(
    r: &GroupRealization,
    samples: usize,
    seed: u64,
    tol: f64,
) -> moment_space::Result<ResidualReport> {
    let mut all = ResidualReport::new();
    all.extend_prefixed("realization", &r.check_realization(samples, seed, tol)?);
    all.extend_prefixed("prop_tau", &check_prop_tau(r, samples, seed, tol)?);
    all.extend_prefixed("prop_xi", &check_prop_xi(r, samples, seed, tol)?);
    let (mindeg, _, _) = check_min_degeneracy_samples(r, samples, seed, tol)?;
    all.extend_prefixed("min_degeneracy", &mindeg);
    all.extend_prefixed("canonical", &cross_check_canonical(r, samples, seed, tol)?);
    if r.kind() == CanonicalType::Compact {
        let h = explicit_compact_point(r)?;
        let mut explicit = check_min_degeneracy(r, &h, tol)?;
        let gap = kernel_tau(r, &h)?.dim().abs_diff(kernel_plus_ad(r, &h)?.dim());
        explicit.residual("kernel_tau_dim_vs_ad", gap as f64, tol);
        all.extend_prefixed("explicit_point", &explicit);
    }
    Ok(all)
}
