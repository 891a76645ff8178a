//! Command-line front end for `objcheck-core`.
//!
//! Exit codes: 0 objective or success, 1 not objective (or no rotation
//! exists), 2 usage, input or evaluation error, 3 inconclusive.

pub mod matrix_file;
pub mod report;

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use objcheck_core::objectivity::{
    extract_profile, quadratic_objectivity, test_function_objectivity,
    test_function_objectivity_par, MonteCarloConfig, DEFAULT_FUNCTION_TOLERANCE,
    DEFAULT_QUADRATIC_TOLERANCE,
};
use objcheck_core::rotation::{haar_sample, rotation_mapping};
use objcheck_core::{
    parse, Expression, ObjectivityReport, QuadraticForm, RadialSet, RotationError, SeedStream,
    Vector, Verdict,
};
use thiserror::Error;

use matrix_file::{format_matrix, format_number, parse_matrix, parse_number};
use report::ReportDocument;

pub const EXIT_OK: u8 = 0;
pub const EXIT_NOT_OBJECTIVE: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_INCONCLUSIVE: u8 = 3;

/// Inputs within this distance of unit norm are normalized; others rejected.
const UNIT_SLACK: f64 = 1e-6;

#[derive(Debug, Parser)]
#[command(
    name = "objcheck",
    version,
    about = "Rotations in SO(m) and objectivity checks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a rotation Q with Q·u = v.
    MakeRotation(MakeRotationArgs),
    /// Decide whether x ↦ xᵀHx is objective.
    CheckQuadratic(CheckQuadraticArgs),
    /// Search for rotations that change the value of an expression.
    CheckFunction(CheckFunctionArgs),
    /// Tabulate φ(t) = f(t·e₁).
    Profile(ProfileArgs),
    /// Write Haar-distributed rotation matrices.
    SampleRotation(SampleRotationArgs),
}

#[derive(Debug, Args)]
pub struct MakeRotationArgs {
    /// Unit vector, whitespace or comma separated.
    #[arg(long, allow_hyphen_values = true)]
    pub u: String,
    /// Target unit vector of the same length.
    #[arg(long, allow_hyphen_values = true)]
    pub v: String,
    /// Matrix file to write; standard output if absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CheckQuadraticArgs {
    /// Matrix file holding H.
    pub matrix: PathBuf,
    #[arg(long, default_value_t = DEFAULT_QUADRATIC_TOLERANCE)]
    pub tol: f64,
    /// Print the report as JSON.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct CheckFunctionArgs {
    /// Expression in x1…xm, norm(x) and dot(x, x).
    #[arg(allow_hyphen_values = true)]
    pub expr: String,
    #[arg(long)]
    pub dim: usize,
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0.1)]
    pub radius_min: f64,
    #[arg(long, default_value_t = 10.0)]
    pub radius_max: f64,
    #[arg(long, default_value_t = DEFAULT_FUNCTION_TOLERANCE)]
    pub tol: f64,
    #[arg(long)]
    pub json: bool,
    /// Run trials on all cores; the report is the same as without.
    #[arg(long)]
    pub parallel: bool,
}

#[derive(Debug, Args)]
pub struct ProfileArgs {
    #[arg(allow_hyphen_values = true)]
    pub expr: String,
    #[arg(long)]
    pub dim: usize,
    /// Comma-separated radii, each ≥ 0.
    #[arg(long)]
    pub radii: String,
    /// CSV file to write; standard output if absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SampleRotationArgs {
    #[arg(long)]
    pub dim: usize,
    #[arg(long, default_value_t = 1)]
    pub count: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Sample i goes to `{out}-{i}.txt`.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    NoRotation(RotationError),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => EXIT_INPUT,
            CliError::NoRotation(_) => EXIT_NOT_OBJECTIVE,
        }
    }
}

fn input(e: impl ToString) -> CliError {
    CliError::Input(e.to_string())
}

/// Runs one command, writing its report to `out`; returns the exit code.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<u8, CliError> {
    match cli.command {
        Command::MakeRotation(a) => make_rotation(&a, out),
        Command::CheckQuadratic(a) => check_quadratic(&a, out),
        Command::CheckFunction(a) => check_function(&a, out),
        Command::Profile(a) => profile(&a, out),
        Command::SampleRotation(a) => sample_rotation(&a, out),
    }
}

fn emit(out: &mut dyn Write, path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| input(format!("{}: {e}", p.display()))),
        None => out.write_all(text.as_bytes()).map_err(input),
    }
}

fn parse_text_vector(name: &str, text: &str) -> Result<Vector, CliError> {
    let values = text
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|s| !s.is_empty())
        .map(|s| parse_number(s).ok_or_else(|| input(format!("{name}: invalid number {s:?}"))))
        .collect::<Result<Vec<_>, _>>()?;
    let v = Vector::new(values).map_err(|e| input(format!("{name}: {e}")))?;
    let norm = v.norm();
    if (norm - 1.0).abs() > UNIT_SLACK {
        return Err(input(format!(
            "{name} must be a unit vector, its norm is {norm}"
        )));
    }
    Ok(v.normalized().expect("norm close to 1"))
}

fn make_rotation(args: &MakeRotationArgs, out: &mut dyn Write) -> Result<u8, CliError> {
    let u = parse_text_vector("u", &args.u)?;
    let v = parse_text_vector("v", &args.v)?;
    let q = rotation_mapping(&u, &v).map_err(|e| match e {
        RotationError::NoProperRotation { .. } => CliError::NoRotation(e),
        other => input(other),
    })?;
    emit(out, args.out.as_deref(), &format_matrix(q.matrix()))?;
    Ok(EXIT_OK)
}

fn verdict_code(report: &ObjectivityReport) -> u8 {
    match report.verdict() {
        Verdict::Objective => EXIT_OK,
        Verdict::NotObjective => EXIT_NOT_OBJECTIVE,
        Verdict::Inconclusive => EXIT_INCONCLUSIVE,
    }
}

fn join(values: &[f64]) -> String {
    values
        .iter()
        .map(|&v| format_number(v))
        .collect::<Vec<_>>()
        .join(" ")
}

fn render_text(report: &ObjectivityReport, seed: Option<u64>) -> String {
    let mut s = String::new();
    let line = |s: &mut String, key: &str, value: String| {
        writeln!(s, "{key}: {value}").expect("writing to a String")
    };
    let doc = serde_json::to_value(report.verdict()).expect("verdicts serialize");
    line(
        &mut s,
        "verdict",
        doc.as_str().unwrap_or_default().to_string(),
    );
    let method = serde_json::to_value(report.method()).expect("methods serialize");
    line(
        &mut s,
        "method",
        method.as_str().unwrap_or_default().to_string(),
    );
    if let Some(alpha) = report.alpha() {
        line(&mut s, "alpha", format_number(alpha));
    }
    line(&mut s, "trials", report.trials().to_string());
    line(&mut s, "tolerance", format!("{:e}", report.tolerance()));
    if let Some(seed) = seed {
        line(&mut s, "seed", seed.to_string());
    }
    if let Some(w) = report.witness() {
        s.push_str("witness:\n");
        line(&mut s, "  x", join(w.x.as_slice()));
        line(&mut s, "  f_x", format_number(w.f_x));
        line(&mut s, "  f_qx", format_number(w.f_qx));
        s.push_str("  q:\n");
        for row in w.q.matrix().rows() {
            writeln!(s, "    {}", join(row)).expect("writing to a String");
        }
    }
    s
}

fn print_report(
    out: &mut dyn Write,
    report: ObjectivityReport,
    seed: Option<u64>,
    json: bool,
) -> Result<u8, CliError> {
    let code = verdict_code(&report);
    let text = if json {
        ReportDocument::new(report, seed).to_json() + "\n"
    } else {
        render_text(&report, seed)
    };
    emit(out, None, &text)?;
    Ok(code)
}

fn check_quadratic(args: &CheckQuadraticArgs, out: &mut dyn Write) -> Result<u8, CliError> {
    let path = &args.matrix;
    let text = fs::read_to_string(path).map_err(|e| input(format!("{}: {e}", path.display())))?;
    let h = parse_matrix(&text).map_err(|e| input(format!("{}: {e}", path.display())))?;
    let report = quadratic_objectivity(&QuadraticForm::new(h), args.tol).map_err(input)?;
    print_report(out, report, None, args.json)
}

fn point_expression(src: &str, dim: usize) -> Result<Expression, CliError> {
    if dim == 0 {
        return Err(input("--dim must be at least 1"));
    }
    let expr = parse(src).map_err(|e| input(format!("cannot parse expression: {e}")))?;
    if expr.uses_param() {
        return Err(input(
            "t is only meaningful in a profile φ(t), use x1…xm, norm(x) or dot(x, x)",
        ));
    }
    let i = expr.max_variable_index();
    if i > dim {
        return Err(input(format!("x{i} does not exist in dimension {dim}")));
    }
    Ok(expr)
}

fn check_function(args: &CheckFunctionArgs, out: &mut dyn Write) -> Result<u8, CliError> {
    let expr = point_expression(&args.expr, args.dim)?;
    let gamma = RadialSet::shell(args.dim, args.radius_min, args.radius_max).map_err(input)?;
    let config = MonteCarloConfig::new(args.trials, args.tol);
    let stream = SeedStream::new(args.seed);
    let report = if args.parallel {
        test_function_objectivity_par(&expr, args.dim, &gamma, &config, &stream)
    } else {
        test_function_objectivity(&expr, args.dim, &gamma, &config, &stream)
    }
    .map_err(input)?;
    print_report(out, report, Some(args.seed), args.json)
}

fn profile(args: &ProfileArgs, out: &mut dyn Write) -> Result<u8, CliError> {
    let expr = point_expression(&args.expr, args.dim)?;
    let grid = args
        .radii
        .split(',')
        .map(str::trim)
        .map(|s| parse_number(s).ok_or_else(|| input(format!("invalid radius {s:?}"))))
        .collect::<Result<Vec<_>, _>>()?;
    if let Some(r) = grid.iter().find(|&&r| r < 0.0) {
        return Err(input(format!("radius {r} is negative")));
    }
    let gamma = RadialSet::new(args.dim, vec![], grid.clone()).map_err(input)?;
    let profile =
        extract_profile(&expr, &gamma, &Vector::basis(args.dim, 0), &grid).map_err(input)?;
    let mut csv = String::from("t,phi\n");
    for &(t, phi) in profile.samples().expect("extracted profiles are sampled") {
        writeln!(csv, "{},{}", format_number(t), format_number(phi)).expect("writing to a String");
    }
    emit(out, args.out.as_deref(), &csv)?;
    Ok(EXIT_OK)
}

fn sample_rotation(args: &SampleRotationArgs, out: &mut dyn Write) -> Result<u8, CliError> {
    if args.dim == 0 {
        return Err(input("--dim must be at least 1"));
    }
    if args.count == 0 {
        return Err(input("--count must be at least 1"));
    }
    let stream = SeedStream::new(args.seed);
    let mut listing = format!("seed: {}\n", args.seed);
    for i in 0..args.count {
        let q = haar_sample(args.dim, &mut stream.substream(i as u64));
        let mut name = args.out.clone().into_os_string();
        name.push(format!("-{i}.txt"));
        let path = PathBuf::from(name);
        emit(out, Some(&path), &format_matrix(q.matrix()))?;
        writeln!(listing, "{}", path.display()).expect("writing to a String");
    }
    emit(out, None, &listing)?;
    Ok(EXIT_OK)
}
