//! Command-line front end.
//!
//! Each subcommand renders its complete output into a string before anything
//! is written, so a failure never leaves partial output behind.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::dist::{GeneralParams, Param};
use crate::error::Error;
use crate::feasibility::{
    check_triple, model_drop_determinism, model_drop_independence, model_drop_objectivity,
    validate_witness, FeasibilityReport, SettingsFamily, ValidationReport, WitnessModel,
    DEFAULT_ATOM_BUDGET,
};
use crate::hv::{classify, solve_family, special_solution, Classification, Interval, OnticTable};
use crate::montecarlo::{fringe_sweep, phi_grid, write_sweep_csv, SweepRow};
use crate::quantum::{joint_state, quantum_joint, quantum_params, Angle};
use crate::scalar::{format_rational, parse_rational, zero, Rational};
use crate::selftest;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
/// Infeasible triple check: an expected result, not an error.
pub const EXIT_INFEASIBLE: i32 = 3;
/// `selftest` found a failing criterion.
pub const EXIT_SELFTEST_FAILED: i32 = 4;

/// Overrides [`DEFAULT_ATOM_BUDGET`] for `demo --drop objectivity`.
pub const ATOM_BUDGET_ENV: &str = "HVNOGO_ATOM_BUDGET";

#[derive(Debug, Parser)]
#[command(name = "hvnogo", version, about = "Hidden-variable models of a delayed-choice experiment")]
pub struct Cli {
    /// Write output to this file instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    pub output: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Quantum amplitudes, joint distribution and reduced parameters.
    Quantum(QuantumArgs),
    /// Ontic solution family for given (x, e_p, e_w).
    Family(FamilyArgs),
    /// Decide determinism + independence + objectivity for a settings family.
    Feasibility {
        #[arg(long, value_name = "FILE")]
        input: PathBuf,
    },
    /// Build and validate a model that drops one assumption.
    Demo {
        #[arg(long, value_enum)]
        drop: DropArg,
        #[arg(long, value_name = "FILE")]
        input: PathBuf,
    },
    /// Monte Carlo fringe sweep over the ancilla phase.
    Sweep(SweepArgs),
    /// Run the acceptance checks and print a summary.
    Selftest,
}

#[derive(Debug, Args)]
pub struct QuantumArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Angle,
    #[arg(long, allow_hyphen_values = true)]
    pub phi: Angle,
}

#[derive(Debug, Args)]
pub struct FamilyArgs {
    #[arg(long, value_parser = rational_arg)]
    pub x: Rational,
    #[arg(long, value_parser = rational_arg)]
    pub ep: Rational,
    #[arg(long, value_parser = rational_arg)]
    pub ew: Rational,
    #[arg(long, value_parser = rational_arg, requires = "t")]
    pub s: Option<Rational>,
    #[arg(long, value_parser = rational_arg, requires = "s")]
    pub t: Option<Rational>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Angle,
    #[arg(long, allow_hyphen_values = true, default_value = "0")]
    pub phi_start: Angle,
    #[arg(long, allow_hyphen_values = true, default_value = "2*pi")]
    pub phi_end: Angle,
    #[arg(long, default_value_t = 17, value_parser = clap::value_parser!(u64).range(1..))]
    pub steps: u64,
    #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub shots: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DropArg {
    Objectivity,
    Determinism,
    Independence,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

fn rational_arg(text: &str) -> Result<Rational, String> {
    parse_rational(text).map_err(|e| e.to_string())
}

/// Rendered output and the status to exit with.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub status: i32,
    pub body: String,
}

/// A message for standard error and a nonzero status.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub status: i32,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            status: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn input(message: impl Into<String>) -> Self {
        Self {
            status: EXIT_INPUT,
            message: message.into(),
        }
    }
}

pub fn parse_atom_budget(value: Option<&str>) -> Result<u128, Failure> {
    match value {
        None => Ok(DEFAULT_ATOM_BUDGET),
        Some(text) => text
            .trim()
            .parse()
            .map_err(|_| Failure::usage(format!("{ATOM_BUDGET_ENV}: expected a nonnegative integer, got `{text}`"))),
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("output types serialize");
    text.push('\n');
    text
}

fn ok(body: String) -> Result<Outcome, Failure> {
    Ok(Outcome {
        status: EXIT_OK,
        body,
    })
}

#[derive(Serialize)]
struct RealParams {
    x: f64,
    e_p: f64,
    e_w: f64,
}

#[derive(Serialize)]
struct QuantumOutput {
    alpha: f64,
    phi: f64,
    /// `[re, im]` per basis state in `ab` order.
    amplitudes: Vec<[f64; 2]>,
    joint: [f64; 4],
    params: RealParams,
}

fn run_quantum(args: &QuantumArgs) -> Result<Outcome, Failure> {
    let state = joint_state(args.alpha, args.phi);
    let params = quantum_params(args.alpha, args.phi);
    let out = QuantumOutput {
        alpha: args.alpha.value(),
        phi: args.phi.value(),
        amplitudes: state.amplitudes().iter().map(|c| [c.re, c.im]).collect(),
        joint: *quantum_joint(args.alpha, args.phi).entries(),
        params: RealParams {
            x: *params.x(),
            e_p: *params.e_p(),
            e_w: *params.e_w(),
        },
    };
    ok(to_json(&out))
}

#[derive(Serialize)]
struct RationalParams {
    x: String,
    e_p: String,
    e_w: String,
}

#[derive(Serialize)]
struct FamilyOutput {
    params: RationalParams,
    /// Absent at boundary parameters, where the family is not two-dimensional.
    s_range: Option<Interval>,
    t_range: Option<Interval>,
    #[serde(skip_serializing_if = "Option::is_none")]
    note: Option<String>,
    s: String,
    t: String,
    instance: OnticTable,
    classification: Classification,
    lambda_marginal: [String; 2],
}

fn flag_for(param: Param) -> &'static str {
    match param {
        Param::X => "--x",
        Param::Ep => "--ep",
        Param::Ew => "--ew",
    }
}

fn run_family(args: &FamilyArgs) -> Result<Outcome, Failure> {
    let params = GeneralParams::new(args.x.clone(), args.ep.clone(), args.ew.clone()).map_err(|e| match e {
        Error::InvalidParam { param, .. } => Failure::usage(format!("{}: {e}", flag_for(param))),
        other => Failure::usage(other.to_string()),
    })?;
    let coords = args.s.clone().zip(args.t.clone());
    let (ranges, note, s, t, instance) = match solve_family(&params) {
        Ok(family) => {
            let (s, t) = coords.unwrap_or_else(|| (zero(), zero()));
            let instance = family
                .instantiate(&s, &t)
                .map_err(|e| Failure::usage(format!("--s/--t: {e}")))?;
            let ranges = (family.s_range().clone(), family.t_range().clone());
            (Some(ranges), None, s, t, instance)
        }
        Err(e) => {
            let zero = zero();
            if let Some((s, t)) = &coords {
                if *s != zero || *t != zero {
                    return Err(Failure::usage(format!("--s/--t: {e}; only s = t = 0 is defined here")));
                }
            }
            (None, Some(e.to_string()), zero.clone(), zero, special_solution(&params))
        }
    };
    let classification = classify(&instance, &params).expect("family members solve the system");
    let marginal = instance.lambda_marginal();
    let (s_range, t_range) = ranges.unzip();
    let out = FamilyOutput {
        params: RationalParams {
            x: format_rational(params.x()),
            e_p: format_rational(params.e_p()),
            e_w: format_rational(params.e_w()),
        },
        s_range,
        t_range,
        note,
        s: format_rational(&s),
        t: format_rational(&t),
        instance,
        classification,
        lambda_marginal: [format_rational(marginal.p0()), format_rational(marginal.p1())],
    };
    ok(to_json(&out))
}

fn load_family(path: &Path) -> Result<SettingsFamily, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::input(format!("--input {}: {e}", path.display())))?;
    SettingsFamily::from_json(&text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn run_feasibility(input: &Path) -> Result<Outcome, Failure> {
    let family = load_family(input)?;
    let report: FeasibilityReport = check_triple(&family);
    Ok(Outcome {
        status: if report.feasible { EXIT_OK } else { EXIT_INFEASIBLE },
        body: to_json(&report),
    })
}

#[derive(Serialize)]
struct DemoOutput {
    model: WitnessModel,
    validation: ValidationReport,
}

fn run_demo(drop: DropArg, input: &Path, atom_budget: u128) -> Result<Outcome, Failure> {
    let family = load_family(input)?;
    let model = match drop {
        DropArg::Independence => model_drop_independence(&family),
        DropArg::Determinism => model_drop_determinism(&family),
        DropArg::Objectivity => model_drop_objectivity(&family, atom_budget)
            .map_err(|e| Failure::usage(format!("{e} (raise {ATOM_BUDGET_ENV} to allow more)")))?,
    };
    let validation = validate_witness(&model, &family).map_err(|e| Failure::input(e.to_string()))?;
    ok(to_json(&DemoOutput { model, validation }))
}

fn run_sweep(args: &SweepArgs) -> Result<Outcome, Failure> {
    let steps = usize::try_from(args.steps).map_err(|_| Failure::usage("--steps: too large"))?;
    let grid = phi_grid(args.phi_start, args.phi_end, steps);
    let rows: Vec<SweepRow> =
        fringe_sweep(args.alpha, &grid, args.shots, args.seed).map_err(|e| Failure::usage(format!("--shots: {e}")))?;
    let body = match args.format {
        Format::Json => to_json(&rows),
        Format::Csv => {
            let mut buf = Vec::new();
            write_sweep_csv(&rows, &mut buf).expect("writing to memory");
            String::from_utf8(buf).expect("CSV is ASCII")
        }
    };
    ok(body)
}

fn run_selftest() -> Result<Outcome, Failure> {
    let results = selftest::run_all();
    let all = results.iter().all(|r| r.passed);
    Ok(Outcome {
        status: if all { EXIT_OK } else { EXIT_SELFTEST_FAILED },
        body: selftest::render(&results),
    })
}

/// Runs a parsed command. `atom_budget` is the DropObjectivity cap.
pub fn run(command: &Command, atom_budget: u128) -> Result<Outcome, Failure> {
    match command {
        Command::Quantum(args) => run_quantum(args),
        Command::Family(args) => run_family(args),
        Command::Feasibility { input } => run_feasibility(input),
        Command::Demo { drop, input } => run_demo(*drop, input, atom_budget),
        Command::Sweep(args) => run_sweep(args),
        Command::Selftest => run_selftest(),
    }
}

/// Parses `args`, runs, writes output and returns the process exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let budget = std::env::var(ATOM_BUDGET_ENV).ok();
    let outcome = parse_atom_budget(budget.as_deref()).and_then(|b| run(&cli.command, b));
    match outcome {
        Ok(Outcome { status, body }) => {
            let written = match &cli.output {
                Some(path) => fs::write(path, &body).map_err(|e| format!("--output {}: {e}", path.display())),
                None => io::stdout().lock().write_all(body.as_bytes()).map_err(|e| e.to_string()),
            };
            match written {
                Ok(()) => status,
                Err(message) => {
                    eprintln!("error: {message}");
                    EXIT_USAGE
                }
            }
        }
        Err(Failure { status, message }) => {
            eprintln!("error: {message}");
            status
        }
    }
}
