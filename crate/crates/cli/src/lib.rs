//! Command-line front end: every command prints one JSON report.

pub mod reproduce;

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use hardybox_core::info_causality::{case_ic_verdict, max_success_under_ic, satisfies_ic_necessary, IcSearch};
use hardybox_core::quantum::{
    example_report, max_quantum_hardy, paper_example, MeasurementSetup, QuantumSearch, TwoQubitState,
};
use hardybox_core::randomness::table_discrepancies;
use hardybox_core::*;
use serde::Serialize;
use serde_json::{json, Value};
use std::result::Result;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, Parser)]
#[command(name = "hardybox", version, about = "Hardy nonlocality, local randomness and information causality")]
pub struct Cli {
    /// Numerical tolerance for equality tests.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    /// Seed for every stochastic command.
    #[arg(long, global = true, default_value_t = 7)]
    pub seed: u64,
    /// Spaces of JSON indentation; 0 prints compact JSON.
    #[arg(long, global = true, default_value_t = 2)]
    pub json_indent: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Vertices, mixtures and checks on no-signaling boxes.
    #[command(name = "box", subcommand)]
    Box(BoxCmd),
    /// Hardy boxes from coefficients and back.
    #[command(subcommand)]
    Hardy(HardyCmd),
    /// Inputs whose outcome marginals are uniform.
    Classify { file: PathBuf },
    /// Randomness cases of the Hardy family.
    #[command(subcommand)]
    Case(CaseCmd),
    /// Information causality.
    #[command(subcommand)]
    Ic(IcCmd),
    /// Two-qubit realizations.
    #[command(subcommand)]
    Quantum(QuantumCmd),
    /// Run every acceptance criterion.
    ReproduceAll(ReproduceArgs),
}

#[derive(Debug, Subcommand)]
pub enum BoxCmd {
    /// Vertex by name, e.g. L0001 or NL001.
    Vertex { id: String },
    /// Convex mixture from a weights file.
    Mix { file: PathBuf },
    /// No-signaling and locality of a box file.
    Check { file: PathBuf },
}

#[derive(Debug, Subcommand)]
pub enum HardyCmd {
    Build {
        /// Six comma-separated weights.
        #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
        c: Vec<f64>,
    },
    Check {
        file: PathBuf,
    },
    Decompose {
        file: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
pub enum CaseCmd {
    Solve {
        k: u8,
    },
    Sample {
        k: u8,
        #[arg(long, default_value_t = 10)]
        n: usize,
    },
    Ic {
        k: u8,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum IcCmd {
    Check {
        file: PathBuf,
    },
    Case {
        k: u8,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
    },
    Optimize {
        #[arg(long, default_value_t = 1000)]
        resolution: usize,
        #[arg(long, default_value_t = 100)]
        refine: usize,
        /// Drop the IC constraint and keep only the simplex.
        #[arg(long)]
        no_ic: bool,
    },
}

#[derive(Debug, Subcommand)]
pub enum QuantumCmd {
    Example,
    Eval {
        #[arg(long, allow_hyphen_values = true)]
        beta: f64,
        #[arg(long, allow_hyphen_values = true)]
        gamma: f64,
        #[arg(long)]
        setup: PathBuf,
    },
    Optimize {
        #[arg(long, default_value_t = 64)]
        starts: usize,
        #[arg(long, default_value_t = 40_000)]
        iterations: usize,
    },
}

#[derive(Debug, Clone, Args)]
pub struct ReproduceArgs {
    /// Rotate the example's A by this angle before checking it.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub perturb_example: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub command: String,
    pub inputs: Value,
    pub results: Value,
    pub tool_version: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug)]
pub enum CliError {
    Validation(String),
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => EXIT_VALIDATION,
            CliError::Internal(_) => EXIT_INTERNAL,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Validation(m) | CliError::Internal(m) => m,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::LpNotConverged(_) => CliError::Internal(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

fn to_value<T: Serialize>(v: &T) -> Result<Value, CliError> {
    serde_json::to_value(v).map_err(|e| CliError::Internal(e.to_string()))
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
}

/// Reads a box file, also accepting a report whose results hold a box.
fn read_box(path: &Path) -> Result<(BipartiteBox, Option<String>), CliError> {
    let text = read(path)?;
    let value: Value = serde_json::from_str(&text).map_err(|e| CliError::Validation(format!("parse error: {e}")))?;
    let inner = match value.get("results") {
        Some(r) => r.get("box").unwrap_or(r),
        None => &value,
    };
    Ok(BipartiteBox::from_json_str(&inner.to_string())?)
}

fn box_value(bx: &BipartiteBox, label: Option<&str>) -> Result<Value, CliError> {
    to_value(&bx.to_json(label))
}

pub fn render(report: &RunReport, indent: usize) -> String {
    if indent == 0 {
        return serde_json::to_string(report).expect("report serializes");
    }
    let pad = vec![b' '; indent];
    let fmt = serde_json::ser::PrettyFormatter::with_indent(&pad);
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, fmt);
    report.serialize(&mut ser).expect("report serializes");
    String::from_utf8(out).expect("JSON is UTF-8")
}

fn report(command: &str, inputs: Value, results: Value, seed: Option<u64>) -> RunReport {
    RunReport {
        command: command.to_string(),
        inputs,
        results,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        seed,
    }
}

fn case(k: u8) -> Result<RandomnessCase, CliError> {
    Ok(RandomnessCase::new(k)?)
}

/// Executes a parsed command. Reproduction failures are reported through
/// the `passed` flag of the results, not as an error.
pub fn execute(cli: &Cli) -> Result<RunReport, CliError> {
    let tol = cli.tol;
    if !(tol.is_finite() && tol >= 0.0) {
        return Err(CliError::Validation(format!("tolerance must be a nonnegative number, got {tol}")));
    }
    let seed = cli.seed;
    Ok(match &cli.command {
        Command::Box(BoxCmd::Vertex { id }) => {
            let v: VertexId = id.parse()?;
            report("box vertex", json!({ "id": id }), box_value(&v.to_box(), Some(&v.to_string()))?, None)
        }
        Command::Box(BoxCmd::Mix { file }) => {
            let weights: ConvexWeights =
                serde_json::from_str(&read(file)?).map_err(|e| CliError::Validation(format!("weights: {e}")))?;
            let bx = mix(&weights);
            report("box mix", json!({ "file": file }), box_value(&bx, None)?, None)
        }
        Command::Box(BoxCmd::Check { file }) => {
            let (bx, label) = read_box(file)?;
            let gap = bx.signaling_gap();
            let no_signaling = bx.is_no_signaling(tol);
            let local = if no_signaling { Some(bx.is_local(tol)?) } else { None };
            report(
                "box check",
                json!({ "file": file, "tol": tol }),
                json!({ "label": label, "no_signaling": no_signaling, "signaling_gap": gap, "local": local }),
                None,
            )
        }
        Command::Hardy(HardyCmd::Build { c }) => {
            let arr: [f64; 6] = c
                .as_slice()
                .try_into()
                .map_err(|_| CliError::Validation(format!("expected 6 weights, got {}", c.len())))?;
            let coeffs = HardyCoefficients::new(arr)?;
            let bx = hardy_box(&coeffs);
            report(
                "hardy build",
                json!({ "c": c }),
                json!({ "box": box_value(&bx, Some("hardy"))?, "success": success_probability(&coeffs) }),
                None,
            )
        }
        Command::Hardy(HardyCmd::Check { file }) => {
            let (bx, _) = read_box(file)?;
            report("hardy check", json!({ "file": file, "tol": tol }), to_value(&is_hardy(&bx, tol))?, None)
        }
        Command::Hardy(HardyCmd::Decompose { file }) => {
            let (bx, _) = read_box(file)?;
            let c = decompose(&bx, tol)?;
            report("hardy decompose", json!({ "file": file, "tol": tol }), to_value(&c)?, None)
        }
        Command::Classify { file } => {
            let (bx, _) = read_box(file)?;
            let set = classify(&bx, tol);
            let case = RandomnessCase::from_inputs(&set).map(|c| c.index);
            report("classify", json!({ "file": file, "tol": tol }), json!({ "random_inputs": set, "case": case }), None)
        }
        Command::Case(CaseCmd::Solve { k }) => {
            let case = case(*k)?;
            let family = solve_case(&case);
            let conditions: Vec<String> = family.constraints.iter().map(|c| c.to_string()).collect();
            report(
                "case solve",
                json!({ "k": k }),
                json!({
                    "family": to_value(&family)?,
                    "conditions": conditions,
                    "table_discrepancies": table_discrepancies(&family),
                }),
                None,
            )
        }
        Command::Case(CaseCmd::Sample { k, n }) => {
            let samples = sample_case(&case(*k)?, *n, seed)?;
            report("case sample", json!({ "k": k, "n": n }), to_value(&samples)?, Some(seed))
        }
        Command::Case(CaseCmd::Ic { k, samples }) | Command::Ic(IcCmd::Case { k, samples }) => {
            let r = case_ic_verdict(&case(*k)?, *samples, seed)?;
            let name = if matches!(cli.command, Command::Case(_)) { "case ic" } else { "ic case" };
            report(name, json!({ "k": k, "samples": samples }), to_value(&r)?, Some(seed))
        }
        Command::Ic(IcCmd::Check { file }) => {
            let (bx, _) = read_box(file)?;
            report("ic check", json!({ "file": file, "tol": tol }), to_value(&satisfies_ic_necessary(&bx, tol))?, None)
        }
        Command::Ic(IcCmd::Optimize { resolution, refine, no_ic }) => {
            let search = IcSearch { resolution: *resolution, refine_iterations: *refine, enforce_ic: !no_ic };
            report("ic optimize", to_value(&search)?, to_value(&max_success_under_ic(&search))?, None)
        }
        Command::Quantum(QuantumCmd::Example) => {
            report("quantum example", json!({}), to_value(&paper_example())?, None)
        }
        Command::Quantum(QuantumCmd::Eval { beta, gamma, setup }) => {
            let state = TwoQubitState::new(*beta, *gamma)?;
            let m = MeasurementSetup::from_json_str(&read(setup)?)?;
            report(
                "quantum eval",
                json!({ "beta": beta, "gamma": gamma, "setup": to_value(&m)? }),
                to_value(&example_report(state, m))?,
                None,
            )
        }
        Command::Quantum(QuantumCmd::Optimize { starts, iterations }) => {
            if *starts == 0 {
                return Err(CliError::Validation("need at least one start".into()));
            }
            let search = QuantumSearch { starts: *starts, seed, iterations: *iterations, ..Default::default() };
            report("quantum optimize", to_value(&search)?, to_value(&max_quantum_hardy(&search))?, Some(seed))
        }
        Command::ReproduceAll(args) => {
            let outcomes = reproduce::run_all(args, seed, &mut |o| eprintln!("{o}"));
            let passed = outcomes.iter().all(|o| o.passed);
            report(
                "reproduce-all",
                json!({ "perturb_example": args.perturb_example }),
                json!({ "passed": passed, "criteria": outcomes }),
                Some(seed),
            )
        }
    })
}

/// Parses `argv`, runs the command and writes the report; returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
        }
    };
    match execute(&cli) {
        Ok(r) => {
            println!("{}", render(&r, cli.json_indent));
            let failed = r.command == "reproduce-all" && r.results["passed"] != Value::Bool(true);
            if failed {
                EXIT_INTERNAL
            } else {
                EXIT_OK
            }
        }
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.exit_code()
        }
    }
}
