use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use sigmalab_core::contraction::{check_condition, kannan_supremum};
use sigmalab_core::harness::reproduce::reproduce;
use sigmalab_core::harness::run_theorem;
use sigmalab_core::metric::{validate_metric, DEFAULT_TOL};
use sigmalab_core::picard::{diagnose, solve, SolveResult};
use sigmalab_core::report::{document, solve_result_value, to_json, to_text, to_value, trace_summary};
use sigmalab_core::scenario::{parse_scenario_file, Scenario, ScenarioFile, SpaceDesc};
use sigmalab_core::sigma::{classify, FunctionClass, Outcome};

const EXIT_OK: u8 = 0;
const EXIT_FALSIFIED: u8 = 1;
const EXIT_UNDETERMINED: u8 = 2;
const EXIT_INPUT: u8 = 3;

#[derive(Parser)]
#[command(name = "sigmalab", version, about = "Check Kannan-type contraction conditions and run Picard iteration on finite metric spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Args)]
struct Opts {
    /// Also write the report to this path.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    mode: Option<Mode>,
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, global = true)]
    max_iter: Option<usize>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Positive,
    All,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Check the metric axioms of the scenario's space.
    Validate { file: PathBuf },
    /// Classify the scenario's comparison function.
    Classify { file: PathBuf },
    /// Sweep the scenario's contraction condition over all pairs.
    Check { file: PathBuf },
    /// Run the Picard pair iteration and its diagnostics.
    Solve { file: PathBuf },
    /// Evaluate the scenario's theorem: hypotheses and conclusion.
    Theorem { file: PathBuf },
    /// Rebuild a worked example and compare it with its stored expectations.
    Reproduce { id: String },
}

struct InputError(String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

fn read_file(path: &Path, opts: &Opts) -> Result<ScenarioFile, InputError> {
    let text = fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    let mut file = parse_scenario_file(&text)?;
    if let Some(m) = opts.mode {
        file.mode = Some(match m {
            Mode::Positive => "positive",
            Mode::All => "all",
        }
        .into());
    }
    if opts.tol.is_some() {
        file.tol = opts.tol;
    }
    if opts.max_iter.is_some() {
        file.max_iter = opts.max_iter;
    }
    if opts.seed.is_some() {
        file.seed = opts.seed;
    }
    Ok(file)
}

fn load(path: &Path, opts: &Opts) -> Result<Scenario, InputError> {
    Ok(Scenario::from_file(read_file(path, opts)?)?)
}

fn scenario_section(sc: &Scenario) -> Value {
    json!({ "name": sc.name, "points": sc.space.len(), "file": to_value(&sc.file) })
}

fn cmd_validate(path: &Path, opts: &Opts) -> Result<(Map<String, Value>, u8), InputError> {
    let file = read_file(path, opts)?;
    let mut m = Map::new();
    if let SpaceDesc::Finite {
        metric: Some(metric), ..
    } = &file.space
    {
        let tol = file.tol.unwrap_or(DEFAULT_TOL);
        let square = metric.iter().all(|row| row.len() == metric.len());
        if square && metric.iter().flatten().all(|v| v.is_finite()) {
            let violations = validate_metric(metric, tol);
            if !violations.is_empty() {
                m.insert("valid".into(), json!(false));
                m.insert("violations".into(), to_value(&violations));
                return Ok((m, EXIT_FALSIFIED));
            }
        }
    }
    let sc = Scenario::from_file(file)?;
    m.insert("scenario".into(), scenario_section(&sc));
    m.insert("valid".into(), json!(true));
    m.insert("violations".into(), json!([]));
    m.insert("labels".into(), json!(sc.space.labels()));
    m.insert("diameter".into(), json!(sc.space.diameter()));
    m.insert("complete".into(), json!(sc.space.is_complete()));
    Ok((m, EXIT_OK))
}

fn cmd_classify(path: &Path, opts: &Opts) -> Result<(Map<String, Value>, u8), InputError> {
    let sc = load(path, opts)?;
    let sigma = sc
        .sigma
        .as_ref()
        .ok_or_else(|| InputError("invalid `sigma`: classify needs a comparison function".into()))?;
    let cl = classify(sigma, &sc.c_values, &sc.search);
    let outcomes: Vec<Outcome> = sc
        .c_values
        .iter()
        .filter_map(|&c| cl.class(FunctionClass::SigmaC, Some(c)).map(|v| v.outcome))
        .collect();
    let code = if outcomes.contains(&Outcome::Falsified) {
        EXIT_FALSIFIED
    } else if outcomes.iter().all(|o| *o == Outcome::CertifiedHolds) {
        EXIT_OK
    } else {
        EXIT_UNDETERMINED
    };
    let mut m = Map::new();
    m.insert("scenario".into(), scenario_section(&sc));
    m.insert("classification".into(), to_value(&cl));
    Ok((m, code))
}

fn cmd_check(path: &Path, opts: &Opts) -> Result<(Map<String, Value>, u8), InputError> {
    let sc = load(path, opts)?;
    let spec = sc
        .condition
        .as_ref()
        .ok_or_else(|| InputError("invalid `condition`: check needs a condition".into()))?;
    let r = check_condition(&sc.space, &sc.t, &sc.s, spec, sc.mode)?;
    let mut m = Map::new();
    m.insert("scenario".into(), scenario_section(&sc));
    m.insert("report".into(), to_value(&r));
    if matches!(spec, sigmalab_core::contraction::ConditionSpec::ClassicalKannan { .. }) {
        let sup = kannan_supremum(&sc.space, &sc.t)?;
        m.insert("kannan_supremum".into(), to_value(&sup));
    }
    Ok((m, if r.holds { EXIT_OK } else { EXIT_FALSIFIED }))
}

fn cmd_solve(path: &Path, opts: &Opts) -> Result<(Map<String, Value>, u8), InputError> {
    let sc = load(path, opts)?;
    let sol = solve(&sc.space, &sc.t, &sc.s, sc.base, &sc.picard)?;
    let diag = diagnose(&sol.trace, &sc.space, &sc.t, &sc.s, &sc.picard)?;
    let code = match sol.result {
        SolveResult::FixedPoint { .. } | SolveResult::CoincidencePoint { .. } => EXIT_OK,
        SolveResult::BudgetExhausted { .. } => EXIT_UNDETERMINED,
        _ => EXIT_FALSIFIED,
    };
    let mut m = Map::new();
    m.insert("scenario".into(), scenario_section(&sc));
    m.insert("result".into(), solve_result_value(&sc.space, &sol.result));
    m.insert("trace".into(), trace_summary(&sc.space, &sol.trace));
    m.insert("diagnostics".into(), to_value(&diag));
    Ok((m, code))
}

fn cmd_theorem(path: &Path, opts: &Opts) -> Result<(Map<String, Value>, u8), InputError> {
    let sc = load(path, opts)?;
    let r = run_theorem(&sc)?;
    let mut m = Map::new();
    m.insert("scenario".into(), scenario_section(&sc));
    m.insert("theorem".into(), to_value(&r));
    m.insert("all_hold".into(), json!(r.all_hold()));
    Ok((m, r.exit_code() as u8))
}

fn cmd_reproduce(id: &str) -> Result<(Map<String, Value>, u8), InputError> {
    let r = reproduce(id)?;
    let code = r.exit_code() as u8;
    let mut m = Map::new();
    m.insert("example".into(), json!(r.id));
    m.insert("passed".into(), json!(r.passed()));
    m.insert("checks".into(), to_value(&r.checks));
    m.extend(r.sections);
    Ok((m, code))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let opts = &cli.opts;
    let (name, result) = match &cli.command {
        Command::Validate { file } => ("validate", cmd_validate(file, opts)),
        Command::Classify { file } => ("classify", cmd_classify(file, opts)),
        Command::Check { file } => ("check", cmd_check(file, opts)),
        Command::Solve { file } => ("solve", cmd_solve(file, opts)),
        Command::Theorem { file } => ("theorem", cmd_theorem(file, opts)),
        Command::Reproduce { id } => ("reproduce", cmd_reproduce(id)),
    };
    let (sections, code) = match result {
        Ok(r) => r,
        Err(InputError(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(EXIT_INPUT);
        }
    };
    let doc = document(name, sections);
    let out = match opts.format {
        Format::Json => to_json(&doc),
        Format::Text => to_text(&doc),
    };
    print!("{out}");
    if let Some(path) = &opts.out {
        if let Err(e) = fs::write(path, &out) {
            eprintln!("error: {}: {e}", path.display());
            return ExitCode::from(EXIT_INPUT);
        }
    }
    ExitCode::from(code)
}
