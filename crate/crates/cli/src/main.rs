use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use ramif_core::algebra::Field;
use ramif_core::codec::{self, Document, Value};
use ramif_core::dilatation::{fsat_conductor, model_for, oracle_charform, oracle_member, ModelOptions, OracleCharForm, Section};
use ramif_core::error::Error;
use ramif_core::forms::{charform_omega, omega_conductor};
use ramif_core::harness::{run_suite, Suite, SuiteParams};
use ramif_core::witt::{bk_log_conductor, charform_h1, charform_witt, matsuda_conductor, FDecomposed, WittVector};

const GUARD_VAR: &str = "RAMIF_PRECISION_GUARD";

#[derive(Parser)]
#[command(name = "ramif", version, about = "Conductors and characteristic forms of differential forms and Witt vectors")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the conductor of the input.
    Conductor {
        #[arg(value_enum)]
        kind: ConductorKind,
        #[command(flatten)]
        input: InputArgs,
        /// Witt filtration to use.
        #[arg(long, value_enum, default_value_t = WittFiltration::Saturated)]
        filtration: WittFiltration,
    },
    /// Print the characteristic form at level n (forms) or r (Witt vectors) as JSON.
    Charform {
        #[arg(value_enum)]
        kind: CharformKind,
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, visible_alias = "r")]
        n: u32,
    },
    /// Run the dilatation oracle on one input.
    Oracle {
        #[arg(value_enum)]
        action: OracleAction,
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, visible_alias = "r")]
        n: u32,
        #[arg(long)]
        precision: Option<i64>,
    },
    /// Run a verification suite and print a summary; exits 1 on any mismatch.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ConductorKind {
    Omega,
    Witt,
}

#[derive(Clone, Copy, ValueEnum)]
enum CharformKind {
    Omega,
    Witt,
    H1,
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleAction {
    Check,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum WittFiltration {
    /// `Σ_j F^j(fil_r)`, decided by the oracle.
    Saturated,
    Matsuda,
    Log,
}

#[derive(Args)]
struct InputArgs {
    /// Characteristic the input file must declare (0 for Q).
    #[arg(long = "char")]
    characteristic: Option<u32>,
    #[arg(long)]
    input: PathBuf,
    /// Expected dimension (number of divisor variables plus one).
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long)]
    witt_length: Option<usize>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(value_parser = parse_suite)]
    suite: Suite,
    #[arg(long = "char")]
    characteristic: u32,
    #[arg(long)]
    dim: Option<usize>,
    /// Form degree; all degrees `1..=dim` when omitted.
    #[arg(long)]
    degree: Option<usize>,
    #[arg(long)]
    min_n: Option<u32>,
    #[arg(long, visible_alias = "n", visible_alias = "r")]
    max_n: Option<u32>,
    #[arg(long)]
    witt_length: Option<usize>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    max_pole: Option<i64>,
    #[arg(long)]
    sweep_pole: Option<i64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    report: Option<PathBuf>,
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Errors that end the run, with their exit code.
enum Failure {
    Input(String),
    Mismatch,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure::Input(e.to_string())
    }
}

fn guard_from_env() -> Result<i64, Failure> {
    match std::env::var(GUARD_VAR) {
        Err(_) => Ok(0),
        Ok(v) => v
            .trim()
            .parse::<i64>()
            .ok()
            .filter(|g| *g >= 0)
            .ok_or_else(|| Failure::Input(format!("{GUARD_VAR} must be a non-negative integer, got `{v}`"))),
    }
}

fn read_input(args: &InputArgs) -> Result<Document, Failure> {
    let text = std::fs::read_to_string(&args.input)
        .map_err(|e| Failure::Input(format!("cannot read {}: {e}", args.input.display())))?;
    let doc = match args.characteristic {
        Some(c) => Document::decode_expecting(&text, Field::from_characteristic(c)?)?,
        None => Document::decode(&text)?,
    };
    if let Some(d) = args.dim {
        if doc.value.nvars() + 1 != d {
            return Err(Failure::Input(format!("input has dimension {}, --dim says {d}", doc.value.nvars() + 1)));
        }
    }
    if let Some(n) = args.witt_length {
        let found = match &doc.value {
            Value::Witt(a) => Some(a.len()),
            Value::Decomposed(x) => Some(x.witt_length()),
            _ => None,
        };
        if found != Some(n) {
            return Err(Failure::Input(format!("--witt-length {n} does not match the input")));
        }
    }
    Ok(doc)
}

fn expect_form(doc: &Document) -> Result<&ramif_core::forms::DiffForm, Failure> {
    match &doc.value {
        Value::DiffForm(w) => Ok(w),
        _ => Err(Failure::Input("expected a diff_form document".into())),
    }
}

/// A plain Witt vector is read as the presentation with a single `j = 0` part.
fn expect_decomposed(doc: &Document) -> Result<FDecomposed, Failure> {
    match &doc.value {
        Value::Decomposed(x) => Ok(x.clone()),
        Value::Witt(a) => Ok(FDecomposed::new(vec![(0, a.clone())])?),
        _ => Err(Failure::Input("expected a witt_vector or f_decomposed_witt document".into())),
    }
}

fn expect_witt(doc: &Document) -> Result<WittVector, Failure> {
    match &doc.value {
        Value::Witt(a) => Ok(a.clone()),
        Value::Decomposed(x) => Ok(x.recombine()?),
        _ => Err(Failure::Input("expected a witt_vector or f_decomposed_witt document".into())),
    }
}

// A closed pipe on stdout is not an error worth a panic.
fn say(line: &str) {
    let _ = writeln!(std::io::stdout(), "{line}");
}

fn print_json(v: &serde_json::Value) {
    say(&serde_json::to_string_pretty(v).expect("plain data serializes"));
}

fn conductor(kind: ConductorKind, input: &InputArgs, filtration: WittFiltration) -> Result<(), Failure> {
    let doc = read_input(input)?;
    let c = match kind {
        ConductorKind::Omega => omega_conductor(expect_form(&doc)?)?,
        ConductorKind::Witt => {
            let a = expect_witt(&doc)?;
            match filtration {
                WittFiltration::Saturated => fsat_conductor(&a)?,
                WittFiltration::Matsuda => matsuda_conductor(&a),
                WittFiltration::Log => bk_log_conductor(&a),
            }
        }
    };
    say(&c.to_string());
    Ok(())
}

fn charform(kind: CharformKind, input: &InputArgs, n: u32) -> Result<(), Failure> {
    let doc = read_input(input)?;
    let vars = &doc.variables;
    let out = match kind {
        CharformKind::Omega => codec::omega_charform_json(&charform_omega(expect_form(&doc)?, n)?, vars),
        CharformKind::Witt => codec::witt_charform_json(&charform_witt(&expect_decomposed(&doc)?, n)?, vars),
        CharformKind::H1 => codec::poly_charform_json(&charform_h1(&charform_witt(&expect_decomposed(&doc)?, n)?), vars),
    };
    print_json(&out);
    Ok(())
}

fn oracle_check(input: &InputArgs, n: u32, precision: Option<i64>) -> Result<(), Failure> {
    let doc = read_input(input)?;
    let section = match &doc.value {
        Value::DiffForm(w) => Section::Form(w.clone()),
        Value::Laurent(f) => Section::Function(f.clone()),
        _ => Section::Witt(expect_witt(&doc)?),
    };
    let opts = ModelOptions { guard: guard_from_env()?, precision, ..ModelOptions::default() };
    let member = oracle_member(&section, n, &opts)?;
    let mut out = json!({ "level": n, "member": member });
    if member && n >= 2 {
        let c = oracle_charform(&section, &model_for(&section, n, &opts)?)?;
        out["charform"] = match c {
            OracleCharForm::Omega(c) => codec::omega_charform_json(&c, &doc.variables),
            OracleCharForm::Witt(c) => codec::witt_charform_json(&c, &doc.variables),
        };
    }
    print_json(&out);
    Ok(())
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display())))
}

fn verify(args: &VerifyArgs) -> Result<(), Failure> {
    let mut params = SuiteParams::new(args.suite, args.characteristic);
    if let Some(d) = args.dim {
        params.dim = d;
    }
    params.degree = args.degree;
    if let Some(n) = args.min_n {
        params.min_level = n;
    }
    if let Some(n) = args.max_n {
        params.max_level = n;
    }
    params.witt_length = args.witt_length;
    if let Some(t) = args.trials {
        params.trials = t;
    }
    if let Some(m) = args.max_pole {
        params.max_pole = m;
    }
    if let Some(m) = args.sweep_pole {
        params.sweep_pole = m;
    }
    let report = run_suite(args.suite, &params, args.seed)?;
    if let Some(path) = &args.report {
        write_file(path, &(report.to_json_string() + "\n"))?;
    }
    say(&report.summary());
    if report.all_passed() {
        Ok(())
    } else {
        Err(Failure::Mismatch)
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Conductor { kind, input, filtration } => conductor(*kind, input, *filtration),
        Command::Charform { kind, input, n } => charform(*kind, input, *n),
        Command::Oracle { action: OracleAction::Check, input, n, precision } => oracle_check(input, *n, *precision),
        Command::Verify(args) => verify(args),
    }
}

fn main() -> ExitCode {
    // clap exits with status 2 on usage errors
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Mismatch) => ExitCode::from(1),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
