//! `sptc` command-line tool.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 a checked claim does not
//! hold, 3 an exhaustive sweep exceeds its budget.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use sptc_core::codes::{appendix_c_code, ers_code, ovoid_code, CodeError, LinearCode};
use sptc_core::field::FieldSpec;
use sptc_core::pauli::PauliVector;
use sptc_core::planner::{self, CodeParameters};
use sptc_core::protocol::{self, Protocol};
use sptc_core::rational;
use sptc_core::sptc::{run_with_workers, Sptc, SptcError};

const DEFAULT_BUDGET: u128 = 1 << 24;

#[derive(Parser)]
#[command(name = "sptc", version, about = "Stabilizer purity-testing codes from linear codes over GF(2^s)")]
struct Cli {
    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Finite field tables.
    #[command(subcommand)]
    Field(FieldCmd),
    /// Classical linear codes.
    #[command(subcommand)]
    Code(CodeCmd),
    /// Build and verify SPTCs.
    #[command(subcommand)]
    Sptc(SptcCmd),
    /// Purity-testing protocol.
    #[command(subcommand)]
    Ptp(PtpCmd),
    /// Quantum message authentication.
    #[command(subcommand)]
    Qas(QasCmd),
    /// Entanglement purification parameters.
    #[command(subcommand)]
    Gepp(GeppCmd),
}

#[derive(Subcommand)]
enum FieldCmd {
    /// Elements of GF(2^s) with their multiplication matrices.
    Show {
        #[arg(long)]
        s: u32,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CodeFamily {
    Ers,
    Ovoid,
    AppendixC,
}

#[derive(Subcommand)]
enum CodeCmd {
    /// Write a generator matrix document.
    Build {
        #[arg(long, value_enum)]
        family: CodeFamily,
        #[arg(long)]
        s: Option<u32>,
        #[arg(long)]
        r: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exhaustive minimum distance.
    Mindist {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u128,
        #[arg(long)]
        workers: Option<usize>,
    },
}

#[derive(Subcommand)]
enum SptcCmd {
    /// Blow up every column of a code.
    Build {
        /// Code document, or `appendix-c`.
        #[arg(long)]
        code: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Maximum undetected fraction against the bound 1 - d/c.
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, conflicts_with = "samples")]
        exhaustive: bool,
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u128,
        #[arg(long)]
        workers: Option<usize>,
    },
}

#[derive(Args)]
struct ErrorArgs {
    /// Comma-separated errors as `XHEX:ZHEX` or dense strings such as `XIZI`.
    #[arg(long)]
    error: Option<String>,
    /// Sparse notation such as `Z1,X3`; may be repeated.
    #[arg(long = "error-spec")]
    error_spec: Vec<String>,
}

#[derive(Subcommand)]
enum PtpCmd {
    Simulate {
        #[arg(long)]
        sptc: PathBuf,
        #[command(flatten)]
        errors: ErrorArgs,
        #[arg(long, conflicts_with = "trials")]
        exact: bool,
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        workers: Option<usize>,
    },
}

#[derive(Subcommand)]
enum QasCmd {
    /// Authentication sessions with random keys.
    Simulate {
        #[arg(long)]
        sptc: PathBuf,
        #[command(flatten)]
        errors: ErrorArgs,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 100_000)]
        sessions: u64,
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Block count, key length and total error for a message size.
    Plan {
        #[command(flatten)]
        code: FamilyArgs,
        #[arg(long)]
        qubits: u64,
    },
    /// Preset parameter tables.
    Table {
        #[arg(long)]
        preset: String,
    },
}

#[derive(Args)]
struct FamilyArgs {
    /// `ers` or `ovoid`.
    #[arg(long)]
    family: String,
    #[arg(long)]
    s: u32,
    #[arg(long)]
    r: Option<u32>,
}

#[derive(Subcommand)]
enum GeppCmd {
    /// CS (or DCS) parameter tuple for one code.
    Params {
        #[command(flatten)]
        code: FamilyArgs,
        #[arg(long = "eps-in", default_value = "0")]
        eps_in: String,
        #[arg(long)]
        dcs: bool,
    },
    /// δ(1-ε) and communication bits for both families at r = 2.
    Fig1 {
        #[arg(long = "s-max")]
        s_max: u32,
    },
}

enum Failure {
    Usage(String),
    Claim(String),
    Budget(String),
}

impl From<CodeError> for Failure {
    fn from(e: CodeError) -> Self {
        match e {
            CodeError::BudgetExceeded { .. } => Failure::Budget(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<SptcError> for Failure {
    fn from(e: SptcError) -> Self {
        match e {
            SptcError::BudgetExceeded { .. } => Failure::Budget(e.to_string()),
            SptcError::Code(c) => c.into(),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<protocol::ProtocolError> for Failure {
    fn from(e: protocol::ProtocolError) -> Self {
        match e {
            protocol::ProtocolError::Sptc(inner) => inner.into(),
            other => Failure::Usage(other.to_string()),
        }
    }
}

macro_rules! usage_from {
    ($($t:ty),*) => {$(
        impl From<$t> for Failure {
            fn from(e: $t) -> Self {
                Failure::Usage(e.to_string())
            }
        }
    )*};
}

usage_from!(
    sptc_core::field::FieldError,
    sptc_core::pauli::PauliError,
    planner::PlanError,
    std::io::Error
);

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let format = cli.format;
    let result = match cli.command {
        Command::Field(FieldCmd::Show { s }) => field_show(s, format),
        Command::Code(cmd) => code(cmd),
        Command::Sptc(cmd) => sptc(cmd, format),
        Command::Ptp(cmd) => ptp(cmd),
        Command::Qas(cmd) => qas(cmd, format),
        Command::Gepp(cmd) => gepp(cmd, format),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Claim(msg)) => {
            eprintln!("claim violated: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Budget(msg)) => {
            eprintln!("budget exceeded: {msg}");
            ExitCode::from(3)
        }
    }
}

fn emit(text: &str, out: Option<&Path>) -> Outcome {
    match out {
        Some(path) => {
            fs::write(path, text)?;
            eprintln!("wrote {}", path.display());
        }
        None => println!("{}", text.trim_end()),
    }
    Ok(())
}

fn pretty(value: &serde_json::Value) -> String {
    serde_json::to_string_pretty(value).expect("JSON values serialize")
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn polynomial(value: u64) -> String {
    if value == 0 {
        return "0".into();
    }
    let terms: Vec<String> = (0..64)
        .rev()
        .filter(|i| value >> i & 1 == 1)
        .map(|i| match i {
            0 => "1".to_string(),
            1 => "x".to_string(),
            _ => format!("x^{i}"),
        })
        .collect();
    terms.join("+")
}

fn field_show(s: u32, format: Option<Format>) -> Outcome {
    let spec = FieldSpec::new(s)?;
    if s > 8 {
        return Err(Failure::Usage(format!("field show lists every element; s = {s} is too large (max 8)")));
    }
    let elements: Vec<_> = spec
        .elements()
        .enumerate()
        .map(|(i, v)| {
            let label = match i {
                0 => "0".to_string(),
                1 => "1".to_string(),
                2 => "g".to_string(),
                _ => format!("g^{}", i - 1),
            };
            (label, v, spec.companion(v).to_bits())
        })
        .collect();
    match format.unwrap_or(Format::Text) {
        Format::Json => {
            let items: Vec<_> = elements
                .iter()
                .map(|(label, v, m)| json!({"label": label, "value": v, "polynomial": polynomial(*v), "matrix": m}))
                .collect();
            emit(
                &pretty(&json!({"s": s, "prim_poly": spec.prim_poly(), "modulus": polynomial(spec.prim_poly() as u64), "elements": items})),
                None,
            )
        }
        Format::Csv => {
            let mut out = String::from("label,value,polynomial,matrix\n");
            for (label, v, m) in &elements {
                let rows: Vec<String> = m.iter().map(|r| r.iter().map(u8::to_string).collect()).collect();
                out.push_str(&format!("{label},{v},{},{}\n", polynomial(*v), rows.join(";")));
            }
            emit(&out, None)
        }
        Format::Text => {
            let mut out = format!(
                "GF(2^{s}) modulo {} (g = x)\n",
                polynomial(spec.prim_poly() as u64)
            );
            for (label, v, m) in &elements {
                out.push_str(&format!("\n{label} = {}\n", polynomial(*v)));
                for row in m {
                    let cells: Vec<String> = row.iter().map(u8::to_string).collect();
                    out.push_str(&format!("  {}\n", cells.join(" ")));
                }
            }
            emit(&out, None)
        }
    }
}

fn build_code(family: CodeFamily, s: Option<u32>, r: Option<usize>) -> Result<LinearCode, Failure> {
    let need_s = || s.ok_or_else(|| Failure::Usage("--s is required".into()));
    Ok(match family {
        CodeFamily::AppendixC => appendix_c_code(),
        CodeFamily::Ers => {
            let r = r.ok_or_else(|| Failure::Usage("--r is required for ers".into()))?;
            ers_code(FieldSpec::new(need_s()?)?, r)?
        }
        CodeFamily::Ovoid => {
            if r.is_some_and(|r| r != 2) {
                return Err(Failure::Usage("ovoid codes have r = 2".into()));
            }
            ovoid_code(FieldSpec::new(need_s()?)?)?
        }
    })
}

fn code(cmd: CodeCmd) -> Outcome {
    match cmd {
        CodeCmd::Build { family, s, r, out } => {
            let code = build_code(family, s, r)?;
            emit(&code.to_json(), out.as_deref())
        }
        CodeCmd::Mindist { input, budget, workers } => {
            let code = LinearCode::from_json(&read(&input)?)?;
            let d = run_with_workers(workers, || code.min_distance(budget))?;
            let mut report = json!({
                "c": code.c(),
                "k": code.k(),
                "d": d,
                "codewords": code.codeword_count().to_string(),
                "singleton": code.c() - code.k() + 1,
            });
            if let Some(claimed) = code.d() {
                report["claimed_d"] = claimed.into();
                report["matches_claim"] = (claimed == d).into();
            }
            emit(&pretty(&report), None)?;
            match code.d() {
                Some(claimed) if claimed != d => Err(Failure::Claim(format!("document claims d = {claimed}, enumeration gives {d}"))),
                _ => Ok(()),
            }
        }
    }
}

fn load_code_arg(text: &str) -> Result<LinearCode, Failure> {
    if text == "appendix-c" {
        return Ok(appendix_c_code());
    }
    Ok(LinearCode::from_json(&read(Path::new(text))?)?)
}

fn load_sptc(path: &Path) -> Result<Sptc, Failure> {
    Ok(Sptc::from_json(&read(path)?)?)
}

fn sptc(cmd: SptcCmd, format: Option<Format>) -> Outcome {
    match cmd {
        SptcCmd::Build { code, out } => {
            let code = load_code_arg(&code)?;
            let sptc = Sptc::build(&code)?;
            emit(&sptc.to_json(), out.as_deref())
        }
        SptcCmd::Verify {
            input,
            exhaustive: _,
            samples,
            seed,
            budget,
            workers,
        } => {
            let sptc = load_sptc(&input)?;
            let report = match samples {
                Some(n) => sptc.sample_error_rate(n, seed, workers),
                None => sptc.verify_error_rate(budget, workers)?,
            };
            let mut value = report.to_json();
            value["identification"] = json!(sptc.identification());
            value["codes"] = sptc.len().into();
            value["n"] = sptc.n().into();
            value["m"] = sptc.m().into();
            value["strong"] = true.into();
            let text = match format.unwrap_or(Format::Json) {
                Format::Json => pretty(&value),
                Format::Csv => format!(
                    "max_fraction,bound,holds,witness,exhaustive\n{},{},{},{},{}\n",
                    rational::to_string(&report.max_fraction),
                    rational::to_string(&report.bound),
                    report.holds,
                    report.witness.to_hex_pair(),
                    report.exhaustive
                ),
                Format::Text => format!(
                    "max undetected fraction {} (bound {}), witness {} [{}], {}\n",
                    rational::to_string(&report.max_fraction),
                    rational::to_string(&report.bound),
                    report.witness,
                    report.witness.to_hex_pair(),
                    if report.holds { "holds" } else { "VIOLATED" }
                ),
            };
            emit(&text, None)?;
            if report.holds {
                Ok(())
            } else {
                Err(Failure::Claim("maximum undetected fraction exceeds 1 - d/c".into()))
            }
        }
    }
}

fn parse_errors(args: &ErrorArgs, n: usize) -> Result<Vec<PauliVector>, Failure> {
    let mut errors = Vec::new();
    if let Some(list) = &args.error {
        for item in list.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            errors.push(PauliVector::parse_any(n, item)?);
        }
    }
    for spec in &args.error_spec {
        errors.push(PauliVector::parse_sparse(n, spec)?);
    }
    if errors.is_empty() {
        return Err(Failure::Usage("give at least one --error or --error-spec".into()));
    }
    Ok(errors)
}

fn report_outcome(report: &protocol::SimulationReport) -> Outcome {
    emit(&pretty(&serde_json::to_value(report).expect("report serializes")), None)?;
    let sampled_ok = report.results.iter().all(|r| r.within_3_sigma != Some(false));
    if !report.holds {
        return Err(Failure::Claim("forgery probability exceeds the bound".into()));
    }
    if !sampled_ok {
        eprintln!("note: an empirical rate lies outside 3 standard deviations of its exact value");
    }
    Ok(())
}

fn ptp(cmd: PtpCmd) -> Outcome {
    let PtpCmd::Simulate {
        sptc,
        errors,
        exact,
        trials,
        seed,
        workers,
    } = cmd;
    let family = load_sptc(&sptc)?;
    let errors = parse_errors(&errors, family.n())?;
    let trials = if exact { None } else { trials.map(|t| (t, seed)) };
    let report = protocol::simulate(&family, &sptc.display().to_string(), Protocol::Ptp, &errors, trials, workers)?;
    report_outcome(&report)
}

fn code_params(args: &FamilyArgs) -> Result<CodeParameters, Failure> {
    Ok(CodeParameters::from_family(&args.family, args.s, args.r)?)
}

fn qas(cmd: QasCmd, format: Option<Format>) -> Outcome {
    match cmd {
        QasCmd::Simulate {
            sptc,
            errors,
            seed,
            sessions,
            workers,
        } => {
            let family = load_sptc(&sptc)?;
            let errors = parse_errors(&errors, family.n())?;
            let report = protocol::simulate(
                &family,
                &sptc.display().to_string(),
                Protocol::Qas,
                &errors,
                Some((sessions, seed)),
                workers,
            )?;
            report_outcome(&report)
        }
        QasCmd::Plan { code, qubits } => {
            let params = code_params(&code)?;
            let rows = planner::table_rows(&[(params, qubits, None)])?;
            match format.unwrap_or(Format::Csv) {
                Format::Json => emit(&pretty(&rows[0].plan.to_json()), None),
                _ => emit(&planner::table_csv(&rows), None),
            }
        }
        QasCmd::Table { preset } => {
            let rows = planner::preset(&preset)?;
            match format.unwrap_or(Format::Csv) {
                Format::Json => emit(&pretty(&planner::table_json(&rows)), None),
                _ => emit(&planner::table_csv(&rows), None),
            }
        }
    }
}

fn gepp(cmd: GeppCmd, format: Option<Format>) -> Outcome {
    match cmd {
        GeppCmd::Params { code, eps_in, dcs } => {
            let params = code_params(&code)?;
            let eps_in = rational::parse(&eps_in).ok_or_else(|| Failure::Usage(format!("cannot parse --eps-in {eps_in}")))?;
            let mut tuple = planner::gepp_cs(&params, &eps_in)?;
            if dcs {
                tuple = planner::gepp_dcs(&tuple)?;
            }
            let mut value = tuple.to_json();
            value["code"] = params.label().into();
            value["error_detection"] = planner::error_detection_params(&params).to_json();
            emit(&pretty(&value), None)
        }
        GeppCmd::Fig1 { s_max } => {
            let rows = planner::fig1_data(s_max)?;
            match format.unwrap_or(Format::Csv) {
                Format::Json => {
                    let items: Vec<_> = rows
                        .iter()
                        .map(|r| {
                            json!({
                                "s": r.s,
                                "family": r.family,
                                "delta_times_one_minus_eps": rational::to_string(&r.value),
                                "b": r.b,
                            })
                        })
                        .collect();
                    emit(&pretty(&json!(items)), None)
                }
                _ => emit(&planner::fig1_csv(&rows), None),
            }
        }
    }
}
