//! The `avgfid` command line.
//!
//! Exit codes: 0 success, 1 semantic validation failure, 2 parse or usage failure.

use std::ffi::OsString;
use std::fmt;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::basis::shift_clock_basis;
use crate::channel::exact_twirl;
use crate::error::Error;
use crate::experiment::{estimate_fidelity_experiment, Shots};
use crate::fidelity::{average_fidelity, average_gate_fidelity, entanglement_fidelity_choi, GATE_TOL};
use crate::haar::{mc_average_gate_fidelity, mc_twirl_choi};
use crate::spec::{
    parse_channel_spec, parse_gate_spec, EmpiricalTwirl, EstimateEntry, ExactResults, ReportDocument, Real,
    Results, SpecError, TwirlResults, ValidateResults,
};
use crate::channel::{compose, QuantumChannel};

#[derive(Debug, Parser)]
#[command(name = "avgfid", version, about = "Average gate fidelity of noisy qudit channels")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Average gate fidelity between a channel and a target gate.
    Compute(ComputeArgs),
    /// Depolarizing parameter of the channel's Haar twirl.
    Twirl(TwirlArgs),
    /// Parse a channel file and check its invariants.
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Exact,
    Mc,
    Experiment,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BasisChoice {
    Shiftclock,
}

#[derive(Debug, Args)]
pub struct ComputeArgs {
    #[arg(long)]
    pub channel: PathBuf,
    #[arg(long)]
    pub gate: PathBuf,
    #[arg(long, value_enum)]
    pub method: Method,
    #[arg(long, value_enum, default_value = "shiftclock")]
    pub basis: BasisChoice,
    /// Haar samples for `--method mc`.
    #[arg(long)]
    pub samples: Option<u64>,
    /// Shots per measurement setting for `--method experiment`.
    #[arg(long)]
    pub shots: Option<u64>,
    /// Tomography repetitions for `--method experiment`.
    #[arg(long)]
    pub repeats: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Record wall-clock duration in the report (makes output run-dependent).
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, Args)]
pub struct TwirlArgs {
    #[arg(long)]
    pub channel: PathBuf,
    /// Haar unitaries for the empirical twirl.
    #[arg(long, requires = "seed")]
    pub unitaries: Option<u64>,
    #[arg(long, requires = "unitaries")]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[arg(long)]
    pub channel: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Failure of a CLI run, mapped onto an exit code.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io { path: PathBuf, message: String },
    Spec { path: PathBuf, error: SpecError },
    Compute(Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) | Self::Io { .. } => 2,
            Self::Spec { error: SpecError::Parse { .. }, .. } => 2,
            Self::Spec { error: SpecError::Semantic { .. }, .. } => 1,
            Self::Compute(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Usage(m) => write!(f, "{m}"),
            Self::Io { path, message } => write!(f, "{}: {message}", path.display()),
            Self::Spec { path, error } => write!(f, "{}: {error}", path.display()),
            Self::Compute(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        Self::Compute(e)
    }
}

fn read(path: &Path) -> Result<Vec<u8>, CliError> {
    std::fs::read(path).map_err(|e| CliError::Io {
        path: path.to_owned(),
        message: e.to_string(),
    })
}

fn load_channel(path: &Path) -> Result<(crate::spec::ChannelSpecDocument, QuantumChannel), CliError> {
    let wrap = |error| CliError::Spec {
        path: path.to_owned(),
        error,
    };
    let doc = parse_channel_spec(&read(path)?).map_err(wrap)?;
    let channel = doc.resolve().map_err(wrap)?;
    Ok((doc, channel))
}

fn require(value: Option<u64>, flag: &str, method: &str) -> Result<u64, CliError> {
    match value {
        Some(0) => Err(CliError::Usage(format!("--{flag} must be positive"))),
        Some(v) => Ok(v),
        None => Err(CliError::Usage(format!("--method {method} requires --{flag}"))),
    }
}

fn require_seed(value: Option<u64>, method: &str) -> Result<u64, CliError> {
    value.ok_or_else(|| CliError::Usage(format!("--method {method} requires --seed")))
}

/// Runs `compute` and returns the report.
pub fn run_compute(args: &ComputeArgs) -> Result<ReportDocument, CliError> {
    let start = Instant::now();
    let (channel_doc, channel) = load_channel(&args.channel)?;
    let gate_doc = parse_gate_spec(&read(&args.gate)?).map_err(|error| CliError::Spec {
        path: args.gate.clone(),
        error,
    })?;
    if gate_doc.dim != channel_doc.dim {
        return Err(CliError::Spec {
            path: args.gate.clone(),
            error: SpecError::Semantic {
                field: "dim".into(),
                message: format!("gate dimension {} does not match channel dimension {}", gate_doc.dim, channel_doc.dim),
            },
        });
    }
    let gate = gate_doc.resolve().map_err(|error| CliError::Spec {
        path: args.gate.clone(),
        error,
    })?;

    let (method, results) = match args.method {
        Method::Exact => {
            let basis = match args.basis {
                BasisChoice::Shiftclock => shift_clock_basis(channel.dim())?,
            };
            let agf = average_gate_fidelity(&channel, &gate, &basis)?;
            let undo = QuantumChannel::with_tolerance(gate.rows(), vec![gate.dagger()], GATE_TOL)?;
            let relative = compose(&channel, &undo)?;
            let results = Results::Exact(ExactResults {
                average_gate_fidelity: agf.into(),
                entanglement_fidelity: entanglement_fidelity_choi(&relative).into(),
                average_fidelity: average_fidelity(&relative).into(),
            });
            ("exact", results)
        }
        Method::Mc => {
            let samples = require(args.samples, "samples", "mc")?;
            let seed = require_seed(args.seed, "mc")?;
            let est = mc_average_gate_fidelity(&channel, &gate, samples, seed)?;
            let entry = EstimateEntry::new("monte-carlo", &est);
            ("mc", Results::Estimate { average_gate_fidelity: entry })
        }
        Method::Experiment => {
            let shots = require(args.shots, "shots", "experiment")?;
            let repeats = require(args.repeats, "repeats", "experiment")?;
            let seed = require_seed(args.seed, "experiment")?;
            let est = estimate_fidelity_experiment(&channel, &gate, Shots::Finite(shots), seed, repeats)?;
            let mut entry = EstimateEntry::new("state-basis", &est);
            entry.shots = Some(shots);
            ("experiment", Results::Estimate { average_gate_fidelity: entry })
        }
    };

    let mut report = ReportDocument::new("compute", channel_doc.fingerprint(), results);
    report.method = Some(method);
    report.basis = Some("shiftclock");
    report.gate = Some(gate_doc.fingerprint());
    if args.timing {
        report.wall_clock_seconds = Some(Real(start.elapsed().as_secs_f64()));
    }
    Ok(report)
}

/// Runs `twirl` and returns the report.
pub fn run_twirl(args: &TwirlArgs) -> Result<ReportDocument, CliError> {
    let start = Instant::now();
    let (doc, channel) = load_channel(&args.channel)?;
    let params = exact_twirl(&channel)?;
    let empirical = match (args.unitaries, args.seed) {
        (Some(0), _) => return Err(CliError::Usage("--unitaries must be positive".into())),
        (Some(n), Some(seed)) => {
            let choi = mc_twirl_choi(&channel, n, seed)?;
            let distance = choi.matrix().frobenius_distance(params.choi_state().matrix());
            Some(EmpiricalTwirl {
                unitaries: n,
                seed,
                frobenius_distance: Real(distance),
            })
        }
        (None, None) => None,
        _ => return Err(CliError::Usage("--unitaries and --seed go together".into())),
    };
    let results = Results::Twirl(TwirlResults {
        depolarizing_p: Real(params.p()),
        entanglement_fidelity: entanglement_fidelity_choi(&channel).into(),
        empirical,
    });
    let mut report = ReportDocument::new("twirl", doc.fingerprint(), results);
    if args.timing {
        report.wall_clock_seconds = Some(Real(start.elapsed().as_secs_f64()));
    }
    Ok(report)
}

/// Runs `validate` and returns the report.
pub fn run_validate(args: &ValidateArgs) -> Result<ReportDocument, CliError> {
    let (doc, channel) = load_channel(&args.channel)?;
    let results = Results::Validate(ValidateResults {
        valid: true,
        kraus_operators: channel.kraus().len(),
        trace_preservation_error: Real(channel.trace_preservation_error()),
    });
    Ok(ReportDocument::new("validate", doc.fingerprint(), results))
}

fn emit(report: &ReportDocument, out: Option<&Path>) -> Result<(), CliError> {
    let text = report.to_json();
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Io {
            path: path.to_owned(),
            message: e.to_string(),
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Parses `args`, runs the subcommand, prints the report or error, and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = match &cli.command {
        Command::Compute(a) => run_compute(a).and_then(|r| emit(&r, a.out.as_deref())),
        Command::Twirl(a) => run_twirl(a).and_then(|r| emit(&r, a.out.as_deref())),
        Command::Validate(a) => run_validate(a).and_then(|r| emit(&r, a.out.as_deref())),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("avgfid: {e}");
            e.exit_code()
        }
    }
}
