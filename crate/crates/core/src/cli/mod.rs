//! Batch runner behind the `qotp` binary.
//!
//! Exit codes: 0 success, 2 invalid configuration, unreadable input or a
//! runtime error, 3 a violation of the ledger law `δK ≤ δQ − δM`.

mod analyze;
mod config;
mod harness;

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use thiserror::Error;

use crate::analysis::AnalysisError;
use crate::keyring::{audit_law, KeyringError, Ledger};
use crate::pauli::PauliError;
use crate::protocols::{Backend, Protocol, ProtocolError};
use crate::qcore::QcoreError;

pub use analyze::AnalyzeCommand;
pub use config::{ExperimentConfig, RangeSpec, Resolved};
pub use harness::{ledger_of, run_trials, summarize, LedgerTotals, PointSummary, TrialConfig, DAMAGE_THRESHOLD};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 2;
pub const EXIT_LAW_VIOLATION: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Protocol(#[from] ProtocolError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error(transparent)]
    Keyring(#[from] KeyringError),
    #[error(transparent)]
    Pauli(#[from] PauliError),
    #[error(transparent)]
    Qcore(#[from] QcoreError),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io { path: path.to_path_buf(), source }
    }
}

#[derive(Debug, Parser)]
#[command(name = "qotp", version, about = "Quantum one-time pad and authentication simulator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run seeded trials at one parameter point.
    Run(ExperimentArgs),
    /// Run every point of the m × s cross product and print one CSV row each.
    Sweep(ExperimentArgs),
    /// Check a ledger CSV against the law.
    Audit {
        /// Ledger CSV with header protocol,seed,delta_q,delta_m,delta_k.
        path: PathBuf,
    },
    /// Standalone analyses; each prints one JSON object.
    #[command(subcommand)]
    Analyze(AnalyzeCommand),
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    /// JSON config file; flags given on the command line override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub protocol: Option<Protocol>,
    /// Payload qubits: N, A..B or A,B,C.
    #[arg(long)]
    pub m: Option<RangeSpec>,
    /// Security parameter: N, A..B or A,B,C.
    #[arg(long)]
    pub s: Option<RangeSpec>,
    /// none, fixed_pauli:<P>, random_pauli:<p>, steal:<q>, measure_resend[:z|x], probe_cnot:<q>.
    #[arg(long)]
    pub attack: Option<String>,
    #[arg(long)]
    pub trials: Option<u64>,
    #[arg(long, env = "QOTP_SEED")]
    pub seed: Option<u64>,
    #[arg(long, value_enum)]
    pub backend: Option<Backend>,
    /// Output file: run records (JSON lines) for `run`, the CSV table for `sweep`.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Worker threads; 0 uses every core. Results do not depend on it.
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
    /// Suppress progress lines on standard error.
    #[arg(long)]
    pub quiet: bool,
}

impl ExperimentArgs {
    fn resolve(&self) -> Result<Resolved, CliError> {
        let base = match &self.config {
            Some(path) => ExperimentConfig::load(path)?,
            None => ExperimentConfig::default(),
        };
        let flags = ExperimentConfig {
            protocol: self.protocol,
            m: self.m.clone(),
            s: self.s.clone(),
            attack: self.attack.clone(),
            trials: self.trials,
            seed: self.seed,
            backend: self.backend,
            output_path: self.output.clone(),
        };
        base.overridden_by(flags).resolve()
    }
}

type Progress = Mutex<Box<dyn Write + Send>>;

/// Parses `args` (program name first) and runs the command. Data goes to
/// `stdout`, diagnostics and progress to `stderr`. Returns the exit code.
pub fn run_cli<I, T>(args: I, stdout: &mut dyn Write, stderr: Box<dyn Write + Send>) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stderr: Progress = Mutex::new(stderr);
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let text = e.render().to_string();
            if code == EXIT_OK {
                let _ = stdout.write_all(text.as_bytes());
            } else {
                let _ = stderr.lock().map(|mut w| w.write_all(text.as_bytes()));
            }
            return code;
        }
    };
    match dispatch(&cli.command, stdout, &stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = stderr.lock().map(|mut w| writeln!(w, "error: {e}"));
            EXIT_ERROR
        }
    }
}

/// Entry point of the binary.
pub fn main_from_env() -> i32 {
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    let code = run_cli(std::env::args_os(), &mut lock, Box::new(std::io::stderr()));
    let _ = lock.flush();
    code
}

fn dispatch(cmd: &Command, stdout: &mut dyn Write, stderr: &Progress) -> Result<i32, CliError> {
    match cmd {
        Command::Run(args) => cmd_run(args, stdout, stderr),
        Command::Sweep(args) => cmd_sweep(args, stdout, stderr),
        Command::Audit { path } => cmd_audit(path, stdout),
        Command::Analyze(sub) => {
            let value = analyze::analyze(sub)?;
            print_json(stdout, &value)?;
            Ok(EXIT_OK)
        }
    }
}

fn print_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).map_err(|e| CliError::Config(e.to_string()))?;
    writeln!(out, "{text}").map_err(|e| CliError::io(Path::new("<stdout>"), e))
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path).map(BufWriter::new).map_err(|e| CliError::io(path, e))
}

/// Paths of the summary and ledger written next to a record file.
pub fn companion_paths(records: &Path) -> (PathBuf, PathBuf) {
    (records.with_extension("summary.json"), records.with_extension("ledger.csv"))
}

fn cmd_run(args: &ExperimentArgs, stdout: &mut dyn Write, stderr: &Progress) -> Result<i32, CliError> {
    let cfg = args.resolve()?;
    let (m, s) = match (cfg.ms.as_slice(), cfg.ss.as_slice()) {
        ([m], [s]) => (*m, *s),
        _ => return Err(CliError::Config("run takes a single m and s; use sweep for ranges".into())),
    };
    let point = TrialConfig {
        protocol: cfg.protocol,
        m,
        s,
        attack: cfg.attack_for(m, s)?,
        backend: cfg.backend,
        seed: cfg.seed,
    };
    let records = run_trials(&point, cfg.trials, args.jobs, (!args.quiet).then_some(stderr))?;
    let summary = summarize(&point, &records);
    if let Some(path) = &cfg.output_path {
        let mut out = create(path)?;
        for r in &records {
            writeln!(out, "{}", r.to_json_line()).map_err(|e| CliError::io(path, e))?;
        }
        out.flush().map_err(|e| CliError::io(path, e))?;
        let (summary_path, ledger_path) = companion_paths(path);
        let mut out = create(&summary_path)?;
        print_json(&mut out, &summary)?;
        out.flush().map_err(|e| CliError::io(&summary_path, e))?;
        let mut out = create(&ledger_path)?;
        ledger_of(&records).write_csv(&mut out)?;
    }
    print_json(stdout, &summary)?;
    Ok(if summary.audit.ok { EXIT_OK } else { EXIT_LAW_VIOLATION })
}

const SWEEP_HEADER: [&str; 18] = [
    "protocol",
    "m",
    "s",
    "attack",
    "backend",
    "seed",
    "trials",
    "accepted",
    "accept_rate",
    "accept_lo",
    "accept_hi",
    "miss_rate",
    "damaged_accept_rate",
    "mean_fidelity",
    "delta_q",
    "delta_m",
    "delta_k",
    "law_ok",
];

fn sweep_row(p: &PointSummary) -> Vec<String> {
    // Under attack, an accepted run is a missed detection.
    let miss = if p.attack == "none" { String::new() } else { p.accept_rate.estimate.to_string() };
    vec![
        p.protocol.to_string(),
        p.m.to_string(),
        p.s.to_string(),
        p.attack.clone(),
        p.backend.name().to_string(),
        p.seed.to_string(),
        p.trials.to_string(),
        p.accepted.to_string(),
        p.accept_rate.estimate.to_string(),
        p.accept_rate.lo.to_string(),
        p.accept_rate.hi.to_string(),
        miss,
        p.damaged_accept_rate.to_string(),
        p.mean_fidelity.to_string(),
        p.ledger.delta_q.to_string(),
        p.ledger.delta_m.to_string(),
        p.ledger.delta_k.to_string(),
        p.audit.ok.to_string(),
    ]
}

fn cmd_sweep(args: &ExperimentArgs, stdout: &mut dyn Write, stderr: &Progress) -> Result<i32, CliError> {
    let cfg = args.resolve()?;
    let mut points = Vec::new();
    for &m in &cfg.ms {
        for &s in &cfg.ss {
            let point = TrialConfig {
                protocol: cfg.protocol,
                m,
                s,
                attack: cfg.attack_for(m, s)?,
                backend: cfg.backend,
                seed: cfg.seed,
            };
            // Fail on an oversized point before any trial runs.
            point.check_size()?;
            points.push(point);
        }
    }
    let mut buf = Vec::new();
    let mut law_ok = true;
    {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(&mut buf);
        w.write_record(SWEEP_HEADER).map_err(|e| CliError::Config(e.to_string()))?;
        for point in &points {
            let records = run_trials(point, cfg.trials, args.jobs, (!args.quiet).then_some(stderr))?;
            let summary = summarize(point, &records);
            law_ok &= summary.audit.ok;
            w.write_record(sweep_row(&summary)).map_err(|e| CliError::Config(e.to_string()))?;
        }
        w.flush().map_err(|e| CliError::io(Path::new("<buffer>"), e))?;
    }
    match &cfg.output_path {
        Some(path) => {
            let mut out = create(path)?;
            out.write_all(&buf).and_then(|_| out.flush()).map_err(|e| CliError::io(path, e))?;
        }
        None => stdout.write_all(&buf).map_err(|e| CliError::io(Path::new("<stdout>"), e))?,
    }
    Ok(if law_ok { EXIT_OK } else { EXIT_LAW_VIOLATION })
}

fn cmd_audit(path: &Path, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let file = File::open(path).map_err(|e| CliError::io(path, e))?;
    let ledger = Ledger::read_csv(std::io::BufReader::new(file))?;
    let report = audit_law(&ledger);
    print_json(stdout, &report)?;
    Ok(if report.ok { EXIT_OK } else { EXIT_LAW_VIOLATION })
}
