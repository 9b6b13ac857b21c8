//! `buslab`: closed-form tables, energy-saving sweeps, Monte Carlo runs,
//! codebook dumps and self-verification for low-transition bus codes.

mod commands;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "buslab", version, about = "Energy-efficient bus encoding toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Closed-form averages, saving and encoder cost for one (k, b).
    Analyze(AnalyzeArgs),
    /// Energy saving of the optimal code for b = 0..=b_max, as CSV.
    Sweep(SweepArgs),
    /// Monte Carlo transition counts for a codec.
    Simulate(SimulateArgs),
    /// Run the built-in invariant checks.
    Verify(VerifyArgs),
    /// Dump the differential codebook of a differential codec.
    Codebook(CodebookArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FamilyName {
    Uncoded,
    Dbi,
    Ppm0,
    Optimal,
    /// Coset encoder over the (k+1, 1) repetition code.
    Repetition,
    /// Coset encoder over the Hamming code with k parity bits.
    Hamming,
    /// Coset encoder over the (23, 12) Golay code (k = 11).
    Golay,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Text,
    Json,
    Csv,
}

#[derive(Args, Debug)]
struct FormatFlags {
    /// Machine-readable JSON output.
    #[arg(long, conflicts_with = "csv")]
    json: bool,
    /// CSV output (header row + data).
    #[arg(long)]
    csv: bool,
}

impl FormatFlags {
    fn format(&self) -> Format {
        match (self.json, self.csv) {
            (true, _) => Format::Json,
            (_, true) => Format::Csv,
            _ => Format::Text,
        }
    }
}

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    /// Information bits.
    #[arg(long)]
    k: usize,
    /// Added lines.
    #[arg(long, default_value_t = 0)]
    b: usize,
    #[command(flatten)]
    format: FormatFlags,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[arg(long)]
    k: usize,
    /// Largest redundancy to emit (default: the PPM0 redundancy 2^k - 1 - k).
    #[arg(long = "b")]
    b_max: Option<usize>,
    /// Output file (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Accepted for symmetry; sweep output is always CSV.
    #[arg(long)]
    csv: bool,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[arg(long, value_enum, default_value_t = FamilyName::Optimal)]
    family: FamilyName,
    #[arg(long)]
    k: usize,
    /// Added lines (optimal family only; implied by the others).
    #[arg(long)]
    b: Option<usize>,
    /// Number of words in the trace.
    #[arg(long, default_value_t = 1_000_000)]
    length: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Worker threads; totals do not depend on this.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[command(flatten)]
    format: FormatFlags,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Scope {
    Rank,
    Roundtrip,
    Coset,
    Optimal,
    All,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(value_enum, default_value_t = Scope::All)]
    pub(crate) scope: Scope,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Args, Debug)]
pub struct CodebookArgs {
    #[arg(long, value_enum, default_value_t = FamilyName::Optimal)]
    family: FamilyName,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    b: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Failure modes mapped onto exit codes.
#[derive(Debug)]
pub enum CliError {
    /// Bad parameters or I/O trouble; exit 2.
    Usage(String),
    /// A verification check failed; exit 1.
    Failed(String),
}

impl CliError {
    fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Usage(_) => ExitCode::from(2),
            CliError::Failed(_) => ExitCode::from(1),
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(msg) | CliError::Failed(msg) => f.write_str(msg),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Analyze(args) => commands::analyze(&args),
        Command::Sweep(args) => commands::sweep(&args),
        Command::Simulate(args) => commands::simulate(&args),
        Command::Verify(args) => verify::run(&args),
        Command::Codebook(args) => commands::codebook(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("buslab: error: {err}");
            err.exit_code()
        }
    }
}
