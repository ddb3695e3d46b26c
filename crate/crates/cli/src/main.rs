mod commands;
mod output;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use commands::{
    CensusArgs, CompareArgs, DensityArgs, FareyArgs, GapsArgs, LatticeArgs, MeasureArgs,
    SequenceArgs,
};

pub const THREADS_ENV: &str = "ALGCENSUS_THREADS";

#[derive(Parser, Debug)]
#[command(name = "algcensus", version, about = "Exact census of real algebraic numbers by degree and height")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    format: Format,

    /// Write to this file instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Worker threads, or "auto". The ALGCENSUS_THREADS variable takes precedence.
    #[arg(long, default_value = "auto", global = true)]
    threads: String,

    /// Seed for Monte Carlo subcommands.
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact count of algebraic numbers in an interval.
    Census(CensusArgs),
    /// Counting density on a grid of points.
    Density(DensityArgs),
    /// Per-bin census against the asymptotic main term.
    Compare(CompareArgs),
    /// Farey sequence statistics.
    Farey(FareyArgs),
    /// Primitive lattice points in a dilated region.
    Lattice(LatticeArgs),
    /// Distance from a rational to the nearest algebraic number.
    Gaps(GapsArgs),
    /// Algebraic numbers ordered by height.
    Sequence(SequenceArgs),
    /// Monte Carlo measure of polynomials with two roots in an interval.
    Measure(MeasureArgs),
}

#[derive(Debug)]
pub enum CliError {
    Invalid(String),
    Envelope(String),
    Io(std::io::Error),
}

impl From<algcensus::Error> for CliError {
    fn from(e: algcensus::Error) -> Self {
        CliError::Invalid(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Invalid(_) => 2,
            CliError::Envelope(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Invalid(m) => write!(f, "invalid input: {m}"),
            CliError::Envelope(m) => write!(f, "{m}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

fn thread_count(flag: &str) -> Result<Option<usize>, CliError> {
    let raw = std::env::var(THREADS_ENV).ok().filter(|s| !s.trim().is_empty());
    let value = raw.as_deref().unwrap_or(flag).trim();
    if value == "auto" {
        return Ok(None);
    }
    match value.parse::<usize>() {
        Ok(n) if n > 0 => Ok(Some(n)),
        _ => Err(CliError::Invalid(format!("thread count must be a positive integer or \"auto\", got {value:?}"))),
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(n) = thread_count(&cli.threads)? {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Invalid(e.to_string()))?;
    }
    let report = match &cli.command {
        Command::Census(a) => commands::census(a)?,
        Command::Density(a) => commands::density(a)?,
        Command::Compare(a) => commands::compare(a)?,
        Command::Farey(a) => commands::farey(a)?,
        Command::Lattice(a) => commands::lattice(a)?,
        Command::Gaps(a) => commands::gaps(a)?,
        Command::Sequence(a) => commands::sequence(a)?,
        Command::Measure(a) => commands::measure(a, cli.seed)?,
    };
    let mut out: Box<dyn Write> = match &cli.output {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(std::io::stdout().lock())),
    };
    match cli.format {
        Format::Csv => report.write_csv(&mut out)?,
        Format::Json => report.write_json(&mut out)?,
    }
    out.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("algcensus: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
