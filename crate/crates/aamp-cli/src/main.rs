//! Experiment runner for the amplitude amplification library.
//!
//! Exit codes: 0 success, 2 configuration error, 3 infeasible instance,
//! 4 numeric failure.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{AlgorithmChoice, BackendChoice, RunConfig, RunFileConfig, TargetToken};

/// CLI-level error carrying its process exit code.
#[derive(Debug)]
pub struct CliError {
    pub message: String,
    pub code: u8,
}

impl CliError {
    pub fn config(message: String) -> Self {
        Self { message, code: 2 }
    }
}

impl From<aamp::Error> for CliError {
    fn from(e: aamp::Error) -> Self {
        use aamp::Error::*;
        let code = match &e {
            ZeroTargetOverlap | InfeasibleNode { .. } => 3,
            Domain(_) | NotNormalizable { .. } | NotNormalized { .. } => 4,
            _ => 2,
        };
        Self { message: e.to_string(), code }
    }
}

#[derive(Parser)]
#[command(name = "aamp", version, about = "Amplitude amplification experiment runner")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute one amplification run and write a JSON report.
    Run(RunArgs),
    /// Run several algorithms on the same instance and tabulate resources.
    Compare(CompareArgs),
    /// Sweep measurement shot counts and report KL divergence to exact.
    KlStudy(KlStudyArgs),
    /// Expand every multi-controlled gate of a circuit IR file.
    Decompose(DecomposeArgs),
    /// Print the version.
    Version,
}

#[derive(Args)]
struct RunArgs {
    /// TOML config file; flags below override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    algorithm: Option<AlgorithmChoice>,
    /// State source: `paper4q`, `uniform:<n>`, or `file:<csv>`.
    #[arg(long)]
    state: Option<String>,
    /// Comma-separated targets: decimals or bit strings.
    #[arg(long, value_delimiter = ',')]
    targets: Option<Vec<String>>,
    /// Comma-separated node sizes (deqaaa only).
    #[arg(long, value_delimiter = ',')]
    partition: Option<Vec<usize>>,
    #[arg(long)]
    shots: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    backend: Option<BackendChoice>,
    /// Also tally the fully decomposed circuit.
    #[arg(long)]
    decompose: bool,
    /// Read decimals and render bit strings in reversed qubit order.
    #[arg(long)]
    bit_reverse: bool,
    /// Normalize amplitude files that are not unit norm.
    #[arg(long)]
    normalize: bool,
    #[arg(long)]
    report: Option<PathBuf>,
    #[arg(long)]
    histogram: Option<PathBuf>,
}

#[derive(Args)]
struct CompareArgs {
    /// TOML config with shared `state`, `targets` and a `[[runs]]` list.
    #[arg(long)]
    config: PathBuf,
    #[arg(long, default_value = "compare.csv")]
    output_csv: PathBuf,
    #[arg(long)]
    output_json: Option<PathBuf>,
}

#[derive(Args)]
struct KlStudyArgs {
    /// State source (default: the bundled 4-qubit example).
    #[arg(long, default_value = "paper4q")]
    state: String,
    /// Comma-separated shot counts.
    #[arg(long, value_delimiter = ',', default_value = "10000,100000")]
    shots: Vec<u64>,
    /// Number of seeds per shot count.
    #[arg(long, default_value_t = 20)]
    seeds: u64,
    /// First seed value.
    #[arg(long, default_value_t = 0)]
    seed_base: u64,
    #[arg(long, default_value = "kl_study.csv")]
    output: PathBuf,
}

#[derive(Args)]
struct DecomposeArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    output: PathBuf,
}

fn parse_target_flag(raw: &[String]) -> Result<Vec<TargetToken>, CliError> {
    raw.iter()
        .map(|tok| {
            let tok = tok.trim();
            if tok.is_empty() {
                return Err(CliError::config("empty target entry".into()));
            }
            Ok(TargetToken::Raw(tok.to_string()))
        })
        .collect()
}

fn build_run_config(args: &RunArgs) -> Result<RunConfig, CliError> {
    let file = match &args.config {
        Some(path) => RunFileConfig::load(path)?,
        None => RunFileConfig::default(),
    };
    let targets = match &args.targets {
        Some(raw) => parse_target_flag(raw)?,
        None => file
            .targets
            .unwrap_or_default()
            .into_iter()
            .map(TargetToken::from)
            .collect(),
    };
    Ok(RunConfig {
        algorithm: args
            .algorithm
            .or(file.algorithm)
            .ok_or_else(|| CliError::config("missing algorithm".into()))?,
        state: args
            .state
            .clone()
            .or(file.state)
            .ok_or_else(|| CliError::config("missing state source".into()))?,
        targets,
        partition: args.partition.clone().or(file.partition),
        shots: args.shots.or(file.shots),
        seed: args.seed.or(file.seed).unwrap_or(0),
        backend: args.backend.or(file.backend).unwrap_or(BackendChoice::Circuit),
        decompose: args.decompose || file.decompose.unwrap_or(false),
        bit_reverse: args.bit_reverse || file.bit_reverse.unwrap_or(false),
        normalize: args.normalize || file.normalize.unwrap_or(false),
        report: args
            .report
            .clone()
            .or(file.report)
            .unwrap_or_else(|| PathBuf::from("report.json")),
        histogram: args.histogram.clone().or(file.histogram),
    })
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run(args) => {
            let config = build_run_config(&args)?;
            commands::cmd_run(&config)?;
            Ok(())
        }
        Command::Compare(args) => {
            let config = commands::load_compare_config(&args.config)?;
            commands::cmd_compare(&config, &args.output_csv, args.output_json.as_deref())?;
            Ok(())
        }
        Command::KlStudy(args) => {
            commands::cmd_kl_study(&args.state, &args.shots, args.seeds, args.seed_base, &args.output)?;
            Ok(())
        }
        Command::Decompose(args) => commands::cmd_decompose(&args.input, &args.output),
        Command::Version => {
            println!("aamp {}", env!("CARGO_PKG_VERSION"));
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
