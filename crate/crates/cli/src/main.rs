use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use semilab::Family;
use semilab_cli::commands::{self, RunOptions, DEFAULT_TIMES};
use semilab_cli::{CliError, ExperimentConfig, Outcome, RunReport};

/// Growth and decay experiments for operator semigroups.
#[derive(Parser)]
#[command(version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Experiment config (TOML)
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory (overrides output.directory)
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,

    /// Refuse models whose dimension exceeds this
    #[arg(long, global = true)]
    max_dim: Option<usize>,

    /// Leave `timings` empty so reruns are byte-identical
    #[arg(long, global = true)]
    no_timings: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Sample ||T(t)||, ||T(t) R|| and their ratio
    Simulate(ModelArgs),
    /// Envelope, spectral hypotheses and conclusion decay
    TheoremCheck(ModelArgs),
    /// Randomized discrete Hardy inequality check
    Hardy {
        #[arg(long, default_value_t = 10_000)]
        cases: usize,
        #[arg(long, default_value_t = 512)]
        max_len: usize,
    },
    /// Tent-vector lower bound on the log-spectrum model
    Witness {
        /// Times, comma separated
        #[arg(long = "t", value_delimiter = ',', default_values_t = DEFAULT_TIMES.to_vec())]
        times: Vec<f64>,
        /// Dimension (default ceil(8 max t))
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long, default_value_t = 1e-10)]
        norm_tol: f64,
    },
    /// Summarize a report.json; exit 1 if any verdict failed
    Report { path: PathBuf },
}

/// Built-in experiment when no --config is given.
#[derive(Args)]
struct ModelArgs {
    /// DIAG_JORDAN, JORDAN_PAIRS or LOG_SPECTRUM
    #[arg(long, value_parser = parse_family)]
    family: Option<Family>,
    /// Difference order for LOG_SPECTRUM
    #[arg(long)]
    order: Option<u32>,
}

fn parse_family(s: &str) -> Result<Family, String> {
    match s.to_ascii_uppercase().replace('-', "_").as_str() {
        "DIAG_JORDAN" => Ok(Family::DiagJordan),
        "JORDAN_PAIRS" => Ok(Family::JordanPairs),
        "LOG_SPECTRUM" => Ok(Family::LogSpectrum),
        _ => Err(format!("unknown family {s:?}")),
    }
}

fn experiment(cli: &Cli, args: &ModelArgs) -> Result<ExperimentConfig, CliError> {
    match &cli.config {
        Some(_) if args.family.is_some() || args.order.is_some() => {
            Err(CliError::Usage("--family/--order cannot be combined with --config".into()))
        }
        Some(path) => ExperimentConfig::load(path),
        None => Ok(ExperimentConfig::default_for(
            args.family.unwrap_or(Family::LogSpectrum),
            args.order.unwrap_or(1),
        )),
    }
}

fn persist(outcome: &Outcome, dir: PathBuf, formats: &[semilab_cli::config::Format]) -> Result<u8, CliError> {
    let written = outcome.write(&dir, formats)?;
    print!("{}", outcome.report.render());
    for path in written {
        println!("wrote {}", path.display());
    }
    Ok(outcome.report.exit_code())
}

fn run(cli: &Cli) -> Result<u8, CliError> {
    let opts = RunOptions {
        out: cli.out.clone(),
        seed: cli.seed,
        max_dim: cli.max_dim,
        timings: !cli.no_timings,
    };
    let default_formats = semilab_cli::config::OutputConfig::default().formats;
    let out_or = |fallback: PathBuf| cli.out.clone().unwrap_or(fallback);
    match &cli.command {
        Command::Simulate(args) | Command::TheoremCheck(args) => {
            let cfg = experiment(cli, args)?;
            let outcome = match cli.command {
                Command::Simulate(_) => commands::simulate(&cfg, &opts)?,
                _ => commands::theorem_check(&cfg, &opts)?,
            };
            persist(&outcome, out_or(cfg.output.directory.clone()), &cfg.output.formats)
        }
        Command::Hardy { cases, max_len } => {
            let outcome = commands::hardy(*cases, *max_len, &opts)?;
            persist(&outcome, out_or("out".into()), &default_formats)
        }
        Command::Witness { times, dim, norm_tol } => {
            let outcome = commands::witness(times, *dim, *norm_tol, &opts)?;
            persist(&outcome, out_or("out".into()), &default_formats)
        }
        Command::Report { path } => {
            let report = RunReport::load(path)?;
            print!("{}", report.render());
            let failures = report.failures();
            if !failures.is_empty() {
                eprintln!("failed: {}", failures.join(", "));
            }
            Ok(report.exit_code())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
