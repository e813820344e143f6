//! Command-line front end for the open-chain engine.
//!
//! Exit codes: 0 success, 1 verification or solve failure, 2 input error.

use clap::{Args, Parser, Subcommand};
use openchain::config::RunConfig;
use openchain::error::Error;
use openchain::runner;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "openchain",
    version,
    about = "Open XXX spin chain engine: verified operators, Bethe roots, reports"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Run configuration (JSON).
    #[arg(long, value_name = "PATH")]
    config: PathBuf,
    /// Seed override; beats OPENCHAIN_SEED and the config value.
    #[arg(long, value_name = "U64")]
    seed: Option<u64>,
    /// Output path; beats the config value. Stdout when absent.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Tolerance override NAME=VAL; repeatable.
    #[arg(long = "tol", value_name = "NAME=VAL")]
    tol: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Run verification checks and write a JSON report.
    Check {
        #[command(flatten)]
        common: Common,
        /// Comma-separated check names; defaults to the full suite.
        #[arg(long, value_name = "LIST", value_delimiter = ',')]
        suite: Vec<String>,
    },
    /// Solve the Bethe equations and verify the resulting eigenpairs.
    Solve {
        #[command(flatten)]
        common: Common,
    },
    /// Decide simultaneous triangularizability and print the conjugation.
    Triangularize {
        #[command(flatten)]
        common: Common,
    },
    /// Dense transfer spectra plus Bethe coverage.
    Spectrum {
        #[command(flatten)]
        common: Common,
    },
    /// Explicit open-chain Hamiltonian with the derivative cross-check.
    Hamiltonian {
        #[command(flatten)]
        common: Common,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(ok) => {
            if ok {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Config(_) | Error::Input(_) | Error::Json(_) => 2,
                _ => 1,
            }
        }
    };
    ExitCode::from(code)
}

fn run(cli: Cli) -> Result<bool, Error> {
    match cli.command {
        Command::Check { common, suite } => {
            let (cfg, seed) = load(&common)?;
            let (report, ok) = runner::cmd_check(&cfg, &suite, seed)?;
            emit(&common, &cfg, report)?;
            Ok(ok)
        }
        Command::Solve { common } => {
            let (cfg, seed) = load(&common)?;
            let (report, csv, ok) = runner::cmd_solve(&cfg, seed)?;
            let csv_path = emit(&common, &cfg, report)?.map(|p| p.with_extension("csv"));
            if let Some(path) = csv_path {
                std::fs::write(&path, csv)?;
            } else {
                print!("{csv}");
            }
            Ok(ok)
        }
        Command::Triangularize { common } => {
            let (cfg, _) = load(&common)?;
            let (report, ok) = runner::cmd_triangularize(&cfg)?;
            emit(&common, &cfg, report)?;
            Ok(ok)
        }
        Command::Spectrum { common } => {
            let (cfg, seed) = load(&common)?;
            let report = runner::cmd_spectrum(&cfg, seed)?;
            emit(&common, &cfg, report)?;
            Ok(true)
        }
        Command::Hamiltonian { common } => {
            let (cfg, _) = load(&common)?;
            let report = runner::cmd_hamiltonian(&cfg)?;
            emit(&common, &cfg, report)?;
            Ok(true)
        }
    }
}

fn load(common: &Common) -> Result<(RunConfig, u64), Error> {
    let mut cfg = RunConfig::load(&common.config)?;
    for spec in &common.tol {
        let (name, value) = spec
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("--tol expects NAME=VAL, got {spec}")))?;
        let value: f64 = value
            .parse()
            .map_err(|e| Error::Config(format!("--tol {name}: {e}")))?;
        cfg.tolerances.insert(name.to_string(), value);
    }
    let seed = cfg.effective_seed(common.seed)?;
    Ok((cfg, seed))
}

/// Writes the enveloped report to the resolved output path (flag beats
/// config; stdout when neither is set). Returns the path used, if any.
fn emit(
    common: &Common,
    cfg: &RunConfig,
    report: serde_json::Value,
) -> Result<Option<PathBuf>, Error> {
    let wrapped = runner::envelope(report);
    let text = serde_json::to_string_pretty(&wrapped)?;
    match common.out.clone().or_else(|| cfg.output.clone()) {
        Some(path) => {
            std::fs::write(&path, text + "\n")?;
            Ok(Some(path))
        }
        None => {
            println!("{text}");
            Ok(None)
        }
    }
}
