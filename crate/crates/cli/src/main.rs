//! `pgreen`: evaluate approximate kernels and reference solutions, run
//! ε-sweeps, fit convergence rates and run the acceptance suite.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use config::{Command, RunConfig};

#[derive(Debug, Parser)]
#[command(
    name = "pgreen",
    version,
    about = "Uniform asymptotic Green's kernels in perturbed domains"
)]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// JSON run configuration.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Output file, written atomically; stdout when absent.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    #[arg(long, value_name = "N")]
    seed: Option<u64>,
    #[arg(long, value_name = "ID")]
    formula: Option<String>,
    /// Comma-separated epsilon values.
    #[arg(
        long,
        value_name = "LIST",
        value_delimiter = ',',
        allow_hyphen_values = true
    )]
    eps: Option<Vec<f64>>,
    /// Domain configuration as inline JSON or a path to a JSON file.
    #[arg(long, value_name = "JSON|PATH")]
    domain: Option<String>,
    /// First kernel argument, comma-separated coordinates.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    x: Option<Vec<f64>>,
    /// Second kernel argument, comma-separated coordinates.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    y: Option<Vec<f64>>,
}

/// Why a run stopped; each kind has its own exit status.
#[derive(Debug)]
pub enum Failure {
    Config(String),
    Numerical(String),
    Acceptance(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Config(_) => 1,
            Failure::Numerical(_) => 2,
            Failure::Acceptance(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Config(m) | Failure::Numerical(m) | Failure::Acceptance(m) => m,
        }
    }
}

impl From<perturbed_green::Error> for Failure {
    fn from(e: perturbed_green::Error) -> Self {
        if e.is_numerical() {
            Failure::Numerical(e.to_string())
        } else {
            Failure::Config(e.to_string())
        }
    }
}

fn merge(cli: Cli) -> Result<RunConfig, Failure> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(c) = cfg.command {
        if c != cli.command {
            return Err(Failure::Config(format!(
                "config is for command {c:?} but {:?} was requested",
                cli.command
            )));
        }
    }
    cfg.command = Some(cli.command);
    if let Some(f) = cli.formula {
        cfg.formula = Some(
            f.parse()
                .map_err(|e: perturbed_green::Error| Failure::Config(e.to_string()))?,
        );
    }
    if cli.eps.is_some() {
        cfg.eps = cli.eps;
    }
    if cli.seed.is_some() {
        cfg.seed = cli.seed;
    }
    if cli.out.is_some() {
        cfg.output = cli.out;
    }
    if let Some(d) = cli.domain {
        cfg.domain = Some(serde_json::Value::String(d));
    }
    if cli.x.is_some() {
        cfg.x = cli.x;
    }
    if cli.y.is_some() {
        cfg.y = cli.y;
    }
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = merge(cli).and_then(|cfg| commands::run(&cfg));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
