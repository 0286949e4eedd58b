//! Batch front-end: parse a JSON run configuration, execute the command,
//! write artifacts. Exit codes: 0 all checks pass, 1 check or numeric
//! failure, 2 configuration error.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use config::{OutputFormat, RunConfig};

#[derive(Parser, Debug)]
#[command(
    name = "pextremal",
    about = "Grid evaluation, invariant check suites, and Monge-Ampere mass reports for extremal functions of convex bodies"
)]
struct Cli {
    /// Optional command override; otherwise taken from the config file
    /// (eval-grid | check | ma-grid | explore-support | approx-body).
    command: Option<String>,

    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,

    /// Output path (default pextremal_out.<format>).
    #[arg(long)]
    out: Option<PathBuf>,

    /// Output format: csv or json.
    #[arg(long)]
    format: Option<String>,

    /// Seed for randomized suites (overrides the config).
    #[arg(long)]
    seed: Option<u64>,

    /// Check suite name (overrides the config).
    #[arg(long)]
    suite: Option<String>,

    /// Refinement levels for explore-support / approx-body.
    #[arg(long)]
    refine: Option<u32>,
}

#[derive(Debug)]
pub enum CliError {
    /// Malformed or incomplete configuration -> exit 2.
    Config(String),
    /// Numeric or I/O failure while running -> exit 1.
    Runtime(String),
}

impl CliError {
    fn num(e: pextremal::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

fn parse_command(s: &str) -> Result<config::Command, CliError> {
    serde_json::from_value(serde_json::Value::String(s.to_string()))
        .map_err(|_| CliError::Config(format!("unknown command \"{s}\"")))
}

fn load_config(cli: &Cli) -> Result<RunConfig, CliError> {
    let raw = std::fs::read_to_string(&cli.config).map_err(|e| {
        CliError::Config(format!("cannot read {}: {e}", cli.config.display()))
    })?;
    let mut config: RunConfig = serde_json::from_str(&raw).map_err(|e| {
        CliError::Config(format!(
            "config error at line {} column {}: {e}",
            e.line(),
            e.column()
        ))
    })?;
    if let Some(cmd) = &cli.command {
        config.command = parse_command(cmd)?;
    }
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    if let Some(suite) = &cli.suite {
        config.suite = Some(suite.clone());
    }
    if let Some(refine) = cli.refine {
        config.refine = Some(refine);
    }
    Ok(config)
}

fn effective_output(cli: &Cli, config: &RunConfig) -> Result<commands::Effective, CliError> {
    let config_out = config.output.as_ref();
    let format = match cli
        .format
        .as_deref()
        .map(str::to_ascii_lowercase)
        .as_deref()
    {
        Some("csv") => OutputFormat::Csv,
        Some("json") => OutputFormat::Json,
        Some(other) => {
            return Err(CliError::Config(format!(
                "unknown format \"{other}\" (csv or json)"
            )))
        }
        None => match config_out.and_then(|o| o.format.clone()) {
            Some(f) => f,
            None => match config.command {
                config::Command::EvalGrid => OutputFormat::Csv,
                _ => OutputFormat::Json,
            },
        },
    };
    let ext = match format {
        OutputFormat::Csv => "csv",
        OutputFormat::Json => "json",
    };
    let out = cli
        .out
        .clone()
        .or_else(|| config_out.and_then(|o| o.path.clone()).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(format!("pextremal_out.{ext}")));
    Ok(commands::Effective {
        out,
        format,
        seed: config.seed,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = load_config(&cli)
        .and_then(|config| effective_output(&cli, &config).map(|eff| (config, eff)))
        .and_then(|(config, eff)| commands::run(&config, &eff));
    match result {
        Ok(0) => ExitCode::from(0),
        Ok(code) => {
            eprintln!("check failure (exit {code})");
            ExitCode::from(code as u8)
        }
        Err(CliError::Config(msg)) => {
            eprintln!("config error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Runtime(msg)) => {
            eprintln!("run failed: {msg}");
            ExitCode::from(1)
        }
    }
}
