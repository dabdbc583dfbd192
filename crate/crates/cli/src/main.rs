//! Batch experiment runner: every library subsystem exposed as a
//! subcommand driven by a single JSON config document.
//!
//! ```text
//! padiclab <subcommand> --config <path> [--out <dir>] [--seed <u64>]
//!          [--threads <n>] [--tolerance <float>]
//! ```
//!
//! Exit codes: 0 success, 1 numeric/convergence failure, 2 usage or
//! schema error.

mod commands;
mod config;
mod output;

use output::{config_hash, ArtifactWriter};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const SUBCOMMANDS: &[&str] = &[
    "density",
    "fourier",
    "vladimirov",
    "pd",
    "riesz",
    "kakutani",
    "quasiinv",
    "pdmeasure",
    "simulate",
    "histogram",
    "regrep",
    "picard",
];

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Numeric(String),
}

#[derive(Debug, Default)]
pub struct Flags {
    pub config: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub threads: Option<usize>,
    pub tolerance: Option<f64>,
}

fn usage() -> String {
    format!(
        "usage: padiclab <subcommand> --config <path> [--out <dir>] [--seed <u64>] \
         [--threads <n>] [--tolerance <float>]\n\nsubcommands: {}",
        SUBCOMMANDS.join(", ")
    )
}

fn parse_flags(args: &[String]) -> Result<Flags, CliError> {
    let mut flags = Flags::default();
    let mut it = args.iter();
    while let Some(arg) = it.next() {
        let mut take = |what: &str| -> Result<&String, CliError> {
            it.next()
                .ok_or_else(|| CliError::Usage(format!("{what} needs a value")))
        };
        match arg.as_str() {
            "--config" => flags.config = Some(PathBuf::from(take("--config")?)),
            "--out" => flags.out = Some(PathBuf::from(take("--out")?)),
            "--seed" => {
                flags.seed = Some(
                    take("--seed")?
                        .parse()
                        .map_err(|e| CliError::Usage(format!("--seed: {e}")))?,
                )
            }
            "--threads" => {
                flags.threads = Some(
                    take("--threads")?
                        .parse()
                        .map_err(|e| CliError::Usage(format!("--threads: {e}")))?,
                )
            }
            "--tolerance" => {
                flags.tolerance = Some(
                    take("--tolerance")?
                        .parse()
                        .map_err(|e| CliError::Usage(format!("--tolerance: {e}")))?,
                )
            }
            other => return Err(CliError::Usage(format!("unknown flag {other}"))),
        }
    }
    Ok(flags)
}

fn run() -> Result<String, CliError> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let Some(subcommand) = args.first() else {
        return Err(CliError::Usage(usage()));
    };
    if subcommand == "--help" || subcommand == "-h" || subcommand == "help" {
        println!("{}", usage());
        return Ok(String::new());
    }
    let subcommand = subcommand.clone();
    if !SUBCOMMANDS.contains(&subcommand.as_str()) {
        return Err(CliError::Usage(format!(
            "unknown subcommand \"{subcommand}\"\n\n{}",
            usage()
        )));
    }
    let flags = parse_flags(&args[1..])?;
    let config_path = flags
        .config
        .clone()
        .ok_or_else(|| CliError::Usage(format!("--config is required\n\n{}", usage())))?;
    let raw = std::fs::read(&config_path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", config_path.display())))?;
    let text = String::from_utf8(raw.clone())
        .map_err(|e| CliError::Usage(format!("config is not UTF-8: {e}")))?;
    let out_dir = flags.out.clone().unwrap_or_else(|| PathBuf::from("."));
    let config_dir = config_path
        .parent()
        .map(Path::to_path_buf)
        .unwrap_or_else(|| PathBuf::from("."));
    let writer = ArtifactWriter::new(&out_dir, config_hash(&raw))
        .map_err(|e| CliError::Numeric(format!("cannot prepare output dir: {e}")))?;

    let sub = subcommand.as_str();
    match sub {
        "density" => commands::run_density(&text, sub, &flags, &config_dir, writer),
        "fourier" => commands::run_fourier(&text, sub, &flags, &config_dir, writer),
        "vladimirov" => commands::run_vladimirov(&text, sub, &flags, &config_dir, writer),
        "pd" => commands::run_pd(&text, sub, &flags, &config_dir, writer),
        "riesz" => commands::run_riesz(&text, sub, &flags, &config_dir, writer),
        "kakutani" => commands::run_kakutani(&text, sub, &flags, &config_dir, writer),
        "quasiinv" => commands::run_quasiinv(&text, sub, &flags, &config_dir, writer),
        "pdmeasure" => commands::run_pdmeasure(&text, sub, &flags, &config_dir, writer),
        "simulate" => commands::run_simulate(&text, sub, &flags, &config_dir, writer),
        "histogram" => commands::run_histogram(&text, sub, &flags, &config_dir, writer),
        "regrep" => commands::run_regrep(&text, sub, &flags, &config_dir, writer),
        "picard" => commands::run_picard(&text, sub, &flags, &config_dir, writer),
        _ => unreachable!("subcommand validated above"),
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(summary) => {
            if !summary.is_empty() {
                println!("{summary}");
            }
            ExitCode::SUCCESS
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Numeric(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
