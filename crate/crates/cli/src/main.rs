//! `margulis`: Margulis invariants, spectra, crooked-plane certificates and
//! deformation-cone plots from a JSON configuration.
//!
//! Exit codes: 0 success, 1 parse or validation error, 2 degenerate
//! computation, 3 certification failure (witness on the output), 4
//! inconclusive scan.

mod commands;
mod config;
mod failure;
mod selftest;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgAction, Parser, Subcommand, ValueEnum};

use config::{Loaded, Settings};
use failure::{Failure, EXIT_CERTIFICATION, EXIT_OK, EXIT_PARSE};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Svg,
}

#[derive(Debug, Parser)]
#[command(name = "margulis", version, about = "Margulis invariants, crooked planes and deformation cones")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    flags: Flags,
}

/// Flags shared by every subcommand. They override the config's `scan` block.
#[derive(Debug, clap::Args)]
pub struct Flags {
    /// Longest word (cyclically reduced length) to scan.
    #[arg(long, global = true)]
    pub max_length: Option<usize>,
    /// Zero band for `report` (default 1e-9), eigenvalue-gap band for
    /// `invariant` (default 1e-8), error bound for `gradcheck` (default 1e-5).
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
    /// Chart of the projectivized deformation space: auto, x-plane, y-plane, z-plane.
    #[arg(long, global = true)]
    pub chart: Option<String>,
    /// Restrict scans to primitive classes (default: true for cone-plot, false otherwise).
    #[arg(long, global = true, num_args = 0..=1, default_missing_value = "true", action = ArgAction::Set)]
    pub primitive_only: Option<bool>,
    /// Seed for `selftest`.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Write the report here instead of standard output.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    /// Output format (default: svg for cone-plot, json otherwise).
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Margulis invariant, translation length and axis of the config's word.
    Invariant { config: PathBuf },
    /// Table of alpha, length and alpha/length over conjugacy classes.
    Spectrum { config: PathBuf },
    /// Sign verdict of the spectrum. Exit 3 if not proper, 4 if inconclusive.
    Report { config: PathBuf },
    /// Crooked ping-pong check of the config's halfspaces.
    Certify { config: PathBuf },
    /// Drumm's construction from the config's Schottky slabs.
    Drumm { config: PathBuf },
    /// Strip deformation of the config's domain, with its crooked planes.
    Strip { config: PathBuf },
    /// SVG plot of the deformation cone (rank 2).
    ConePlot { config: PathBuf },
    /// Finite-difference check of the length derivative.
    Gradcheck { config: PathBuf },
    /// Randomized invariant suites.
    Selftest,
}

fn load(path: &Path, flags: &Flags) -> Result<(Loaded, Settings), Failure> {
    let cfg = Loaded::from_path(path)?;
    let settings = Settings::merge(flags, &cfg.raw.scan)?;
    Ok((cfg, settings))
}

fn run(cli: &Cli) -> Result<commands::Report, Failure> {
    let f = &cli.flags;
    let format = f.format.unwrap_or(match cli.command {
        Command::ConePlot { .. } => Format::Svg,
        _ => Format::Json,
    });
    match &cli.command {
        Command::Selftest => {
            if format == Format::Svg {
                return Err(Failure::Parse("only cone-plot produces SVG".into()));
            }
            let rep = selftest::run(f.seed.unwrap_or(0));
            Ok(commands::Report {
                body: commands::json(&rep),
                code: if rep.passed { EXIT_OK } else { EXIT_CERTIFICATION },
            })
        }
        Command::Invariant { config } => load(config, f).and_then(|(c, s)| commands::invariant(&c, &s, format)),
        Command::Spectrum { config } => load(config, f).and_then(|(c, s)| commands::spectrum(&c, &s, format)),
        Command::Report { config } => load(config, f).and_then(|(c, s)| commands::report(&c, &s, format)),
        Command::Certify { config } => load(config, f).and_then(|(c, _)| commands::certify(&c, format)),
        Command::Drumm { config } => load(config, f).and_then(|(c, _)| commands::drumm(&c, format)),
        Command::Strip { config } => load(config, f).and_then(|(c, _)| commands::strip(&c, format)),
        Command::ConePlot { config } => load(config, f).and_then(|(c, s)| commands::cone(&c, &s, format)),
        Command::Gradcheck { config } => load(config, f).and_then(|(c, s)| commands::gradcheck(&c, &s, format)),
    }
}

fn emit(body: &str, output: Option<&Path>) -> std::io::Result<()> {
    match output {
        Some(p) => std::fs::write(p, body),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(body.as_bytes())?;
            out.flush()
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_PARSE } else { EXIT_OK });
        }
    };
    match run(&cli) {
        Ok(rep) => {
            if let Err(e) = emit(&rep.body, cli.flags.output.as_deref()) {
                eprintln!("error: cannot write report: {e}");
                return ExitCode::from(EXIT_PARSE);
            }
            ExitCode::from(rep.code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
