//! `domrt`: batch runner for simulations, exact models, tail bounds,
//! domination tests and the verification suites.

mod bound;
mod compare;
mod model;
mod report;
mod settings;
mod simulate;
mod spec_arg;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use settings::Settings;

#[derive(Debug, Parser)]
#[command(
    name = "domrt",
    version,
    about = "Runtime distributions of evolutionary algorithms under stochastic domination"
)]
struct Cli {
    /// Config file of `key = value` lines; command-line flags take precedence.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run an algorithm repeatedly and write the runtimes as CSV.
    Simulate(simulate::SimulateArgs),
    /// Write the exact distribution of a dominating model as CSV.
    Model(model::ModelArgs),
    /// Evaluate a tail bound, optionally over a grid and against a spec.
    Bound(bound::BoundArgs),
    /// Test whether one runtime distribution is dominated by another.
    Compare(compare::CompareArgs),
    /// Run verification suites and write their checks and CDF overlays.
    Report(report::ReportArgs),
}

/// Outcomes other than hard errors, each with its own exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    Censored,
    Refuted,
}

impl Status {
    fn code(self) -> u8 {
        match self {
            Status::Ok => 0,
            Status::Censored => 2,
            Status::Refuted => 3,
        }
    }
}

/// Writes `bytes` to `path`, or to stdout when no path is given.
pub fn emit(path: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, bytes).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut out = std::io::stdout().lock();
            match out.write_all(bytes).and_then(|()| out.flush()) {
                // A closed pipe means the reader has seen all it wants.
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
                r => Ok(r?),
            }
        }
    }
}

fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var("DOMRT_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n >= 1)
        .with_context(|| format!("DOMRT_THREADS must be a positive integer, got {raw:?}"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()?;
    Ok(())
}

fn run(cli: Cli) -> Result<Status> {
    configure_threads()?;
    let settings = Settings::load(cli.config.as_deref())?;
    match cli.command {
        Command::Simulate(args) => simulate::run(args, settings),
        Command::Model(args) => model::run(args, settings),
        Command::Bound(args) => bound::run(args, settings),
        Command::Compare(args) => compare::run(args, settings),
        Command::Report(args) => report::run(args, settings),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(status) => ExitCode::from(status.code()),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
