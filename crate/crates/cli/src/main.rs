//! `cadi` command-line harness.
//!
//! Exit codes: 0 success, 2 usage error, 3 invalid input, 4 numerical or
//! degeneracy failure.

mod args;
mod bench;
mod commands;
mod evaluate;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

/// Errors that should exit with the usage code.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct UsageError(pub String);

pub fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<UsageError>().is_some() {
        return 2;
    }
    match err.downcast_ref::<cadi::Error>() {
        Some(e) if e.is_numerical() => 4,
        _ => 3,
    }
}

fn configure_threads() -> anyhow::Result<()> {
    let Ok(raw) = std::env::var("CADI_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw.trim().parse().ok().filter(|&t| t > 0).ok_or_else(|| {
        usage(format!(
            "CADI_THREADS must be a positive integer, got `{raw}`"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()?;
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<()> {
    configure_threads()?;
    match cli.command {
        Command::Generate(a) => commands::generate(a),
        Command::Metric(a) => commands::metric(a),
        Command::Embed(a) => commands::embed(a),
        Command::Stability(a) => commands::stability(a),
        Command::Benchmark(a) => bench::benchmark(a),
        Command::Report(a) => bench::report(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
