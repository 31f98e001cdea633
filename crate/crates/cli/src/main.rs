mod args;
mod commands;
mod io;
mod presets;
mod report;

use std::process::ExitCode;

use anyhow::Result;
use clap::Parser;

use args::{Cli, Command};
use io::{FileError, UsageError};

const THREADS_VAR: &str = "REFGAME_THREADS";

fn configure_threads() -> Result<()> {
    let Ok(value) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| io::usage(format!("{THREADS_VAR} must be a positive integer, got '{value}'")))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    configure_threads()?;
    match &cli.command {
        Command::Ingest(a) => commands::ingest(a),
        Command::Normalize(a) => commands::normalize(a),
        Command::Predict(a) => commands::predict(a),
        Command::Oed(a) => commands::oed(a),
        Command::Filter(a) => commands::filter(a),
        Command::Score(a) => report::score(a),
        Command::Compare(a) => report::compare(a),
        Command::Simulate(a) => report::simulate(a),
        Command::Generate(a) => commands::generate(a),
        Command::Sparsity(a) => commands::sparsity(a),
        Command::ConfidenceFilter(a) => commands::confidence_filter_cmd(a),
        Command::ConfidenceTest(a) => commands::confidence_test_cmd(a),
    }
}

/// 2 for usage and file errors, 1 for everything else.
fn exit_status(err: &anyhow::Error) -> u8 {
    let usage_or_io = err.chain().any(|e| {
        e.is::<UsageError>()
            || e.is::<FileError>()
            || matches!(e.downcast_ref::<refgame_core::Error>(), Some(refgame_core::Error::Io { .. }))
    });
    if usage_or_io {
        2
    } else {
        1
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_status(&e))
        }
    }
}
