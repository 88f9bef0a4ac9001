//! `crystal-polytope`: batch front end for the crystal-polytope library.
//!
//! Data goes to stdout, the convention banner and diagnostics to stderr.
//! Exit status is 0 on success, 1 on usage or input errors, and 2 when a
//! verification command finds a mismatch.

mod args;
mod commands;
mod output;

use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use crate::args::Cli;

const THREADS_VAR: &str = "CRYSTAL_POLYTOPE_THREADS";

fn configure_threads() -> anyhow::Result<()> {
    let Ok(raw) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .map_err(|_| anyhow::anyhow!("{THREADS_VAR} must be a positive integer, got `{raw}`"))?;
    if n == 0 {
        anyhow::bail!("{THREADS_VAR} must be a positive integer, got `{raw}`");
    }
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    eprintln!("convention: {}", crystal_polytope::CONVENTION);
    let result = configure_threads().and_then(|()| commands::run(&cli.command));
    match result {
        Ok(report) => {
            let rendered = match output::render(&report, cli.format) {
                Ok(s) => s,
                Err(e) => {
                    eprintln!("error: {e:#}");
                    return ExitCode::from(1);
                }
            };
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(rendered.as_bytes()).is_err() {
                return ExitCode::from(1);
            }
            if report.mismatch {
                eprintln!("verification mismatch");
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
