//! Library half of the `qcircle` binary, so the commands can be driven from
//! tests without spawning a process.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod error;
pub mod ledger;
pub mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::Parser;

use crate::commands::Outcome;
use crate::config::{resolve_checkpoint, Cli, Command, RunConfig, CHECKPOINT_DIR_ENV};
use crate::error::{exit, CliError, CliResult};

/// Parses `args`, runs the command and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { exit::PRECONDITION } else { exit::SUCCESS };
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: &Cli) -> CliResult<i32> {
    let cfg = RunConfig::from_cli(cli)?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build_global()
        .map_err(|e| CliError::Precondition(format!("thread pool: {e}")))?;

    let outcome = dispatch(&cfg, &cli.command)?;
    match &cfg.out {
        Some(path) => ledger::write_atomically(path, &outcome.bytes)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(&outcome.bytes)?;
            stdout.flush()?;
        }
    }
    if let Some(notice) = &outcome.notice {
        eprintln!("{notice}");
    }
    Ok(outcome.exit_code)
}

fn dispatch(cfg: &RunConfig, command: &Command) -> CliResult<Outcome> {
    match command {
        Command::Coeffs { n, binary } => commands::coeffs(*n, *binary),
        Command::VerifyNonneg {
            n,
            checkpoint,
            resume,
            checkpoint_every,
        } => {
            let env_dir = std::env::var_os(CHECKPOINT_DIR_ENV).map(PathBuf::from);
            let path = resolve_checkpoint(checkpoint.clone(), env_dir);
            commands::verify_nonneg(*n, path, *resume, *checkpoint_every)
        }
        Command::Compare { n } => commands::compare(cfg, n),
        Command::Certify { n } => commands::certify(cfg, *n),
        Command::Mainterm { a, m, h, k, x, y } => {
            let residue = match (a, m) {
                (Some(a), Some(m)) => Some((*a, *m)),
                (None, None) => None,
                _ => {
                    return Err(CliError::Precondition(
                        "--a and --m must be given together".into(),
                    ))
                }
            };
            commands::mainterm(cfg, residue, *h, *k, *x, *y)
        }
        Command::Farey { order } => commands::farey(cfg, *order),
        Command::Nearpole { x_grid, y_fractions } => commands::nearpole(cfg, x_grid, y_fractions),
        Command::Identities { k_max } => commands::identities(cfg, *k_max, cfg.tol),
    }
}
