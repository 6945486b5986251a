//! Command-line front end for the random caterpillar laboratory.

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod format;
pub mod manifest;
pub mod svg;
pub mod verify;

pub use error::CliError;

use std::io::Write;

use args::{Cli, Command};

/// Runs one parsed invocation and returns the exit code.
pub fn dispatch(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match &cli.command {
        Command::Simulate(a) => commands::simulate(a, out),
        Command::Theory(a) => commands::theory(a, out),
        Command::Verify(a) => commands::verify(a, out, err),
        Command::Clt(a) => commands::clt(a, out),
        Command::Oracle(a) => commands::oracle(a, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
