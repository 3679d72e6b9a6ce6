//! `opilab` command-line front-end.
//!
//! Exit codes are total: 0 for a clean run (or Accept), 2 for verification
//! failures (Violated/Errored reports, certifier Reject), 3 for
//! configuration and usage errors.

mod args;
mod commands;

use clap::error::ErrorKind;
use clap::Parser;

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAIL: u8 = 2;
pub const EXIT_CONFIG: u8 = 3;

pub fn run() -> u8 {
    let cli = match args::Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => match err.kind() {
            ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                print!("{err}");
                return EXIT_OK;
            }
            _ => {
                eprint!("{err}");
                return EXIT_CONFIG;
            }
        },
    };
    let outcome = match cli.command {
        args::Command::Verify(a) => commands::cmd_verify(a),
        args::Command::Bounds(a) => commands::cmd_bounds(a),
        args::Command::Sweep(a) => commands::cmd_sweep(a),
        args::Command::Certify(a) => commands::cmd_certify(a),
    };
    match outcome {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("opilab: {msg}");
            EXIT_CONFIG
        }
    }
}
