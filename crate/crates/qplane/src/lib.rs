//! Command-line front end for `qplane-core`: field and group tables, single
//! quantities, verification runs, oracle comparisons, seeded experiment
//! sweeps and threshold calibration.
//!
//! Exit codes: 0 on success, 1 when an assertion, oracle comparison or size
//! limit fails, 2 on usage and configuration errors.

pub mod cli;
pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use clap::Parser;

pub use error::{CliError, CliResult};

/// Parses `args` and runs the command, returning the process exit code.
pub fn main_with_args<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match cli::Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match commands::run(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
