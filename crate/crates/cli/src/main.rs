//! `qhive`: quantum Littlewood-Richardson coefficients, toric hive
//! polytopes, convolution densities and their cross-checks.
//!
//! All machine-readable output goes to standard output (JSON by default);
//! progress notes go to standard error. Exit codes: 0 success, 1 usage
//! error, 2 validation/numerical failure.

mod commands;
mod parse;
mod report;

use clap::Parser;

use commands::{Cli, ExitKind};

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap's default usage exit code is 2; this tool reserves 2 for
            // validation failures and reports usage problems with 1.
            let is_help = matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            );
            let _ = e.print();
            std::process::exit(if is_help { 0 } else { 1 });
        }
    };
    match commands::run(cli) {
        Ok(ExitKind::Success) => {}
        Ok(ExitKind::ValidationFailure) => std::process::exit(2),
        Err(err) => {
            eprintln!("error: {err}");
            let usage = err.downcast_ref::<parse::UsageError>().is_some();
            std::process::exit(if usage { 1 } else { 2 });
        }
    }
}
