use std::process::ExitCode;

use clap::Parser;

use diamond_sweep::cli::{run, Cli};
use diamond_sweep::SweepError;

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("diamond-sweep: {e}");
            match e {
                SweepError::Config(_) | SweepError::Model(_) => ExitCode::from(2),
                SweepError::Io(_) => ExitCode::FAILURE,
            }
        }
    }
}
