mod args;
mod commands;
mod table;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use commands::{Status, Usage};

const EXIT_FAILURE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_VERIFICATION: u8 = 3;
const EXIT_NUMERICAL: u8 = 4;

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.is::<Usage>() {
        return EXIT_USAGE;
    }
    match err.downcast_ref::<testsched_core::Error>() {
        Some(testsched_core::Error::Numerical(_)) => EXIT_NUMERICAL,
        Some(
            testsched_core::Error::InvalidParameter(_)
            | testsched_core::Error::InvalidJob { .. }
            | testsched_core::Error::Parse { .. }
            | testsched_core::Error::Precondition(_),
        ) => EXIT_USAGE,
        _ => EXIT_FAILURE,
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run(a) => commands::run(a),
        Command::Ratio(a) => commands::ratio(a),
        Command::Sweep(a) => commands::sweep(a),
        Command::Verify(a) => commands::verify(a),
        Command::Generate(a) => commands::generate(a),
        Command::Bounds(a) => commands::bounds(a),
    };
    match result {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::VerificationFailed) => ExitCode::from(EXIT_VERIFICATION),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
