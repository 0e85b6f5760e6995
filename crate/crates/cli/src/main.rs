mod args;
mod commands;
mod config_file;
mod error;
mod output;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Sample(a) => commands::sample(a),
        Command::Bounds(a) => commands::bounds(a),
        Command::Verify(a) => commands::verify(a),
        Command::ReproduceFigure(a) => commands::reproduce_figure(a),
        Command::CheckProofs(a) => commands::check_proofs(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
