mod args;
mod commands;
mod error;
mod input;
mod output;
mod svg;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Basis(a) => commands::basis(a),
        Command::Ortho(a) => commands::ortho(a),
        Command::Smooth(a) => commands::smooth(a),
        Command::Fpca(a) => commands::fpca_cmd(a),
        Command::Bench(a) => commands::bench(a),
        Command::Plot(a) => commands::plot(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}: {e}", e.name());
            ExitCode::from(e.exit_code())
        }
    }
}
