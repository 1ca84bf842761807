//! `gaussent`: analyse two-mode Gaussian states, simulate the two-party
//! estimation protocol, tabulate the phase diagram and run oracle checks.
//!
//! Exit codes: 0 success, 1 usage, parse or runtime error, 2 unphysical
//! input, 3 verification failure.

use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod analyze;
mod oracle;
mod output;
mod phase;
mod simulate;

#[derive(Parser, Debug)]
#[command(
    name = "gaussent",
    version,
    about = "Entanglement of two-mode Gaussian states from local measurements"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Analyse a covariance-matrix file.
    Analyze(analyze::Args),
    /// Run the two-party protocol on a simulated source.
    Simulate(simulate::Args),
    /// Classify a grid of symmetric thermal squeezed states.
    PhaseDiagram(phase::Args),
    /// Check Gaussian formulas against the truncated Fock-space oracle.
    Oracle(oracle::Args),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() {
                output::EXIT_USAGE
            } else {
                0
            });
        }
    };
    let result = match cli.command {
        Command::Analyze(a) => analyze::run(a),
        Command::Simulate(a) => simulate::run(a),
        Command::PhaseDiagram(a) => phase::run(a),
        Command::Oracle(a) => oracle::run(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code)
        }
    }
}
