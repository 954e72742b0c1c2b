//! `pgtomo`: state and process tomography with certified error bounds.
//!
//! Exit codes: 0 success, 1 reproduced value outside tolerance, 2 malformed
//! input or usage, 3 mathematical precondition failure.

mod args;
mod commands;
mod io;
mod reproduce;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::StateTomo(a) => commands::state_tomo(a),
        Command::ProcessTomo(a) => commands::process_tomo(a),
        Command::ClCurve(a) => commands::cl_curve_cmd(a),
        Command::ReproducePaper => reproduce::reproduce_paper(),
        Command::ProbeScore(a) => commands::probe_score_cmd(a),
        Command::ProbeSearch(a) => commands::probe_search_cmd(a),
        Command::WriteFixtures { out_dir } => commands::write_fixtures(out_dir),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("pgtomo: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
