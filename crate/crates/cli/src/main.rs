use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    match ecvrp_cli::run(ecvrp_cli::args::Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
