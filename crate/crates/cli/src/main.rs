use std::process::ExitCode;

use clap::Parser;
use toda_flag::config::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match toda_flag::run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("toda-flag: invariant violated; see the report");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("toda-flag: error: {e:#}");
            ExitCode::from(2)
        }
    }
}
