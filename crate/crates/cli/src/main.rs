use std::process::ExitCode;

use clap::Parser;
use focal_green_cli::{execute, exit, RunConfig};

fn main() -> ExitCode {
    let config = match RunConfig::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { exit::USAGE } else { exit::PASS };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(&config, &mut std::io::stdout().lock()) {
        Ok(outcome) => {
            for v in &outcome.violations {
                eprintln!("violation: {v}");
            }
            ExitCode::from(outcome.exit_code())
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code())
        }
    }
}
