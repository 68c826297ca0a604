use std::io::Write;
use std::process::ExitCode;

use kbgeo_cli::{run_command, RunConfig, EXIT_USAGE};

fn main() -> ExitCode {
    let config = match RunConfig::from_env() {
        Ok(c) => c,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(EXIT_USAGE as u8);
        }
    };
    let argv: Vec<String> = std::env::args().collect();
    let outcome = run_command(&argv, &config);
    print!("{}", outcome.stdout);
    eprint!("{}", outcome.stderr);
    let _ = std::io::stdout().flush();
    ExitCode::from(outcome.code as u8)
}
