use std::io;
use std::process::ExitCode;

use clap::Parser;
use jointslab_cli::{run, Cli};

/// Exit codes: 0 all checks pass, 1 some check fails, 2 bad input.
fn main() -> ExitCode {
    let cli = Cli::parse();
    let (mut out, mut err) = (io::stdout().lock(), io::stderr());
    match run(&cli, &mut out, &mut err) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
