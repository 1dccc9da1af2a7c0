use std::process::ExitCode;

use clap::Parser;
use ugate_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        // Usage errors are bad input (1), not clap's default 2, which means non-generation here.
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(u8::from(e.use_stderr()));
        }
    };
    ExitCode::from(run(&cli) as u8)
}
