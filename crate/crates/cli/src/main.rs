use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use rif_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = run(&cli);
    if !outcome.stdout.is_empty() {
        // a closed pipe is not an error for a report printer
        let _ = writeln!(std::io::stdout().lock(), "{}", outcome.stdout);
    }
    if let Some(msg) = outcome.stderr {
        let _ = writeln!(std::io::stderr().lock(), "rif: {msg}");
    }
    ExitCode::from(outcome.code)
}
