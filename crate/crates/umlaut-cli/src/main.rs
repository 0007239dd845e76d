//! `umlaut` command-line front end.

mod args;
mod run;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use args::Cli;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    let outcome = run::execute(&cli);
    if let Some(message) = &outcome.message {
        eprintln!("umlaut: {message}");
    }
    if let Some(body) = &outcome.body {
        let written = match &cli.common.output {
            Some(path) => std::fs::write(path, body),
            None => std::io::stdout().lock().write_all(body.as_bytes()),
        };
        if let Err(e) = written {
            eprintln!("umlaut: cannot write output: {e}");
            return ExitCode::from(1);
        }
    }
    ExitCode::from(outcome.code)
}
