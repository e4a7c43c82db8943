use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use picard_cli::{out_path, run, Cli, Status};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match run(&cli.command) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("picard: {e}");
            return ExitCode::from(e.status.code());
        }
    };
    let written = match out_path(&cli.command) {
        Some(path) => std::fs::write(path, &outcome.text)
            .map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => std::io::stdout()
            .write_all(outcome.text.as_bytes())
            .map_err(|e| e.to_string()),
    };
    if let Err(msg) = written {
        eprintln!("picard: {msg}");
        return ExitCode::from(Status::ResourceGuard.code());
    }
    match outcome.status {
        Status::Pass => {}
        Status::IdentityFailed => eprintln!("picard: some checks failed"),
        Status::Hypothesis => eprintln!("picard: some rows violate a hypothesis"),
        Status::ResourceGuard => eprintln!("picard: some rows hit a resource guard"),
    }
    ExitCode::from(outcome.status.code())
}
