//! Command-line front end for `picard-core`: argument types, the
//! `invariants`, `local-models` and `report` commands, and their plain, JSON
//! and CSV renderers.

pub mod args;
pub mod config;
pub mod invariants;
pub mod local_models;
pub mod output;
pub mod report;

pub use args::{Cli, Command};
pub use config::{Format, GridConfig, RunConfig};
pub use output::{CliError, Envelope, Outcome, Status};

/// Runs a parsed command. Refusals carry their status and message.
pub fn run(command: &Command) -> Result<Outcome, CliError> {
    match command {
        Command::Invariants(a) => invariants::run(&a.common.run_config(a.d, a.p)),
        Command::LocalModels(a) => {
            local_models::check_guard(a.p)?;
            let d = match a.d {
                Some(d) => d,
                None => local_models::default_d(a.p).ok_or_else(|| {
                    CliError::hypothesis("p inert in K", format!("no small d with p = {} inert", a.p))
                })?,
            };
            local_models::run(&a.common.run_config(d, a.p))
        }
        Command::Report(a) => Ok(report::run(&a.grid_config())),
    }
}

/// Output destination named by a command's --out flag.
pub fn out_path(command: &Command) -> Option<&std::path::Path> {
    match command {
        Command::Invariants(a) => a.common.out.as_deref(),
        Command::LocalModels(a) => a.common.out.as_deref(),
        Command::Report(a) => a.common.out.as_deref(),
    }
}
