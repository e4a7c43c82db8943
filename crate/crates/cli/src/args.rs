use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use picard_core::Exact;

use crate::config::{Format, GridConfig, RunConfig, DEFAULT_SERIES_TERMS};

#[derive(Parser, Debug)]
#[command(
    name = "picard",
    version,
    about = "Exact invariants of the supersingular locus of Picard modular surfaces"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// c2, component and superspecial counts, intersection numbers
    Invariants(InvariantsArgs),
    /// Hasse invariants, F^2 and branches at a superspecial point
    LocalModels(LocalArgs),
    /// Invariants over a grid of (d, p)
    Report(GridArgs),
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Level N (default: smallest squarefree N >= 3 prime to 2pD)
    #[arg(long)]
    pub level: Option<u64>,
    /// Index of the level subgroup, as an integer or fraction a/b
    #[arg(long, allow_negative_numbers = true)]
    pub index: Option<Exact>,
    /// Truncation order of power series (default p^3 + 4)
    #[arg(long)]
    pub truncation: Option<u32>,
    /// Terms of the Dirichlet series used for the numerical check
    #[arg(long, default_value_t = DEFAULT_SERIES_TERMS)]
    pub series_terms: u64,
    #[arg(long, value_enum, default_value_t = Format::Plain)]
    pub format: Format,
    /// Write output here instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Omit the timestamp header
    #[arg(long)]
    pub reproducible: bool,
}

#[derive(Args, Debug, Clone)]
pub struct InvariantsArgs {
    /// Negative squarefree d, K = Q(sqrt d)
    #[arg(long, allow_negative_numbers = true)]
    pub d: i64,
    #[arg(long)]
    pub p: u64,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Clone)]
pub struct LocalArgs {
    /// Negative squarefree d (default: smallest |d| with p inert)
    #[arg(long, allow_negative_numbers = true)]
    pub d: Option<i64>,
    #[arg(long)]
    pub p: u64,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Clone)]
pub struct GridArgs {
    /// Repeatable
    #[arg(long, allow_negative_numbers = true)]
    pub d: Vec<i64>,
    /// Repeatable
    #[arg(long)]
    pub p: Vec<u64>,
    #[command(flatten)]
    pub common: Common,
}

fn path(p: &Option<PathBuf>) -> Option<String> {
    p.as_ref().map(|p| p.display().to_string())
}

impl Common {
    pub fn run_config(&self, d: i64, p: u64) -> RunConfig {
        RunConfig {
            d,
            p,
            level: self.level,
            index: self.index.clone(),
            truncation: self.truncation,
            series_terms: self.series_terms,
            format: self.format,
            out: path(&self.out),
            reproducible: self.reproducible,
        }
    }
}

impl GridArgs {
    pub fn grid_config(&self) -> GridConfig {
        let c = &self.common;
        GridConfig {
            d: self.d.clone(),
            p: self.p.clone(),
            level: c.level,
            index: c.index.clone(),
            series_terms: c.series_terms,
            format: c.format,
            out: path(&c.out),
            reproducible: c.reproducible,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_negative_d() {
        let cli = Cli::try_parse_from(["picard", "invariants", "--d", "-7", "--p", "3", "--index", "7"]).unwrap();
        match cli.command {
            Command::Invariants(a) => {
                assert_eq!((a.d, a.p), (-7, 3));
                assert_eq!(a.common.index, Some(Exact::int(7)));
            }
            _ => panic!("wrong subcommand"),
        }
    }

    #[test]
    fn repeated_grid_flags() {
        let cli = Cli::try_parse_from([
            "picard", "report", "--d", "-4", "--d", "-7", "--p", "3", "--format", "csv",
        ])
        .unwrap();
        match cli.command {
            Command::Report(a) => {
                assert_eq!(a.d, vec![-4, -7]);
                assert_eq!(a.common.format, Format::Csv);
            }
            _ => panic!("wrong subcommand"),
        }
    }

    #[test]
    fn fractional_index() {
        let cli = Cli::try_parse_from(["picard", "invariants", "--d", "-1", "--p", "3", "--index", "3/2"]).unwrap();
        let Command::Invariants(a) = cli.command else { panic!() };
        assert_eq!(a.common.index, Some(Exact::ratio(3, 2)));
    }
}
