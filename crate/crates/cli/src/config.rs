use std::fmt;

use clap::ValueEnum;
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use picard_core::lfunc::{self, LError};
use picard_core::numtheory;
use picard_core::Exact;

use crate::output::{CliError, Status};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Plain,
    Json,
    Csv,
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Plain => "plain",
            Format::Json => "json",
            Format::Csv => "csv",
        })
    }
}

pub const DEFAULT_SERIES_TERMS: u64 = 1_000_000;

/// Settings of a single (d, p) run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub d: i64,
    pub p: u64,
    pub level: Option<u64>,
    pub index: Option<Exact>,
    pub truncation: Option<u32>,
    pub series_terms: u64,
    pub format: Format,
    pub out: Option<String>,
    pub reproducible: bool,
}

impl RunConfig {
    pub fn new(d: i64, p: u64) -> RunConfig {
        RunConfig {
            d,
            p,
            level: None,
            index: None,
            truncation: None,
            series_terms: DEFAULT_SERIES_TERMS,
            format: Format::Plain,
            out: None,
            reproducible: true,
        }
    }
}

/// Settings of a grid report; every (d, p) pair shares the other options.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridConfig {
    pub d: Vec<i64>,
    pub p: Vec<u64>,
    pub level: Option<u64>,
    pub index: Option<Exact>,
    pub series_terms: u64,
    pub format: Format,
    pub out: Option<String>,
    pub reproducible: bool,
}

impl GridConfig {
    pub fn run_config(&self, d: i64, p: u64) -> RunConfig {
        RunConfig {
            d,
            p,
            level: self.level,
            index: self.index.clone(),
            truncation: None,
            series_terms: self.series_terms,
            format: self.format,
            out: None,
            reproducible: self.reproducible,
        }
    }
}

/// D_K from a negative squarefree d, or d itself when it is already a
/// fundamental discriminant such as -4 or -8.
pub fn discriminant(d: i64) -> Result<i64, CliError> {
    if d < 0 && numtheory::is_squarefree(d.unsigned_abs()) {
        return Ok(numtheory::discriminant_of(d));
    }
    if d < 0 && numtheory::is_fundamental_discriminant(d) {
        return Ok(d);
    }
    Err(CliError::hypothesis(
        "d negative squarefree",
        format!("d = {d} is neither a negative squarefree integer nor a fundamental discriminant"),
    ))
}

pub fn level_of(cfg: &RunConfig, disc: i64) -> Result<u64, CliError> {
    let level = cfg.level.unwrap_or_else(|| lfunc::default_level(disc, cfg.p));
    if level < 3 {
        return Err(CliError::hypothesis(
            "level N >= 3",
            format!("level N = {level} must be at least 3"),
        ));
    }
    Ok(level)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IndexSource {
    Given,
    /// Product of local group orders for a squarefree level.
    LevelFormula,
}

pub fn index_of(cfg: &RunConfig, level: u64, disc: i64) -> Result<(Exact, IndexSource), CliError> {
    if let Some(ix) = &cfg.index {
        return Ok((ix.clone(), IndexSource::Given));
    }
    match lfunc::index_gamma(level, disc) {
        Ok(ix) => Ok((Exact::big(ix), IndexSource::LevelFormula)),
        Err(LError::BadLevel { reason, .. }) => Err(CliError::hypothesis(
            "index available",
            format!("no index formula for N = {level} ({reason}); pass --index"),
        )),
        Err(e) => Err(e.into()),
    }
}

impl From<LError> for CliError {
    fn from(e: LError) -> CliError {
        let name = match &e {
            LError::NotFundamental(_) => "fundamental discriminant",
            LError::NotPrime(_) => "p prime",
            LError::SplitPrime { .. } | LError::RamifiedPrime { .. } => "p inert in K",
            LError::PrimeDividesLevel { .. } => "p prime to 2N",
            LError::BadLevel { .. } => "level",
            LError::NegativeIndex(_) => "index non-negative",
            LError::OracleTooLarge(_) => {
                return CliError::new(Status::ResourceGuard, "enumeration size", e.to_string())
            }
        };
        CliError::hypothesis(name, e.to_string())
    }
}

pub(crate) fn big(n: u64) -> BigInt {
    BigInt::from(n)
}
