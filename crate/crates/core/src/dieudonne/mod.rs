//! Unitary Dieudonne modules of rank 6 with semilinear F and V: the general
//! supersingular braid module and its first-order deformation, the display
//! at a superspecial point, Hasse invariants, stratum classification and the
//! branch structure of the supersingular locus at a superspecial point.

mod branch;
mod matrix;
mod module;
mod strata;

pub use branch::{branch_analysis, branch_table, gluing_obstruction, BranchAnalysis, GluingReport};
pub use matrix::{
    intersect, kernel, rank, same_span, span_rank, twist_vector, Coefficient, Matrix, TwistedMap,
};
pub use module::{
    braid3, frobenius_from_verschiebung, gss_deformation, invert3, min_display_truncation,
    sigma_block_nilpotent, ssp_covariant, ssp_display, standard_gram, HasseValue, TypeTag, UnitaryModule, Variance, E1,
    E2, E3, F1, F2, F3, LABELS, SSP_LIE,
};
pub use strata::{classify_stratum, filtration_ranks, FiltrationRanks, StratumLabel};

use thiserror::Error;

use crate::ffield::FieldError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DError {
    #[error("cannot compose: expected a map into twist level {expected}, got level {got}")]
    TwistMismatch { expected: i32, got: i32 },
    #[error("matrix dimensions do not match")]
    DimensionMismatch,
    #[error("image is not proportional to the twisted generator of L")]
    NotProportional,
    #[error("malformed module: {0}")]
    Malformed(String),
    #[error("truncation order {got} is below the required {needed}")]
    TruncationTooSmall { needed: u32, got: u32 },
    #[error(transparent)]
    Field(#[from] FieldError),
}
