//! Arithmetic in F_{p^2}, truncated power series in two variables over it,
//! homogeneous ideals of the local models, and the branch substitutions
//! u = zeta*v.

mod fp2;
mod ideal;
mod series;

pub use fp2::{Fp2, Fp2Field};
pub use ideal::{
    local_equation, order_at_origin, quotient_dimension, roots_of_minus_one,
    vanishing_scheme_ideal, BranchMap, Ideal, Order,
};
pub use series::{Exponent, Series};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("p = {p} splits in the field of discriminant {disc}")]
    Split { p: u64, disc: i64 },
    #[error("p = {p} ramifies in the field of discriminant {disc}")]
    Ramified { p: u64, disc: i64 },
    #[error("x^2 - {t}x - {n} is reducible mod {p}")]
    Reducible { p: u64, t: u64, n: u64 },
    #[error("elements of different fields")]
    FieldMismatch,
    #[error("truncation orders differ: {0} vs {1}")]
    TruncationMismatch(u32, u32),
    #[error("ideal generator {0} is not homogeneous")]
    NonHomogeneousGenerator(String),
    #[error("an ideal needs at least one generator")]
    EmptyIdeal,
    #[error("generator list is not a Groebner basis in graded-lex order")]
    NotGroebner,
    #[error("quotient dimension has not stabilized below truncation order {0}")]
    DimensionNotStabilized(u32),
    #[error("{0} is not a (p+1)-th root of -1")]
    InvalidBranch(String),
}
