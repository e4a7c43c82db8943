//! Exact invariants of the supersingular locus of a Picard modular surface
//! at an inert prime.

pub mod curves;
pub mod dieudonne;
pub mod exact;
pub mod ffield;
pub mod intersect;
pub mod kfield;
pub mod lfunc;
pub mod numtheory;

pub use exact::{Check, Exact};

#[cfg(test)]
mod oracles;
#[cfg(test)]
mod properties;
