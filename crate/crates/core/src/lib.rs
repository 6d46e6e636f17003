//! Exact combinatorial calculus for Reeb orbit data: perturbed rational
//! arithmetic, lattice-path partitions, Conley-Zehnder / ECH-style index
//! bookkeeping, curve scoring, and an auditor for long chains of index-2
//! curves against a ledger of smallness constants.
//!
//! Everything is exact: rationals are arbitrary precision, rotation numbers
//! may carry a formal infinitesimal, and the few genuinely irrational
//! comparisons (fractional powers of a large integer) go through a certified
//! directed-rounding comparator. No floating point is used anywhere.

mod error;

pub mod auditor;
pub mod certified;
pub mod exactnum;
pub mod index;
pub mod orbits;
pub mod partitions;
pub mod score;
pub mod synth;

pub use error::Error;

pub type Result<T> = std::result::Result<T, Error>;
