//! Bit-packed truncated power series over GF(2) and a number-theoretic
//! toolkit built on top of them.
//!
//! The central object is [`BitSeries`], a power series in `q` with
//! coefficients in the two-element field, truncated to `N` known
//! coefficients and packed 64 per word. On top of the ring operations the
//! crate provides:
//!
//! - [`seq`]: generators for the named coefficient sets (squares, odd
//!   squares, triangular numbers, generalized pentagonal numbers, the
//!   divisor-sum parity set and its reciprocal, partition parity), each
//!   with an independent brute-force oracle where one exists.
//! - [`analysis`]: a catalog of verifiable series identities, a natural
//!   density engine with per-residue-class reporting, and a seeded
//!   random-reciprocal density experiment.
//! - [`beatty`]: exact integer verification of the Beatty-sequence index
//!   identities for the divisor-parity enumeration; no floating point.
//! - [`oeis`]: b-file parsing, caching, and sequence cross-checking.
//! - [`format`]: the `F2S1` binary series format and the exponent-per-line
//!   text format.

pub mod analysis;
pub mod beatty;
pub mod format;
pub mod oeis;
pub mod seq;
pub mod series;

pub use series::{BitSeries, IndexSet, SeriesError};
