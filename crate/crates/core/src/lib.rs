//! Exact computer algebra for binomial-type polynomial sequences in
//! characteristic p.
//!
//! The crate provides, over F_q and F_q[theta]:
//!
//! * the truncated divided power series ring and its group of units with
//!   constant term 1 ([`divided`]),
//! * binomial-type sequence checking via direct bivariate expansion and via
//!   multiplicativity of generating functions ([`binomial`]),
//! * the Carlitz construction from sequences of F_q-linear polynomials, the
//!   Carlitz polynomial basis, Dirac elements and the Carlitz module with
//!   its umbral image in A[t] ([`carlitz`]),
//! * the null-sequence construction that produces elements outside the
//!   Carlitz image ([`nullseq`]),
//! * digit-permutation and coefficient/index endomorphisms ([`actions`]),
//! * an incremental enumerator and classifier for all truncated
//!   binomial-type sequences over a prime field ([`explorer`]).
//!
//! All arithmetic is exact. Data-parallel inner loops run on rayon when the
//! `parallel` feature (default) is enabled and fall back to identical
//! sequential code without it.

pub mod actions;
pub mod binomial;
pub mod bipoly;
pub mod carlitz;
pub mod digits;
pub mod divided;
pub mod explorer;
pub mod field;
pub mod frac;
pub mod linalg;
pub mod lucas;
pub mod nullseq;
pub mod par;
pub mod poly;
pub mod ring;
pub mod textio;

/// Crate-wide error type. Arithmetic on malformed inputs that the type
/// system cannot rule out (mixed rings, bad windows, invalid constructions)
/// reports through this; internal invariant violations panic.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("constant coefficient must be 1")]
    ConstantTermNotOne,
    #[error("index {index} outside truncation window {trunc}")]
    IndexOutOfWindow { index: u64, trunc: usize },
    #[error("truncation {trunc} incompatible with digit window q^{window}")]
    WindowMismatch { trunc: usize, window: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
