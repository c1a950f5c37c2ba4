//! Computational machinery for self-orthogonal matrix-product codes over
//! finite fields.
//!
//! A matrix-product code combines `s` linear codes of length `n` over `F_q`
//! through an `s x s` defining matrix `A`: its codewords are the rows of
//! `[c_1, ..., c_s] * A` read as vectors of length `sn`.  This crate builds
//! such codes, bounds and computes their minimum distances, and decides
//! orthogonality with respect to a general family of inner products
//! `<u, v> = u * M^T * frob_e(v)^T` attached to semilinear isometries
//! `v -> frob_e(v) * M` with `M` monomial.  The Euclidean, Hermitian,
//! Galois and symplectic products are all special cases.
//!
//! The interesting defining matrices are Toeplitz matrices that are
//! non-singular by columns (NSC) and, after multiplication by a monomial
//! matrix, conjugate-symmetrize to a diagonal matrix.  The [`quasi`] module
//! certifies and samples such matrices; [`constructions`] turns them into
//! self-orthogonal codes and replays the pinned regression data shipped with
//! the crate.
//!
//! Everything is exact arithmetic over `F_q` with `q <= 2^20`; nothing here
//! is floating point.

pub mod catalog;
pub mod cli;
pub mod codes;
pub mod constructions;
mod error;
pub mod gf;
pub mod isometry;
pub mod linalg;
pub mod mpc;
pub mod nsc;
pub mod quasi;

pub use error::{Error, Result};

/// Default ceiling on exhaustive codeword enumeration, counted in codewords.
pub const DEFAULT_ENUM_BUDGET: u64 = 1 << 24;

/// Default retry bound when rejection-sampling an NSC Toeplitz matrix.
pub const DEFAULT_NSC_RETRY_LIMIT: u64 = 10_000;

/// Schema tag stamped on every JSON document this crate emits.
pub const SCHEMA_VERSION: u32 = 1;
