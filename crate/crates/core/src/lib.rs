//! Exact computational algebra for finite quandles and their linear modules,
//! Lie-Yamaguti algebras, infinitesimal s-manifolds, their representations,
//! and the enveloping Lie algebra constructions that connect them.
//!
//! Everything is computed over exact fields (the rationals or a prime field),
//! so every axiom check is a strict equality. The crate is `no_std` and only
//! needs `alloc`.

#![cfg_attr(not(test), no_std)]
#![allow(clippy::needless_range_loop)]

extern crate alloc;

pub mod check;
pub mod corpus;
pub mod envelope;
pub mod linalg;
pub mod lya;
pub mod module;
pub mod perm;
pub mod quandle;
pub mod representation;
pub mod scalar;

pub use linalg::{LinalgError, Matrix, Rref, SpanCoordinates};
pub use scalar::{Field, Scalar};

/// Default element cap for explicit group closures.
pub const DEFAULT_GROUP_CAP: usize = 20_000;

/// Materialized extensions larger than this get sampled self-distributivity checks.
pub const EXHAUSTIVE_TRIPLE_LIMIT: usize = 100;

/// Number of sampled triples used above [`EXHAUSTIVE_TRIPLE_LIMIT`].
pub const DEFAULT_SAMPLED_TRIPLES: usize = 100_000;
