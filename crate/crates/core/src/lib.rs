//! Exact computations around the exceptional group G2: octonionic subspace
//! geometry, representation combinatorics, Bott-Borel-Weil bookkeeping on the
//! flag varieties of G2, and equivariant tensor computations at a point.

#![allow(clippy::needless_range_loop)]

pub mod bbw;
pub mod equivariant;
pub mod error;
pub mod linalg;
pub mod octonion;
pub mod rep;
pub mod scalar;

pub use error::ParseError;
pub use scalar::{gq, GaussianRational, Gq};
