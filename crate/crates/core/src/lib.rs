//! Exact local symbols and reciprocity laws on the projective line over a
//! finite field, together with the commensurability and determinant-line
//! machinery that explains them on abstract vector spaces.
//!
//! Everything here is exact: finite-field arithmetic, polynomial
//! factorization, factored rational functions, per-point tame / Hilbert /
//! character symbols whose products verify reciprocity identities, and a
//! determinant-line commutator engine whose values reproduce the symbol
//! computations through an independent route.

pub mod error;
pub mod ff;
pub mod detline;
mod linalg;
pub mod poly;
pub mod ratfun;
pub mod seqspace;
pub mod symbols;

pub use error::{Error, Result};
