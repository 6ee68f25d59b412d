//! Cyclic MDS codes over finite fields obtained by reducing generator
//! matrices built from roots of unity in `Z[ζ_n]`.
//!
//! The pipeline certifies in characteristic zero that every maximal minor of
//! the generator matrix is nonzero, collects the primes dividing the norms of
//! those minors, and reduces the matrix modulo a prime outside that set. The
//! reduced code is then checked and classified as Reed-Solomon type or not
//! through the dimension of its Schur square.

pub mod error;
pub mod numth;
pub mod cyclotomic;
pub mod ffield;
pub mod linalg;
pub mod cycmatrix;
pub mod badprimes;
pub mod codecheck;
pub mod tables;
mod serde_dec;

pub use error::{Error, Result};
