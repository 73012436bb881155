//! Exact scalars over Q or F_p and the matrix kernel built on them.

mod matrix;
mod scalar;

pub use matrix::{EchelonBasis, ExactMatrix};
pub use scalar::{binomial, Field, Scalar};
