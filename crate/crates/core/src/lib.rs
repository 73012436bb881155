pub mod base;
pub mod dg;
pub mod error;
pub mod expr;
pub mod fixtures;
pub mod homology;
pub mod invariants;
pub mod model;
pub mod module;
pub mod resolution;
pub mod linear;

pub use error::{Error, Result};
