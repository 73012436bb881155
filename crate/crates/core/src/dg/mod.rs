mod algebra;
mod element;
mod monomial;
mod morphism;

pub use algebra::{DgAlgebra, DgVariable, VariableKind};
pub use element::DgElement;
pub use monomial::Monomial;
pub use morphism::DgMorphism;
