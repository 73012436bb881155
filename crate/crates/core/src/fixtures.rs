//! Small algebras that recur in tests and examples.

use std::sync::Arc;

use crate::base::{truncate_quotient, BasePresentation, TruncatedBase};
use crate::dg::{DgAlgebra, DgElement, VariableKind};
use crate::error::Result;
use crate::linear::Field;

/// `k[vars] / (relations)` with every variable in internal degree 1.
pub fn ring(field: Field, vars: &[&str], relations: &[&str], bound: usize) -> Result<DgAlgebra> {
    let vars: Vec<(&str, usize)> = vars.iter().map(|v| (*v, 1)).collect();
    let mut p = BasePresentation::polynomial_ring(field, &vars)?;
    for r in relations {
        p.add_relation(r)?;
    }
    Ok(DgAlgebra::new(Arc::new(truncate_quotient(&p, bound))))
}

/// `k[x]/(x^2)`.
pub fn dual_numbers(field: Field, bound: usize) -> Result<DgAlgebra> {
    ring(field, &["x"], &["x^2"], bound)
}

/// `k[x,y]/(x^2, y^2)`.
pub fn complete_intersection(field: Field, bound: usize) -> Result<DgAlgebra> {
    ring(field, &["x", "y"], &["x^2", "y^2"], bound)
}

/// `k[x,y]/(x^2, xy)`.
pub fn non_complete_intersection(field: Field, bound: usize) -> Result<DgAlgebra> {
    ring(field, &["x", "y"], &["x^2", "x*y"], bound)
}

/// The three ring fixtures with their names.
pub fn ring_fixtures(field: Field, bound: usize) -> Result<Vec<(&'static str, DgAlgebra)>> {
    Ok(vec![
        ("k[x]/(x^2)", dual_numbers(field, bound)?),
        ("k[x,y]/(x^2,y^2)", complete_intersection(field, bound)?),
        ("k[x,y]/(x^2,xy)", non_complete_intersection(field, bound)?),
    ])
}

/// `k[x0]/(x0^m)` with `x0` in bidegree `(d, d)`, `d` even.
pub fn truncated_power(field: Field, d: usize, m: u32, bound: usize) -> Result<DgAlgebra> {
    let mut p = BasePresentation::new(field);
    p.add_graded_variable("x0", d, d)?;
    p.add_relation(&format!("x0^{m}"))?;
    Ok(DgAlgebra::new(Arc::new(truncate_quotient(&p, bound))))
}

/// `k[x0, x1 | d x1 = x0^m]` with `x0` in bidegree `(d, d)`, `d` even.
pub fn koszul_on_power(field: Field, d: usize, m: u32, bound: usize) -> Result<DgAlgebra> {
    let mut a = DgAlgebra::new(TruncatedBase::residue_field(field, bound));
    a.declare_variable("x0", d, d, VariableKind::Polynomial, DgElement::zero(d - 1, d))?;
    let z = a.parse_element(&format!("x0^{m}"), m as usize * d, m as usize * d)?;
    a.adjoin("x1", VariableKind::Exterior, z)?;
    Ok(a)
}

/// `k[x1, x2]` with zero differential, `x1` in bidegree `(2, 2)` and `x2` in
/// `(6, 6)`.
pub fn two_even_generators(field: Field, bound: usize) -> Result<DgAlgebra> {
    let mut a = DgAlgebra::new(TruncatedBase::residue_field(field, bound));
    a.declare_variable("x1", 2, 2, VariableKind::Polynomial, DgElement::zero(1, 2))?;
    a.declare_variable("x2", 6, 6, VariableKind::Polynomial, DgElement::zero(5, 6))?;
    Ok(a)
}

/// `K(t; k[t]/(t^3))`, whose `H_0` is `k`.
pub fn koszul_over_ring(field: Field, bound: usize) -> Result<DgAlgebra> {
    let r = ring(field, &["t"], &["t^3"], bound)?;
    let t = r.parse_element("t", 0, 1)?;
    let mut a = r;
    a.adjoin("e", VariableKind::Exterior, t)?;
    Ok(a)
}
