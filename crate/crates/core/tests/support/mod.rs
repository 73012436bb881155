#![allow(dead_code)]

pub mod oracle;

use proptest::prelude::*;
use proptest::sample::Index;

use semifree::dg::{DgAlgebra, DgElement};
use semifree::fixtures;
use semifree::linear::Field;
use semifree::model::acyclic_closure;

/// Algebras for the structure laws: the test fixtures themselves and the
/// acyclic closures of the rings, which carry divided-power variables.
pub fn law_fixtures(field: Field, bound: usize) -> Vec<(String, DgAlgebra)> {
    let mut out = Vec::new();
    for (name, r) in fixtures::ring_fixtures(field, bound).unwrap() {
        out.push((format!("closure of {name}"), acyclic_closure(&r, 5).unwrap().algebra().clone()));
        out.push((name.to_string(), r));
    }
    out.push(("D(2,2)".into(), fixtures::koszul_on_power(field, 2, 2, bound).unwrap()));
    out.push(("k[x1,x2]".into(), fixtures::two_even_generators(field, bound).unwrap()));
    out.push(("K(t;k[t]/(t^3))".into(), fixtures::koszul_over_ring(field, bound).unwrap()));
    let b = fixtures::truncated_power(field, 2, 2, bound).unwrap();
    out.push(("closure of B(2,2)".into(), acyclic_closure(&b, 6).unwrap().algebra().clone()));
    out
}

/// Bidegrees up to `(max_h, max_j)` with a nonzero component.
pub fn nonempty_bidegrees(a: &DgAlgebra, max_h: usize, max_j: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for h in 0..=max_h {
        for j in 0..=max_j {
            if !a.basis_of_bidegree(h, j).unwrap().is_empty() {
                out.push((h, j));
            }
        }
    }
    out
}

/// Raw material for one random homogeneous element.
#[derive(Clone, Debug)]
pub struct ElementSeed {
    pub degree: Index,
    pub terms: Vec<(Index, i64)>,
}

pub fn element_seed() -> impl Strategy<Value = ElementSeed> {
    (any::<Index>(), prop::collection::vec((any::<Index>(), -4i64..=4), 1..6))
        .prop_map(|(degree, terms)| ElementSeed { degree, terms })
}

pub fn build_element(a: &DgAlgebra, degrees: &[(usize, usize)], seed: &ElementSeed) -> DgElement {
    let (h, j) = degrees[seed.degree.index(degrees.len())];
    let basis = a.basis_of_bidegree(h, j).unwrap();
    let mut e = DgElement::zero(h, j);
    for (idx, c) in &seed.terms {
        let (b, m) = &basis[idx.index(basis.len())];
        e.add_scaled(&a.term(*b, m.clone(), a.field().one()), &a.field().from_i64(*c));
    }
    e
}

/// `(-1)^n` in the field of `a`.
pub fn sign(a: &DgAlgebra, n: usize) -> semifree::linear::Scalar {
    a.field().from_i64(if n.is_multiple_of(2) { 1 } else { -1 })
}
