use std::collections::BTreeMap;

use crate::base::add_term;
use crate::dg::Monomial;
use crate::linear::Scalar;

/// A bihomogeneous element: a combination of (base basis index, monomial)
/// pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DgElement {
    pub hdeg: usize,
    pub intdeg: usize,
    pub terms: BTreeMap<(usize, Monomial), Scalar>,
}

impl DgElement {
    pub fn zero(hdeg: usize, intdeg: usize) -> Self {
        Self {
            hdeg,
            intdeg,
            terms: BTreeMap::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn bidegree(&self) -> (usize, usize) {
        (self.hdeg, self.intdeg)
    }

    pub fn add_term(&mut self, base: usize, m: Monomial, c: &Scalar) {
        debug_assert!(m.check());
        add_term(&mut self.terms, (base, m), c);
    }

    /// Adds `c * other`.
    pub fn add_scaled(&mut self, other: &DgElement, c: &Scalar) {
        if other.is_zero() || c.is_zero() {
            return;
        }
        if self.is_zero() {
            self.hdeg = other.hdeg;
            self.intdeg = other.intdeg;
        }
        assert_eq!(
            self.bidegree(),
            other.bidegree(),
            "adding elements of different bidegrees"
        );
        for (k, v) in &other.terms {
            add_term(&mut self.terms, k.clone(), &v.mul(c));
        }
    }

    pub fn add(&self, other: &DgElement) -> DgElement {
        let mut out = self.clone();
        if let Some(one) = other.terms.values().next().map(|c| c.field().one()) {
            out.add_scaled(other, &one);
        }
        out
    }

    pub fn sub(&self, other: &DgElement) -> DgElement {
        let mut out = self.clone();
        if let Some(m1) = other.terms.values().next().map(|c| c.field().one().neg()) {
            out.add_scaled(other, &m1);
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> DgElement {
        if c.is_zero() {
            return DgElement::zero(self.hdeg, self.intdeg);
        }
        DgElement {
            hdeg: self.hdeg,
            intdeg: self.intdeg,
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v.mul(c))).collect(),
        }
    }

    pub fn neg(&self) -> DgElement {
        DgElement {
            hdeg: self.hdeg,
            intdeg: self.intdeg,
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v.neg())).collect(),
        }
    }
}
