use std::sync::{Arc, OnceLock};

use crate::base::TruncatedBase;
use crate::dg::{DgAlgebra, DgElement, Monomial, VariableKind};
use crate::error::{Error, Result};

/// A multiplicative map of dg-algebras, given on base and dg variables.
#[derive(Clone, Debug)]
pub struct DgMorphism {
    source: DgAlgebra,
    target: Arc<DgAlgebra>,
    base_images: Vec<DgElement>,
    var_images: Vec<DgElement>,
    base_cache: Vec<OnceLock<DgElement>>,
}

fn check_bidegree(e: &DgElement, h: usize, j: usize) -> Result<DgElement> {
    if e.is_zero() {
        return Ok(DgElement::zero(h, j));
    }
    if e.bidegree() != (h, j) {
        return Err(Error::Bidegree {
            expected_h: h,
            expected_j: j,
            found_h: e.hdeg,
            found_j: e.intdeg,
        });
    }
    Ok(e.clone())
}

impl DgMorphism {
    pub fn new(
        source: DgAlgebra,
        target: Arc<DgAlgebra>,
        base_images: Vec<DgElement>,
        var_images: Vec<DgElement>,
    ) -> Result<Self> {
        if source.field() != target.field() {
            return Err(Error::NotAChainMap("source and target fields differ".into()));
        }
        let bvars = source.base().variables();
        if base_images.len() != bvars.len() || var_images.len() != source.variables().len() {
            return Err(Error::NotAChainMap("wrong number of images".into()));
        }
        let base_images = base_images
            .iter()
            .zip(bvars)
            .map(|(e, v)| check_bidegree(e, v.hdeg, v.intdeg))
            .collect::<Result<Vec<_>>>()?;
        let var_images = var_images
            .iter()
            .zip(source.variables())
            .map(|(e, v)| check_bidegree(e, v.hdeg, v.intdeg))
            .collect::<Result<Vec<_>>>()?;
        let base_cache = (0..source.base().len()).map(|_| OnceLock::new()).collect();
        Ok(Self {
            source,
            target,
            base_images,
            var_images,
            base_cache,
        })
    }

    /// `A -> k`, killing every variable of positive degree.
    pub fn augmentation(source: DgAlgebra) -> Result<Self> {
        let k = DgAlgebra::new(TruncatedBase::residue_field(source.field(), source.bound()));
        let base_images = source
            .base()
            .variables()
            .iter()
            .map(|v| DgElement::zero(v.hdeg, v.intdeg))
            .collect();
        let var_images = source
            .variables()
            .iter()
            .map(|v| DgElement::zero(v.hdeg, v.intdeg))
            .collect();
        Self::new(source, Arc::new(k), base_images, var_images)
    }

    /// `k -> B`.
    pub fn unit(target: Arc<DgAlgebra>) -> Result<Self> {
        let k = DgAlgebra::new(TruncatedBase::residue_field(target.field(), target.bound()));
        Self::new(k, target, Vec::new(), Vec::new())
    }

    /// `S -> A` from the polynomial ring on the homological-degree-0 base
    /// variables of `A`.
    pub fn cover(target: Arc<DgAlgebra>) -> Result<Self> {
        let base = target.base().clone();
        let pres = base.presentation().cover();
        let s = DgAlgebra::new(Arc::new(crate::base::truncate_quotient(&pres, base.bound())));
        let base_images = base
            .degree_zero_variables()
            .into_iter()
            .map(|k| Ok(target.from_base(&base.variable(k)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(s, target, base_images, Vec::new())
    }

    pub fn identity(a: Arc<DgAlgebra>) -> Result<Self> {
        let base = a.base().clone();
        let base_images = (0..base.variables().len())
            .map(|k| Ok(a.from_base(&base.variable(k)?)))
            .collect::<Result<Vec<_>>>()?;
        let var_images = (0..a.variables().len()).map(|v| a.generator(v)).collect();
        Self::new((*a).clone(), a, base_images, var_images)
    }

    pub fn source(&self) -> &DgAlgebra {
        &self.source
    }

    pub fn target(&self) -> &Arc<DgAlgebra> {
        &self.target
    }

    pub fn var_image(&self, v: usize) -> &DgElement {
        &self.var_images[v]
    }

    pub fn base_image(&self, k: usize) -> &DgElement {
        &self.base_images[k]
    }

    fn power(&self, x: &DgElement, e: u32) -> Result<DgElement> {
        let mut acc = self.target.one();
        for _ in 0..e {
            acc = self.target.multiply(&acc, x)?;
        }
        Ok(acc)
    }

    fn base_basis_image(&self, idx: usize) -> Result<DgElement> {
        if let Some(e) = self.base_cache[idx].get() {
            return Ok(e.clone());
        }
        let exps = self.source.base().monomial(idx).exponents.clone();
        let mut acc = self.target.one();
        for (k, &e) in exps.iter().enumerate() {
            if e > 0 {
                acc = self.target.multiply(&acc, &self.power(&self.base_images[k], e)?)?;
            }
        }
        Ok(self.base_cache[idx].get_or_init(|| acc).clone())
    }

    /// Image of `y^(e)` for a divided-power variable `y`.
    fn divided_power_image(&self, v: usize, e: u32) -> Result<DgElement> {
        let img = &self.var_images[v];
        let (h, j) = (img.hdeg * e as usize, img.intdeg * e as usize);
        if e == 1 {
            return Ok(img.clone());
        }
        if img.is_zero() {
            return Ok(DgElement::zero(h, j));
        }
        let field = self.target.field();
        if img.terms.len() == 1 {
            let ((b, m), c) = img.terms.iter().next().expect("one term");
            if let (0, Some(w)) = (*b, m.as_variable()) {
                if self.target.variable(w as usize).kind == VariableKind::DividedPower {
                    return Ok(self.target.term(0, Monomial::even_var(w, e), c.pow(e)));
                }
            }
        }
        let p = field.characteristic();
        if p == 0 || (e as u64) < p {
            let mut fact = field.one();
            for n in 2..=e as i64 {
                fact = fact.mul(&field.from_i64(n));
            }
            let inv = fact.inv().expect("e! is invertible below the characteristic");
            return Ok(self.power(img, e)?.scale(&inv));
        }
        Err(Error::Unsupported(format!(
            "divided power {e} of the image of `{}` in characteristic {p}",
            self.source.variable(v).name
        )))
    }

    pub fn apply_monomial(&self, m: &Monomial) -> Result<DgElement> {
        let mut acc = self.target.one();
        for &(v, e) in &m.even {
            let v = v as usize;
            let factor = match self.source.variable(v).kind {
                VariableKind::DividedPower => self.divided_power_image(v, e)?,
                _ => self.power(&self.var_images[v], e)?,
            };
            acc = self.target.multiply(&acc, &factor)?;
        }
        for &v in &m.odd {
            acc = self.target.multiply(&acc, &self.var_images[v as usize])?;
        }
        Ok(acc)
    }

    pub fn apply(&self, u: &DgElement) -> Result<DgElement> {
        let mut out = DgElement::zero(u.hdeg, u.intdeg);
        for ((b, m), c) in &u.terms {
            let img = self
                .target
                .multiply(&self.base_basis_image(*b)?, &self.apply_monomial(m)?)?;
            out.add_scaled(&img, c);
        }
        Ok(out)
    }

    /// Adjoins a variable to the source killing `boundary`, sent to `image`.
    pub fn push_variable(
        &mut self,
        name: &str,
        kind: VariableKind,
        boundary: DgElement,
        image: DgElement,
    ) -> Result<usize> {
        let (h, j) = (boundary.hdeg + 1, boundary.intdeg);
        let image = check_bidegree(&image, h, j)?;
        if self.target.differential(&image)? != self.apply(&boundary)? {
            return Err(Error::NotAChainMap(format!("image of `{name}`")));
        }
        let v = self.source.adjoin(name, kind, boundary)?;
        self.var_images.push(image);
        Ok(v)
    }

    /// Checks that relations map to zero and that the map commutes with the
    /// differentials on every variable.
    pub fn check_chain_map(&self) -> Result<()> {
        let bound = self.source.bound().min(self.target.bound());
        let pres = self.source.base().presentation();
        for (label, g) in pres.relations() {
            let Some(first) = g.terms.keys().next() else {
                continue;
            };
            let (h, j) = pres.bidegree(first);
            if j > bound {
                continue;
            }
            let mut acc = DgElement::zero(h, j);
            for (exps, c) in &g.terms {
                let mut t = self.target.one();
                for (k, &e) in exps.iter().enumerate() {
                    if e > 0 {
                        t = self.target.multiply(&t, &self.power(&self.base_images[k], e)?)?;
                    }
                }
                acc.add_scaled(&t, c);
            }
            if !acc.is_zero() {
                return Err(Error::NotAChainMap(format!("relation `{label}` is not sent to zero")));
            }
        }
        for (v, var) in self.source.variables().iter().enumerate() {
            let lhs = self.target.differential(&self.var_images[v])?;
            let rhs = self.apply(&var.boundary)?;
            if lhs != rhs {
                return Err(Error::NotAChainMap(format!("variable `{}`", var.name)));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::{truncate_quotient, BasePresentation};
    use crate::linear::Field;

    fn dual_numbers() -> Arc<DgAlgebra> {
        let mut p = BasePresentation::polynomial_ring(Field::Rational, &[("x", 1)]).unwrap();
        p.add_relation("x^2").unwrap();
        Arc::new(DgAlgebra::new(Arc::new(truncate_quotient(&p, 6))))
    }

    #[test]
    fn standard_maps_are_chain_maps() {
        let a = dual_numbers();
        DgMorphism::augmentation((*a).clone()).unwrap().check_chain_map().unwrap();
        DgMorphism::unit(a.clone()).unwrap().check_chain_map().unwrap();
        DgMorphism::cover(a.clone()).unwrap().check_chain_map().unwrap();
        DgMorphism::identity(a).unwrap().check_chain_map().unwrap();
    }

    #[test]
    fn cover_applies_through_relations() {
        let a = dual_numbers();
        let f = DgMorphism::cover(a.clone()).unwrap();
        let s = f.source();
        let x2 = s.parse_element("x^2", 0, 2).unwrap();
        assert!(!x2.is_zero());
        assert!(f.apply(&x2).unwrap().is_zero());
    }

    #[test]
    fn push_variable_checks_compatibility() {
        let a = dual_numbers();
        let mut f = DgMorphism::augmentation((*a).clone()).unwrap();
        let x = a.parse_element("x", 0, 1).unwrap();
        f.push_variable("e", VariableKind::Exterior, x, DgElement::zero(1, 1))
            .unwrap();
        f.check_chain_map().unwrap();

        let mut g = DgMorphism::identity(a.clone()).unwrap();
        let x = a.parse_element("x", 0, 1).unwrap();
        assert!(g
            .push_variable("e", VariableKind::Exterior, x, DgElement::zero(1, 1))
            .is_err());
    }

    #[test]
    fn divided_power_images() {
        let mut t = DgAlgebra::new(TruncatedBase::residue_field(Field::prime(2).unwrap(), 12));
        t.declare_variable("w", 2, 2, VariableKind::DividedPower, DgElement::zero(1, 2))
            .unwrap();
        let t = Arc::new(t);
        let mut s = DgAlgebra::new(TruncatedBase::residue_field(t.field(), 12));
        s.declare_variable("y", 2, 2, VariableKind::DividedPower, DgElement::zero(1, 2))
            .unwrap();
        let f = DgMorphism::new(s.clone(), t.clone(), vec![], vec![t.generator(0)]).unwrap();
        let y3 = s.parse_element("y^3", 6, 6).unwrap();
        assert_eq!(f.apply(&y3).unwrap(), t.parse_element("w^3", 6, 6).unwrap());
    }
}
