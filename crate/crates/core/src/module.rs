//! Finite graded modules over the homological-degree-0 part of a base,
//! given by generators, relations and an optional differential.
//!
//! Elements of positive homological degree in the base act by zero.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use crate::base::{add_term, TruncatedBase};
use crate::error::{Error, Result};
use crate::expr;
use crate::linear::{ExactMatrix, Field, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleGenerator {
    pub name: String,
    pub hdeg: usize,
    pub intdeg: usize,
}

/// An element of the free module on the generators: (generator, base basis
/// index) -> coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeElement {
    pub hdeg: usize,
    pub intdeg: usize,
    pub terms: BTreeMap<(usize, usize), Scalar>,
}

impl FreeElement {
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
}

#[derive(Clone, Debug)]
pub struct ModulePresentation {
    base: Arc<TruncatedBase>,
    generators: Vec<ModuleGenerator>,
    relations: Vec<(String, FreeElement)>,
    differentials: Vec<Option<FreeElement>>,
}

impl ModulePresentation {
    pub fn new(base: Arc<TruncatedBase>) -> Self {
        Self {
            base,
            generators: Vec::new(),
            relations: Vec::new(),
            differentials: Vec::new(),
        }
    }

    pub fn base(&self) -> &Arc<TruncatedBase> {
        &self.base
    }

    pub fn generators(&self) -> &[ModuleGenerator] {
        &self.generators
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    pub fn add_generator(&mut self, name: &str, hdeg: usize, intdeg: usize) -> Result<usize> {
        if self.generator_index(name).is_some() || self.base.presentation().variable_index(name).is_some() {
            return Err(Error::DuplicateVariable(name.into()));
        }
        self.generators.push(ModuleGenerator {
            name: name.into(),
            hdeg,
            intdeg,
        });
        self.differentials.push(None);
        Ok(self.generators.len() - 1)
    }

    /// Parses a linear combination of generators with base coefficients;
    /// every term has exactly one generator factor.
    pub fn parse(&self, src: &str) -> Result<FreeElement> {
        let e = expr::parse(src)?;
        let pres = self.base.presentation();
        let field = self.base.field();
        let mut out: Option<FreeElement> = None;
        for t in &e.terms {
            let mut exps = vec![0u32; pres.variables().len()];
            let mut gen = None;
            for f in &t.factors {
                if let Some(k) = pres.variable_index(&f.name) {
                    if pres.variables()[k].hdeg != 0 {
                        return Err(Error::Parse {
                            column: f.column,
                            message: format!("`{}` has positive homological degree and acts by zero", f.name),
                        });
                    }
                    exps[k] += f.exponent;
                } else if let Some(g) = self.generator_index(&f.name) {
                    if gen.is_some() || f.exponent != 1 {
                        return Err(Error::Parse {
                            column: f.column,
                            message: "each term needs exactly one generator".into(),
                        });
                    }
                    gen = Some(g);
                } else {
                    return Err(Error::UnknownVariable(f.name.clone()));
                }
            }
            let Some(g) = gen else {
                if t.coefficient == 0.into() {
                    continue;
                }
                return Err(Error::Parse {
                    column: t.column,
                    message: "each term needs exactly one generator".into(),
                });
            };
            let (_, bj) = pres.bidegree(&exps);
            let (h, j) = (self.generators[g].hdeg, self.generators[g].intdeg + bj);
            let acc = out.get_or_insert_with(|| FreeElement::zero(h, j));
            if (acc.hdeg, acc.intdeg) != (h, j) {
                return Err(Error::NonHomogeneous { relation: src.into() });
            }
            let c = field.from_bigint(&t.coefficient);
            for (b, v) in self.base.normal_form(&exps)? {
                add_term(&mut acc.terms, (g, *b), &v.mul(&c));
            }
        }
        out.ok_or_else(|| Error::Parse {
            column: 1,
            message: "expression has no generator terms".into(),
        })
    }

    pub fn add_relation(&mut self, src: &str) -> Result<()> {
        let r = self.parse(src)?;
        self.relations.push((src.into(), r));
        Ok(())
    }

    pub fn set_differential(&mut self, gen: &str, src: &str) -> Result<()> {
        let g = self
            .generator_index(gen)
            .ok_or_else(|| Error::UnknownVariable(gen.into()))?;
        let (h, j) = (self.generators[g].hdeg, self.generators[g].intdeg);
        if expr::parse(src)?.is_zero() {
            self.differentials[g] = None;
            return Ok(());
        }
        let d = self.parse(src)?;
        if !d.is_zero() && (d.hdeg + 1, d.intdeg) != (h, j) {
            return Err(Error::Bidegree {
                expected_h: h.wrapping_sub(1),
                expected_j: j,
                found_h: d.hdeg,
                found_j: d.intdeg,
            });
        }
        self.differentials[g] = if d.is_zero() { None } else { Some(d) };
        Ok(())
    }
}

/// A presentation materialized degree by degree within the base bound.
#[derive(Debug)]
pub struct FiniteModule {
    pres: ModulePresentation,
    /// Chosen basis monomials `(generator, base index)` per `(hdeg, intdeg)`.
    basis: BTreeMap<(usize, usize), Vec<(usize, usize)>>,
    normal_forms: HashMap<(usize, usize), Vec<(usize, Scalar)>>,
}

impl FiniteModule {
    pub fn new(pres: ModulePresentation) -> Result<Self> {
        let base = pres.base.clone();
        let field = base.field();
        let mut basis = BTreeMap::new();
        let mut normal_forms = HashMap::new();
        let mut keys: Vec<(usize, usize)> = pres
            .generators
            .iter()
            .flat_map(|g| (g.intdeg..=base.bound()).map(move |j| (g.hdeg, j)))
            .collect();
        keys.sort();
        keys.dedup();
        for (h, j) in keys {
            let monos: Vec<(usize, usize)> = pres
                .generators
                .iter()
                .enumerate()
                .filter(|(_, g)| g.hdeg == h && g.intdeg <= j)
                .flat_map(|(k, g)| base.basis_at(0, j - g.intdeg).map(move |b| (k, b)))
                .collect();
            if monos.is_empty() {
                continue;
            }
            let pos: HashMap<(usize, usize), usize> = monos.iter().enumerate().map(|(i, m)| (*m, i)).collect();
            let mut span = Vec::new();
            for (_, r) in &pres.relations {
                if r.hdeg != h || r.intdeg > j {
                    continue;
                }
                for b in base.basis_at(0, j - r.intdeg) {
                    let mut col = vec![field.zero(); monos.len()];
                    for (&(g, rb), c) in &r.terms {
                        for (p, v) in base.multiply_basis(b, rb)? {
                            let i = pos[&(g, *p)];
                            col[i] = col[i].add(&v.mul(c));
                        }
                    }
                    span.push(col);
                }
            }
            let span = ExactMatrix::from_columns(field, monos.len(), &span);
            let chosen = span.cokernel_complement();
            let chosen_cols: Vec<Vec<Scalar>> = chosen
                .iter()
                .map(|&r| {
                    let mut e = vec![field.zero(); monos.len()];
                    e[r] = field.one();
                    e
                })
                .collect();
            let system = span.hstack(&ExactMatrix::from_columns(field, monos.len(), &chosen_cols));
            let rhs: Vec<Vec<Scalar>> = identity_columns(field, monos.len());
            for (u, sol) in system.solve_many(&rhs).into_iter().enumerate() {
                let sol = sol.expect("span plus complement is everything");
                let nf = sol[span.cols()..]
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(k, c)| (k, c.clone()))
                    .collect();
                normal_forms.insert(monos[u], nf);
            }
            if !chosen.is_empty() {
                basis.insert((h, j), chosen.iter().map(|&r| monos[r]).collect());
            }
        }
        let m = Self {
            pres,
            basis,
            normal_forms,
        };
        m.check_differential()?;
        Ok(m)
    }

    /// `k` placed in bidegree `(hdeg, intdeg)`.
    pub fn residue_field(base: Arc<TruncatedBase>, hdeg: usize, intdeg: usize) -> Result<Self> {
        let mut p = ModulePresentation::new(base.clone());
        p.add_generator("g", hdeg, intdeg)?;
        for k in base.degree_zero_variables() {
            let name = &base.variables()[k].name;
            p.add_relation(&format!("{name}*g"))?;
        }
        Self::new(p)
    }

    /// The degree-0 base itself, free of rank one.
    pub fn free(base: Arc<TruncatedBase>) -> Result<Self> {
        let mut p = ModulePresentation::new(base);
        p.add_generator("g", 0, 0)?;
        Self::new(p)
    }

    pub fn presentation(&self) -> &ModulePresentation {
        &self.pres
    }

    pub fn field(&self) -> Field {
        self.pres.base.field()
    }

    pub fn bound(&self) -> usize {
        self.pres.base.bound()
    }

    pub fn dim(&self, h: i64, j: usize) -> usize {
        if h < 0 {
            return 0;
        }
        self.basis.get(&(h as usize, j)).map_or(0, Vec::len)
    }

    /// Largest internal degree of a nonzero component, if the module is
    /// provably finite within the bound.
    pub fn top_degree(&self) -> Option<usize> {
        let top = self.basis.keys().map(|&(_, j)| j).max().unwrap_or(0);
        let width = self
            .pres
            .base
            .degree_zero_variables()
            .iter()
            .map(|&k| self.pres.base.variables()[k].intdeg)
            .max()
            .unwrap_or(1);
        let max_gen = self.pres.generators.iter().map(|g| g.intdeg).max().unwrap_or(0);
        (top.max(max_gen) + width <= self.bound()).then_some(top)
    }

    pub fn max_hdeg(&self) -> usize {
        self.basis.keys().map(|&(h, _)| h).max().unwrap_or(0)
    }

    /// Coordinates of a free-module element in the chosen basis.
    pub fn reduce(&self, e: &FreeElement) -> Vec<Scalar> {
        let mut v = vec![self.field().zero(); self.dim(e.hdeg as i64, e.intdeg)];
        for (m, c) in &e.terms {
            for (k, x) in &self.normal_forms[m] {
                v[*k] = v[*k].add(&x.mul(c));
            }
        }
        v
    }

    /// The basis element `idx` of bidegree `(h, j)` as a free element.
    pub fn basis_element(&self, h: usize, j: usize, idx: usize) -> FreeElement {
        let m = self.basis[&(h, j)][idx];
        let mut e = FreeElement::zero(h, j);
        e.terms.insert(m, self.field().one());
        e
    }

    /// `b * e` for a base element of homological degree 0 given by its
    /// normal-form terms.
    pub fn multiply(&self, b: &crate::base::BaseElement, e: &FreeElement) -> Result<FreeElement> {
        let base = &self.pres.base;
        let mut out = FreeElement::zero(e.hdeg, e.intdeg + b.intdeg);
        if b.hdeg != 0 {
            return Ok(out);
        }
        for (&bi, c) in &b.terms {
            for (&(g, eb), x) in &e.terms {
                for (p, v) in base.multiply_basis(bi, eb)? {
                    add_term(&mut out.terms, (g, *p), &v.mul(c).mul(x));
                }
            }
        }
        Ok(out)
    }

    fn apply_differential(&self, e: &FreeElement) -> Result<FreeElement> {
        let base = &self.pres.base;
        let mut out = FreeElement::zero(e.hdeg.saturating_sub(1), e.intdeg);
        for (&(g, b), c) in &e.terms {
            let Some(dg) = &self.pres.differentials[g] else {
                continue;
            };
            let be = base.basis_element(b);
            let prod = self.multiply(&be, dg)?;
            for (k, v) in prod.terms {
                add_term(&mut out.terms, k, &v.mul(c));
            }
        }
        Ok(out)
    }

    /// `d: M_{h,j} -> M_{h-1,j}`.
    pub fn differential(&self, h: i64, j: usize) -> Result<ExactMatrix> {
        let field = self.field();
        let cols = self.dim(h, j);
        let rows = self.dim(h - 1, j);
        let mut m = ExactMatrix::zero(field, rows, cols);
        if rows == 0 || cols == 0 {
            return Ok(m);
        }
        for c in 0..cols {
            let d = self.apply_differential(&self.basis_element(h as usize, j, c))?;
            for (r, v) in self.reduce(&d).into_iter().enumerate() {
                m.set(r, c, v);
            }
        }
        Ok(m)
    }

    /// Multiplication by a homological-degree-0 base element.
    pub fn action_by(&self, b: &crate::base::BaseElement, h: i64, j: usize) -> Result<ExactMatrix> {
        let field = self.field();
        let cols = self.dim(h, j);
        let rows = if j + b.intdeg <= self.bound() { self.dim(h, j + b.intdeg) } else { 0 };
        let mut m = ExactMatrix::zero(field, rows, cols);
        if rows == 0 || cols == 0 || b.hdeg != 0 {
            return Ok(m);
        }
        for c in 0..cols {
            let p = self.multiply(b, &self.basis_element(h as usize, j, c))?;
            for (r, v) in self.reduce(&p).into_iter().enumerate() {
                m.set(r, c, v);
            }
        }
        Ok(m)
    }

    fn check_differential(&self) -> Result<()> {
        let base = &self.pres.base;
        for (label, r) in &self.pres.relations {
            for j in r.intdeg..=self.bound() {
                for b in base.basis_at(0, j - r.intdeg) {
                    let br = self.multiply(&base.basis_element(b), r)?;
                    let d = self.apply_differential(&br)?;
                    if self.reduce(&d).iter().any(|c| !c.is_zero()) {
                        return Err(Error::NotAChainMap(format!(
                            "the differential does not preserve relation `{label}`"
                        )));
                    }
                }
            }
        }
        for &(h, j) in self.basis.keys() {
            if h < 2 {
                continue;
            }
            let d1 = self.differential(h as i64, j)?;
            let d2 = self.differential(h as i64 - 1, j)?;
            if !d2.mul(&d1).is_zero() {
                return Err(Error::NotAChainMap(format!("d^2 != 0 in bidegree ({h}, {j})")));
            }
        }
        Ok(())
    }
}

fn identity_columns(field: Field, n: usize) -> Vec<Vec<Scalar>> {
    (0..n)
        .map(|u| {
            let mut e = vec![field.zero(); n];
            e[u] = field.one();
            e
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::{truncate_quotient, BasePresentation};

    fn base(vars: &[(&str, usize)], rels: &[&str], bound: usize) -> Arc<TruncatedBase> {
        let mut p = BasePresentation::polynomial_ring(Field::Rational, vars).unwrap();
        for r in rels {
            p.add_relation(r).unwrap();
        }
        Arc::new(truncate_quotient(&p, bound))
    }

    #[test]
    fn residue_field_and_free() {
        let b = base(&[("x", 1), ("y", 1)], &["x^2", "x*y"], 4);
        let k = FiniteModule::residue_field(b.clone(), 0, 0).unwrap();
        assert_eq!(k.dim(0, 0), 1);
        assert_eq!(k.dim(0, 1), 0);
        assert_eq!(k.top_degree(), Some(0));
        let f = FiniteModule::free(b).unwrap();
        assert_eq!((0..=4).map(|j| f.dim(0, j)).collect::<Vec<_>>(), vec![1, 2, 1, 1, 1]);
        assert_eq!(f.top_degree(), None);
    }

    #[test]
    fn maximal_ideal_of_dual_numbers() {
        let b = base(&[("x", 1)], &["x^2"], 6);
        let mut p = ModulePresentation::new(b);
        p.add_generator("g", 0, 1).unwrap();
        p.add_relation("x*g").unwrap();
        let m = FiniteModule::new(p).unwrap();
        assert_eq!(m.dim(0, 1), 1);
        assert_eq!(m.dim(0, 2), 0);
    }

    #[test]
    fn complexes_are_checked() {
        let b = base(&[("x", 1)], &[], 4);
        let mut p = ModulePresentation::new(b.clone());
        p.add_generator("u", 1, 1).unwrap();
        p.add_generator("v", 0, 0).unwrap();
        p.set_differential("u", "x*v").unwrap();
        p.add_relation("x^2*v").unwrap();
        // x*u is not killed but d(x*u) = x^2 v = 0: fine.
        let m = FiniteModule::new(p).unwrap();
        let d = m.differential(1, 1).unwrap();
        assert_eq!(d.rank(), 1);

        let mut q = ModulePresentation::new(b);
        q.add_generator("u", 1, 1).unwrap();
        q.add_generator("v", 0, 0).unwrap();
        q.set_differential("u", "x*v").unwrap();
        q.add_relation("x*u").unwrap();
        assert!(matches!(FiniteModule::new(q), Err(Error::NotAChainMap(_))));
    }

    #[test]
    fn parse_errors() {
        let b = base(&[("x", 1)], &[], 4);
        let mut p = ModulePresentation::new(b);
        p.add_generator("g", 0, 0).unwrap();
        p.add_generator("h", 0, 1).unwrap();
        assert!(p.parse("x").is_err());
        assert!(p.parse("g*h").is_err());
        assert!(matches!(p.parse("x*g + x*h"), Err(Error::NonHomogeneous { .. })));
        assert!(p.parse("x*g - h").is_ok());
    }
}
