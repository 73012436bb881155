//! Connected graded quotient rings `k[x_1..x_n]/I`, materialized degree by
//! degree up to an internal-degree bound.
//!
//! No Groebner bases are involved: in every bidegree the relation ideal is the
//! span of `m * g` for monomials `m` and relations `g`, and a normal-form basis
//! is the greedy complement of that span among the monomials of the degree.
//!
//! Variables may carry an even homological degree. With all homological
//! degrees zero this is an ordinary graded ring; positive ones give graded
//! algebras with trivial differential such as `k[x]/(x^m)` with `|x| = d`.

use std::collections::{BTreeMap, HashMap};
use std::ops::Range;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::expr;
use crate::linear::{EchelonBasis, ExactMatrix, Field, Scalar};

pub type Exponents = Vec<u32>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseVariable {
    pub name: String,
    pub intdeg: usize,
    pub hdeg: usize,
}

/// A commutative polynomial in the base variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    pub terms: BTreeMap<Exponents, Scalar>,
}

impl Polynomial {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct BasePresentation {
    field: Field,
    variables: Vec<BaseVariable>,
    relations: Vec<(String, Polynomial)>,
}

impl BasePresentation {
    pub fn new(field: Field) -> Self {
        Self {
            field,
            variables: Vec::new(),
            relations: Vec::new(),
        }
    }

    /// Polynomial ring on the given `(name, internal degree)` pairs.
    pub fn polynomial_ring(field: Field, vars: &[(&str, usize)]) -> Result<Self> {
        let mut p = Self::new(field);
        for &(name, deg) in vars {
            p.add_variable(name, deg)?;
        }
        Ok(p)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn variables(&self) -> &[BaseVariable] {
        &self.variables
    }

    pub fn relations(&self) -> impl Iterator<Item = (&str, &Polynomial)> {
        self.relations.iter().map(|(s, p)| (s.as_str(), p))
    }

    pub fn variable_index(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v.name == name)
    }

    pub fn add_variable(&mut self, name: &str, intdeg: usize) -> Result<usize> {
        self.add_graded_variable(name, 0, intdeg)
    }

    /// Adds a variable of even homological degree `hdeg`.
    pub fn add_graded_variable(&mut self, name: &str, hdeg: usize, intdeg: usize) -> Result<usize> {
        if self.variable_index(name).is_some() {
            return Err(Error::DuplicateVariable(name.to_string()));
        }
        if intdeg == 0 {
            return Err(Error::InvalidVariable {
                name: name.into(),
                reason: "internal degree must be at least 1".into(),
            });
        }
        if hdeg % 2 == 1 {
            return Err(Error::InvalidVariable {
                name: name.into(),
                reason: "base variables must have even homological degree".into(),
            });
        }
        if !self.relations.is_empty() {
            return Err(Error::InvalidVariable {
                name: name.into(),
                reason: "variables must be declared before relations".into(),
            });
        }
        self.variables.push(BaseVariable {
            name: name.to_string(),
            intdeg,
            hdeg,
        });
        Ok(self.variables.len() - 1)
    }

    /// Parses a polynomial in the base variables.
    pub fn parse_polynomial(&self, src: &str) -> Result<Polynomial> {
        let e = expr::parse(src)?;
        let mut terms: BTreeMap<Exponents, Scalar> = BTreeMap::new();
        for t in &e.terms {
            let mut exps = vec![0u32; self.variables.len()];
            for f in &t.factors {
                let k = self
                    .variable_index(&f.name)
                    .ok_or_else(|| Error::UnknownVariable(f.name.clone()))?;
                exps[k] += f.exponent;
            }
            let c = self.field.from_bigint(&t.coefficient);
            let entry = terms.entry(exps).or_insert_with(|| self.field.zero());
            *entry = entry.add(&c);
        }
        terms.retain(|_, v| !v.is_zero());
        Ok(Polynomial { terms })
    }

    pub fn bidegree(&self, exps: &[u32]) -> (usize, usize) {
        exps.iter()
            .zip(&self.variables)
            .fold((0, 0), |(h, j), (&e, v)| (h + e as usize * v.hdeg, j + e as usize * v.intdeg))
    }

    /// Adds a relation given as text; it must be homogeneous of internal
    /// degree at least 2.
    pub fn add_relation(&mut self, src: &str) -> Result<()> {
        let p = self.parse_polynomial(src)?;
        self.add_relation_polynomial(src, p)
    }

    pub fn add_relation_polynomial(&mut self, label: &str, p: Polynomial) -> Result<()> {
        let mut degrees = p.terms.keys().map(|e| self.bidegree(e));
        if let Some(first) = degrees.next() {
            if degrees.any(|d| d != first) {
                return Err(Error::NonHomogeneous {
                    relation: label.to_string(),
                });
            }
            if first.1 < 2 {
                return Err(Error::RelationDegree {
                    relation: label.to_string(),
                    degree: first.1,
                });
            }
        }
        self.relations.push((label.to_string(), p));
        Ok(())
    }

    /// The polynomial ring on the homological-degree-0 variables, with no
    /// relations: the tautological regular cover of the degree-0 part.
    pub fn cover(&self) -> BasePresentation {
        let mut p = BasePresentation::new(self.field);
        for v in self.variables.iter().filter(|v| v.hdeg == 0) {
            p.variables.push(v.clone());
        }
        p
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseMonomial {
    pub exponents: Exponents,
    pub hdeg: usize,
    pub intdeg: usize,
}

/// A homogeneous element of the base, as a sparse combination of basis
/// indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseElement {
    pub hdeg: usize,
    pub intdeg: usize,
    pub terms: BTreeMap<usize, Scalar>,
}

impl BaseElement {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

/// `R = k[x]/I` materialized in internal degrees `0..=bound`.
#[derive(Debug)]
pub struct TruncatedBase {
    presentation: BasePresentation,
    bound: usize,
    basis: Vec<BaseMonomial>,
    index: HashMap<Exponents, usize>,
    ranges: BTreeMap<(usize, usize), Range<usize>>,
    normal_forms: HashMap<Exponents, Vec<(usize, Scalar)>>,
}

impl TruncatedBase {
    /// The field itself, as a base with no variables.
    pub fn residue_field(field: Field, bound: usize) -> Arc<TruncatedBase> {
        Arc::new(truncate_quotient(&BasePresentation::new(field), bound))
    }

    pub fn presentation(&self) -> &BasePresentation {
        &self.presentation
    }

    pub fn field(&self) -> Field {
        self.presentation.field
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn variables(&self) -> &[BaseVariable] {
        &self.presentation.variables
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn monomial(&self, idx: usize) -> &BaseMonomial {
        &self.basis[idx]
    }

    pub fn index_of(&self, exps: &[u32]) -> Option<usize> {
        self.index.get(exps).copied()
    }

    /// Basis indices of bidegree `(hdeg, intdeg)`, in basis order.
    pub fn basis_at(&self, hdeg: usize, intdeg: usize) -> Range<usize> {
        self.ranges.get(&(intdeg, hdeg)).cloned().unwrap_or(0..0)
    }

    /// Nonempty homological degrees present in internal degree `intdeg`.
    pub fn hdegs_at(&self, intdeg: usize) -> Vec<usize> {
        self.ranges
            .range((intdeg, 0)..(intdeg + 1, 0))
            .map(|(&(_, h), _)| h)
            .collect()
    }

    /// `dim R_j` for the homological-degree-0 part.
    pub fn dim(&self, intdeg: usize) -> usize {
        self.basis_at(0, intdeg).len()
    }

    pub fn dims(&self) -> Vec<usize> {
        (0..=self.bound).map(|j| self.dim(j)).collect()
    }

    fn check_bound(&self, intdeg: usize) -> Result<()> {
        if intdeg > self.bound {
            return Err(Error::BoundExceeded {
                requested: intdeg,
                bound: self.bound,
            });
        }
        Ok(())
    }

    /// Normal form of an arbitrary monomial.
    pub fn normal_form(&self, exps: &[u32]) -> Result<&[(usize, Scalar)]> {
        let (_, j) = self.presentation.bidegree(exps);
        self.check_bound(j)?;
        Ok(self
            .normal_forms
            .get(exps)
            .expect("every monomial within the bound has a normal form"))
    }

    pub fn multiply_basis(&self, a: usize, b: usize) -> Result<&[(usize, Scalar)]> {
        let exps: Exponents = self.basis[a]
            .exponents
            .iter()
            .zip(&self.basis[b].exponents)
            .map(|(x, y)| x + y)
            .collect();
        self.normal_form(&exps)
    }

    pub fn one(&self) -> BaseElement {
        self.basis_element(0)
    }

    pub fn basis_element(&self, idx: usize) -> BaseElement {
        let m = &self.basis[idx];
        BaseElement {
            hdeg: m.hdeg,
            intdeg: m.intdeg,
            terms: BTreeMap::from([(idx, self.field().one())]),
        }
    }

    /// The class of the `k`-th variable.
    pub fn variable(&self, k: usize) -> Result<BaseElement> {
        let mut exps = vec![0; self.variables().len()];
        exps[k] = 1;
        self.element_of_monomial(&exps)
    }

    pub fn element_of_monomial(&self, exps: &[u32]) -> Result<BaseElement> {
        let (hdeg, intdeg) = self.presentation.bidegree(exps);
        let nf = self.normal_form(exps)?;
        Ok(BaseElement {
            hdeg,
            intdeg,
            terms: nf.iter().cloned().collect(),
        })
    }

    pub fn element_of_polynomial(&self, p: &Polynomial) -> Result<Option<BaseElement>> {
        let mut out: Option<BaseElement> = None;
        for (exps, c) in &p.terms {
            let (hdeg, intdeg) = self.presentation.bidegree(exps);
            let acc = out.get_or_insert_with(|| BaseElement {
                hdeg,
                intdeg,
                terms: BTreeMap::new(),
            });
            for (idx, v) in self.normal_form(exps)? {
                add_term(&mut acc.terms, *idx, &v.mul(c));
            }
        }
        Ok(out)
    }

    pub fn multiply(&self, a: &BaseElement, b: &BaseElement) -> Result<BaseElement> {
        self.check_bound(a.intdeg + b.intdeg)?;
        let mut terms = BTreeMap::new();
        for (&i, x) in &a.terms {
            for (&k, y) in &b.terms {
                let xy = x.mul(y);
                for (idx, v) in self.multiply_basis(i, k)? {
                    add_term(&mut terms, *idx, &v.mul(&xy));
                }
            }
        }
        Ok(BaseElement {
            hdeg: a.hdeg + b.hdeg,
            intdeg: a.intdeg + b.intdeg,
            terms,
        })
    }

    /// Basis of the degree-`j` part of the maximal ideal of the
    /// homological-degree-0 subring; with a connected grading this is the
    /// whole degree-`j` basis.
    pub fn maximal_ideal_basis(&self, j: usize) -> Result<Range<usize>> {
        if j == 0 {
            return Err(Error::Unsupported(
                "the maximal ideal has no degree-0 part".into(),
            ));
        }
        self.check_bound(j)?;
        Ok(self.basis_at(0, j))
    }

    /// Indices of the variables of homological degree 0 (the generators of
    /// the maximal ideal of the degree-0 subring).
    pub fn degree_zero_variables(&self) -> Vec<usize> {
        (0..self.variables().len())
            .filter(|&k| self.variables()[k].hdeg == 0)
            .collect()
    }

    /// Largest internal degree with a nonzero homological-degree-0 component,
    /// if that part is provably finite within the bound.
    pub fn top_degree(&self) -> Option<usize> {
        let gens = self.degree_zero_variables();
        let width = gens
            .iter()
            .map(|&k| self.variables()[k].intdeg)
            .max()
            .unwrap_or(1);
        let mut last_nonzero = 0;
        for j in 0..=self.bound {
            if self.dim(j) > 0 {
                last_nonzero = j;
            } else if j >= last_nonzero + width {
                return Some(last_nonzero);
            }
        }
        None
    }

    /// Largest `ceil(intdeg / hdeg)` over variables of positive homological
    /// degree (0 if there are none).
    pub fn positive_slope(&self) -> usize {
        self.variables()
            .iter()
            .filter(|v| v.hdeg > 0)
            .map(|v| v.intdeg.div_ceil(v.hdeg))
            .max()
            .unwrap_or(0)
    }

    /// Per internal degree, `dim (m / m^2)_j` for the homological-degree-0
    /// part, optionally also modulo extra elements (given as degree-0 base
    /// elements).
    pub fn embedding_dimension_by_degree(&self, extra: &[BaseElement]) -> Result<Vec<usize>> {
        let field = self.field();
        let gens = self.degree_zero_variables();
        let mut out = vec![0; self.bound + 1];
        for (j, slot) in out.iter_mut().enumerate().skip(1) {
            let range = self.basis_at(0, j);
            let dim = range.len();
            if dim == 0 {
                continue;
            }
            let mut ech = EchelonBasis::new(field, dim);
            for &k in &gens {
                let dk = self.variables()[k].intdeg;
                if dk >= j {
                    continue;
                }
                let xk = self.variable(k)?;
                for idx in self.basis_at(0, j - dk) {
                    let prod = self.multiply(&xk, &self.basis_element(idx))?;
                    ech.insert(dense(&prod, range.clone(), field));
                }
            }
            for e in extra.iter().filter(|e| e.hdeg == 0 && e.intdeg == j) {
                ech.insert(dense(e, range.clone(), field));
            }
            *slot = dim - ech.rank();
        }
        Ok(out)
    }
}

fn dense(e: &BaseElement, range: Range<usize>, field: Field) -> Vec<Scalar> {
    let mut v = vec![field.zero(); range.len()];
    for (&idx, c) in &e.terms {
        v[idx - range.start] = c.clone();
    }
    v
}

pub(crate) fn add_term<K: Ord>(terms: &mut BTreeMap<K, Scalar>, key: K, v: &Scalar) {
    if v.is_zero() {
        return;
    }
    match terms.entry(key) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(v.clone());
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            let s = e.get().add(v);
            if s.is_zero() {
                e.remove();
            } else {
                *e.get_mut() = s;
            }
        }
    }
}

/// All exponent vectors of internal degree exactly `j`, in descending
/// lexicographic order.
fn monomials_of_degree(vars: &[BaseVariable], j: usize) -> Vec<Exponents> {
    fn rec(vars: &[BaseVariable], k: usize, left: usize, cur: &mut Exponents, out: &mut Vec<Exponents>) {
        if k == vars.len() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let d = vars[k].intdeg;
        let max = left / d;
        for e in (0..=max).rev() {
            cur[k] = e as u32;
            rec(vars, k + 1, left - e * d, cur, out);
        }
        cur[k] = 0;
    }
    let mut out = Vec::new();
    let mut cur = vec![0; vars.len()];
    rec(vars, 0, j, &mut cur, &mut out);
    out
}

/// Materializes `P` in internal degrees `0..=bound`.
pub fn truncate_quotient(p: &BasePresentation, bound: usize) -> TruncatedBase {
    let field = p.field;
    let mut basis = Vec::new();
    let mut index = HashMap::new();
    let mut ranges = BTreeMap::new();
    let mut normal_forms = HashMap::new();

    // Monomials grouped by (intdeg, hdeg).
    let mut by_degree: BTreeMap<(usize, usize), Vec<Exponents>> = BTreeMap::new();
    for j in 0..=bound {
        for m in monomials_of_degree(&p.variables, j) {
            let (h, _) = p.bidegree(&m);
            by_degree.entry((j, h)).or_default().push(m);
        }
    }

    for (&(j, h), monos) in &by_degree {
        let pos: HashMap<&Exponents, usize> = monos.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut span = Vec::new();
        for (_, g) in &p.relations {
            let Some(first) = g.terms.keys().next() else {
                continue;
            };
            let (gh, gj) = p.bidegree(first);
            if gj > j || gh > h {
                continue;
            }
            let Some(multipliers) = by_degree.get(&(j - gj, h - gh)) else {
                continue;
            };
            for m in multipliers {
                let mut col = vec![field.zero(); monos.len()];
                for (ge, c) in &g.terms {
                    let prod: Exponents = ge.iter().zip(m).map(|(a, b)| a + b).collect();
                    let r = pos[&prod];
                    col[r] = col[r].add(c);
                }
                span.push(col);
            }
        }
        let span = ExactMatrix::from_columns(field, monos.len(), &span);
        let chosen = span.cokernel_complement();

        let start = basis.len();
        for &r in &chosen {
            index.insert(monos[r].clone(), basis.len());
            basis.push(BaseMonomial {
                exponents: monos[r].clone(),
                hdeg: h,
                intdeg: j,
            });
        }
        ranges.insert((j, h), start..basis.len());

        // Normal forms: write e_u = s + sum c_k e_{chosen_k} with s in the span.
        let mut chosen_cols = Vec::new();
        for &r in &chosen {
            let mut e = vec![field.zero(); monos.len()];
            e[r] = field.one();
            chosen_cols.push(e);
        }
        let system = span.hstack(&ExactMatrix::from_columns(field, monos.len(), &chosen_cols));
        let rhs: Vec<Vec<Scalar>> = (0..monos.len())
            .map(|u| {
                let mut e = vec![field.zero(); monos.len()];
                e[u] = field.one();
                e
            })
            .collect();
        let sols = system.solve_many(&rhs);
        for (u, sol) in sols.into_iter().enumerate() {
            let sol = sol.expect("span plus complement is everything");
            let nf: Vec<(usize, Scalar)> = sol[span.cols()..]
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| (start + k, c.clone()))
                .collect();
            normal_forms.insert(monos[u].clone(), nf);
        }
    }

    TruncatedBase {
        presentation: p.clone(),
        bound,
        basis,
        index,
        ranges,
        normal_forms,
    }
}
