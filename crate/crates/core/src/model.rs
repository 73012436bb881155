//! Minimal models with prescribed switching degree.
//!
//! Stage `i` computes minimal generators `(a, b)` of `H_{i+1}(cone(q_i))`
//! with `q_i: U(i) -> B` and adjoins, for each, a variable `v` of degree
//! `i + 1` with `d v = a` and `q(v) = b`.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::base::TruncatedBase;
use crate::dg::{DgAlgebra, DgElement, DgMorphism, VariableKind};
use crate::error::{Error, Result};
use crate::homology::{homology_dim, minimal_generators, DgComplex, DgCone, SelectionOrder};
use crate::invariants::CountTable;

/// Switching degree: variables below it are polynomial or exterior, variables
/// at or above it are divided-power or exterior.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Switching {
    Finite(usize),
    Infinite,
}

impl Switching {
    pub fn below(self, hdeg: usize) -> bool {
        match self {
            Switching::Finite(s) => hdeg < s,
            Switching::Infinite => true,
        }
    }

    pub fn kind_for(self, hdeg: usize) -> VariableKind {
        if hdeg % 2 == 1 {
            VariableKind::Exterior
        } else if self.below(hdeg) {
            VariableKind::Polynomial
        } else {
            VariableKind::DividedPower
        }
    }
}

impl fmt::Display for Switching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Switching::Finite(s) => write!(f, "{s}"),
            Switching::Infinite => write!(f, "inf"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ModelSpec {
    /// `p: A -> B`.
    pub map: DgMorphism,
    pub switching: Switching,
    pub max_hdeg: usize,
    pub order: SelectionOrder,
}

#[derive(Clone, Debug)]
pub struct Model {
    /// `q: U -> B`; `U` is `q.source()`.
    pub q: DgMorphism,
    pub switching: Switching,
    pub max_hdeg: usize,
    /// Index of the first adjoined variable of `U`.
    pub first_new: usize,
    /// `stage_ends[i]`: number of variables of `U(i)`.
    pub stage_ends: Vec<usize>,
    /// Adjoined variables below the switching degree, by bidegree.
    pub n: CountTable,
    /// Adjoined variables at or above the switching degree, by bidegree.
    pub eps: CountTable,
    /// Slope constant `c`: every adjoined variable of degree `i` has
    /// internal degree at most `c * i`. `None` when no such bound is known.
    pub slope: Option<usize>,
}

impl Model {
    pub fn algebra(&self) -> &DgAlgebra {
        self.q.source()
    }

    /// The subalgebra `U(i)`.
    pub fn filtration(&self, i: usize) -> DgAlgebra {
        let n = self.stage_ends.get(i).copied().unwrap_or_else(|| self.algebra().variables().len());
        self.algebra().truncated(n)
    }

    /// All adjoined variables (either kind), by bidegree.
    pub fn all_counts(&self) -> CountTable {
        let mut t = self.n.clone();
        for i in 0..=self.max_hdeg {
            for j in 0..=t.bound {
                t.add(i, j, self.eps.get(i, j));
            }
        }
        t
    }
}

/// Largest internal degree of the homological-degree-0 part, and the
/// largest `ceil(intdeg / hdeg)` over positive-degree generators.
pub fn degree_data(a: &DgAlgebra) -> Option<(usize, usize)> {
    let t0 = a.base().top_degree()?;
    let lam = a
        .variables()
        .iter()
        .map(|v| v.intdeg.div_ceil(v.hdeg))
        .chain([a.base().positive_slope()])
        .max()
        .unwrap_or(0);
    Some((t0, lam))
}

/// `max(t0_A, lambda_A, t0_B + lambda_B)`.
pub fn slope_constant(a: &DgAlgebra, b: &DgAlgebra) -> Option<usize> {
    let (ta, la) = degree_data(a)?;
    let (tb, lb) = degree_data(b)?;
    Some(ta.max(la).max(tb + lb))
}

/// `intdeg <= offset + slope * hdeg`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeBound {
    pub slope: usize,
    pub offset: i64,
}

impl DegreeBound {
    pub fn admits(self, hdeg: usize, bound: usize) -> bool {
        self.offset + (self.slope * hdeg) as i64 <= bound as i64
    }
}

/// Bounds on the internal degree of the variables of the acyclic closure
/// of `k` over `a`, by homological degree. These also bound the Betti
/// numbers of `k`, since every bound has `offset <= 0`.
pub fn acyclic_closure_bounds(a: &DgAlgebra) -> Vec<DegreeBound> {
    let mut out = Vec::new();
    if let Some((t0, lam)) = degree_data(a) {
        out.push(DegreeBound {
            slope: t0.max(lam),
            offset: 0,
        });
    }
    if let Some(b) = monomial_rate_bound(a) {
        if a.variables().is_empty() {
            out.push(b);
        } else if let Some(z) = koszul_on_generators(a) {
            // Only degree 2 changes, by one variable per Koszul generator.
            out.push(DegreeBound {
                slope: b.slope.max(z),
                offset: b.offset.min(0),
            });
        }
    }
    out
}

/// For `A = K(z_1..z_r; R)` with the `z`s generating the maximal ideal of
/// the ring `R`, the largest internal degree of a `z`.
fn koszul_on_generators(a: &DgAlgebra) -> Option<usize> {
    let base = a.base();
    let mut zs = Vec::new();
    for v in a.variables() {
        if v.hdeg != 1 || v.boundary.terms.keys().any(|(_, m)| !m.is_one()) {
            return None;
        }
        let terms = v.boundary.terms.iter().map(|((b, _), c)| (*b, c.clone())).collect();
        zs.push(crate::base::BaseElement {
            hdeg: 0,
            intdeg: v.intdeg,
            terms,
        });
    }
    let rest = base.embedding_dimension_by_degree(&zs).ok()?;
    rest.iter().all(|&d| d == 0).then(|| zs.iter().map(|z| z.intdeg).max().unwrap_or(0))
}

/// For a ring (the base of `a`) whose relations are monomials of degree at most `r` in
/// variables of internal degree at most `w`, `Tor_i(k, k)` sits in standard
/// degree at most `1 + (r - 1)(i - 1)` (Backelin's rate bound; a monomial
/// ideal is its own Gröbner basis).
fn monomial_rate_bound(a: &DgAlgebra) -> Option<DegreeBound> {
    let pres = a.base().presentation();
    if pres.variables().iter().any(|v| v.hdeg != 0) {
        return None;
    }
    let mut r = 2;
    for (_, g) in pres.relations() {
        if g.terms.len() != 1 {
            return None;
        }
        let exps = g.terms.keys().next()?;
        r = r.max(exps.iter().sum::<u32>() as usize);
    }
    let w = pres.variables().iter().map(|v| v.intdeg).max().unwrap_or(1);
    Some(DegreeBound {
        slope: w * (r - 1),
        offset: w as i64 * (2 - r as i64),
    })
}

/// `p` is the cover `S -> A` of [`DgMorphism::cover`].
fn is_cover(p: &DgMorphism) -> bool {
    let (s, a) = (p.source(), p.target());
    let pres = s.base().presentation();
    let zero = a.base().degree_zero_variables();
    s.variables().is_empty()
        && pres.relations().next().is_none()
        && pres.variables().len() == zero.len()
        && zero.iter().enumerate().all(|(k, &v)| {
            a.base()
                .variable(v)
                .is_ok_and(|x| p.base_image(k) == &a.from_base(&x))
        })
}

/// Rows of a model of `p` whose counts are complete despite the internal
/// degree bound.
///
/// Over the cover, a variable of degree `i` below the switching degree
/// matches one of degree `i + 1` in the acyclic closure of `k` over
/// `K(m; A)`, which only differs from that over `A` in degree 2 by the
/// Koszul generators. In characteristic 0 divided powers and polynomial
/// variables generate isomorphic algebras, so the switching degree does not
/// change the counts.
fn certified_rows(p: &DgMorphism, switching: Switching, max_hdeg: usize, bound: usize) -> Vec<bool> {
    let (source, target) = (p.source(), p.target());
    let generic = slope_constant(source, target);
    let augmentation = target.variables().is_empty() && target.base().variables().is_empty();
    let closure = if augmentation { acyclic_closure_bounds(source) } else { Vec::new() };
    let cover = is_cover(p);
    let fiber = if cover { acyclic_closure_bounds(target) } else { Vec::new() };
    let gen_deg = target
        .base()
        .degree_zero_variables()
        .iter()
        .map(|&k| target.base().variables()[k].intdeg)
        .max()
        .unwrap_or(0);
    (0..=max_hdeg)
        .map(|i| {
            generic.is_some_and(|c| c * i <= bound)
                || closure.iter().any(|b| b.admits(i, bound))
                || (cover
                    && (switching.below(i) || source.field().characteristic() == 0)
                    && (i != 1 || gen_deg <= bound)
                    && fiber.iter().any(|b| b.admits(i + 1, bound)))
        })
        .collect()
}

pub fn build_model(spec: &ModelSpec) -> Result<Model> {
    let p = &spec.map;
    p.check_chain_map()?;
    let target = DgComplex::new((**p.target()).clone());
    let bound = p.source().bound().min(p.target().bound());
    {
        let cone = DgCone::new(p, &target);
        for j in 0..=bound {
            if homology_dim(&cone, 0, j)? != 0 {
                return Err(Error::NotSurjective { intdeg: j });
            }
        }
    }

    let mut q = p.clone();
    let first_new = q.source().variables().len();
    let mut stage_ends = vec![first_new];
    let mut n = CountTable::new(spec.max_hdeg, bound);
    let mut eps = CountTable::new(spec.max_hdeg, bound);
    for i in 0..spec.max_hdeg {
        let h = i + 1;
        let kind = spec.switching.kind_for(h);
        let prefix = if spec.switching.below(h) { "x" } else { "y" };
        let found = {
            let cone = DgCone::new(&q, &target);
            let gens = minimal_generators(&cone, h as i64, spec.order)?;
            let mut found = Vec::new();
            for (j, list) in gens.generators.iter().enumerate() {
                for v in list {
                    found.push((j, cone.split(h, j, v)?));
                }
            }
            found
        };
        for (j, (a, b)) in found {
            let name = q.source().fresh_name(&format!("{prefix}{h}_"));
            q.push_variable(&name, kind, a, b)?;
            if spec.switching.below(h) {
                n.add(h, j, 1);
            } else {
                eps.add(h, j, 1);
            }
        }
        stage_ends.push(q.source().variables().len());
    }

    let slope = slope_constant(p.source(), p.target());
    for (i, ok) in certified_rows(p, spec.switching, spec.max_hdeg, bound).into_iter().enumerate() {
        n.set_certified(i, ok);
        eps.set_certified(i, ok);
    }
    Ok(Model {
        q,
        switching: spec.switching,
        max_hdeg: spec.max_hdeg,
        first_new,
        stage_ends,
        n,
        eps,
        slope,
    })
}

/// Acyclic closure of the augmentation `A -> k`.
pub fn acyclic_closure(a: &DgAlgebra, max_hdeg: usize) -> Result<Model> {
    acyclic_closure_ordered(a, max_hdeg, SelectionOrder::Forward)
}

pub fn acyclic_closure_ordered(a: &DgAlgebra, max_hdeg: usize, order: SelectionOrder) -> Result<Model> {
    build_model(&ModelSpec {
        map: DgMorphism::augmentation(a.clone())?,
        switching: Switching::Finite(0),
        max_hdeg,
        order,
    })
}

pub fn minimal_model(p: &DgMorphism, max_hdeg: usize) -> Result<Model> {
    build_model(&ModelSpec {
        map: p.clone(),
        switching: Switching::Infinite,
        max_hdeg,
        order: SelectionOrder::Forward,
    })
}

/// Minimal model of `k -> B`.
pub fn minimal_model_over_field(b: &DgAlgebra, max_hdeg: usize) -> Result<Model> {
    minimal_model(&DgMorphism::unit(Arc::new(b.clone()))?, max_hdeg)
}

/// Minimal model of the cover `S -> A` by the polynomial ring on the
/// degree-0 base variables.
pub fn minimal_model_over_cover(a: &DgAlgebra, max_hdeg: usize) -> Result<Model> {
    minimal_model(&DgMorphism::cover(Arc::new(a.clone()))?, max_hdeg)
}

/// `K(x_1..x_n; A) = A[e_1..e_n | d e_i = x_i]` for degree-0 elements of
/// positive internal degree.
pub fn koszul_complex(a: &DgAlgebra, elements: &[DgElement]) -> Result<DgAlgebra> {
    let mut k = a.clone();
    for x in elements {
        if x.hdeg != 0 {
            return Err(Error::Bidegree {
                expected_h: 0,
                expected_j: x.intdeg,
                found_h: x.hdeg,
                found_j: x.intdeg,
            });
        }
        if x.intdeg == 0 && !x.is_zero() {
            return Err(Error::UnitElement(a.format_element(x)));
        }
        let name = k.fresh_name("e");
        k.adjoin(&name, VariableKind::Exterior, x.clone())?;
    }
    Ok(k)
}

/// Indices of base variables of homological degree 0 whose classes form a
/// basis of `m / m^2`, optionally also modulo the given degree-0 elements.
pub fn minimal_generator_variables(base: &TruncatedBase, extra: &[DgElement]) -> Result<Vec<usize>> {
    use crate::linear::EchelonBasis;
    let field = base.field();
    let gens = base.degree_zero_variables();
    let mut out = Vec::new();
    for j in 1..=base.bound() {
        let range = base.basis_at(0, j);
        if range.is_empty() {
            continue;
        }
        let dense = |terms: &mut dyn Iterator<Item = (usize, crate::linear::Scalar)>| {
            let mut v = vec![field.zero(); range.len()];
            for (idx, c) in terms {
                v[idx - range.start] = c;
            }
            v
        };
        let mut ech = EchelonBasis::new(field, range.len());
        for &k in &gens {
            let dk = base.variables()[k].intdeg;
            if dk >= j {
                continue;
            }
            let xk = base.variable(k)?;
            for idx in base.basis_at(0, j - dk) {
                let prod = base.multiply(&xk, &base.basis_element(idx))?;
                ech.insert(dense(&mut prod.terms.into_iter()));
            }
        }
        for e in extra.iter().filter(|e| e.hdeg == 0 && e.intdeg == j) {
            ech.insert(dense(&mut e.terms.iter().map(|((b, _), c)| (*b, c.clone()))));
        }
        for &k in gens.iter().filter(|&&k| base.variables()[k].intdeg == j) {
            let xk = base.variable(k)?;
            if ech.insert(dense(&mut xk.terms.into_iter())) {
                out.push(k);
            }
        }
    }
    Ok(out)
}

/// `K(m; A)` on a minimal generating set of the maximal ideal of `A_0`.
pub fn koszul_on_maximal_ideal(a: &DgAlgebra) -> Result<DgAlgebra> {
    let base = a.base();
    let xs = minimal_generator_variables(base, &[])?
        .into_iter()
        .map(|k| Ok(a.from_base(&base.variable(k)?)))
        .collect::<Result<Vec<_>>>()?;
    koszul_complex(a, &xs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::{truncate_quotient, BasePresentation};
    use crate::homology::homology;
    use crate::linear::Field;

    fn ring(vars: &[(&str, usize)], rels: &[&str], bound: usize) -> DgAlgebra {
        let mut p = BasePresentation::polynomial_ring(Field::Rational, vars).unwrap();
        for r in rels {
            p.add_relation(r).unwrap();
        }
        DgAlgebra::new(Arc::new(truncate_quotient(&p, bound)))
    }

    #[test]
    fn dual_numbers_acyclic_closure() {
        let a = ring(&[("x", 1)], &["x^2"], 10);
        let m = acyclic_closure(&a, 8).unwrap();
        assert_eq!(m.eps.marginals(), vec![0, 1, 1, 0, 0, 0, 0, 0, 0]);
        assert_eq!(m.slope, Some(1));
        assert_eq!(m.eps.certified_through(), Some(8));
        let u = m.algebra();
        assert_eq!(u.variable(0).kind, VariableKind::Exterior);
        assert_eq!(u.variable(1).kind, VariableKind::DividedPower);
        assert_eq!(u.format_element(&u.variable(1).boundary), "x*y1_1");
        assert!(u.is_minimal());
        m.q.check_chain_map().unwrap();
    }

    #[test]
    fn example_six_one() {
        let mut p = BasePresentation::new(Field::Rational);
        p.add_graded_variable("x0", 2, 2).unwrap();
        p.add_relation("x0^2").unwrap();
        let b = DgAlgebra::new(Arc::new(truncate_quotient(&p, 14)));
        let m = minimal_model_over_field(&b, 10).unwrap();
        let n = m.n.marginals();
        assert_eq!(n, vec![0, 0, 1, 0, 0, 1, 0, 0, 0, 0, 0]);
        assert!(m.eps.total() == 0);
        assert!(m.algebra().is_minimal());
        // q is a quasi-isomorphism in the computed range.
        let t = DgComplex::new((**m.q.target()).clone());
        let cone = DgCone::new(&m.q, &t);
        for i in 0..=10 {
            for j in 0..=14 {
                assert_eq!(homology(&cone, i, j).unwrap().dim, 0);
            }
        }
    }

    #[test]
    fn identity_target_has_no_variables() {
        let k = DgAlgebra::new(TruncatedBase::residue_field(Field::Rational, 6));
        let m = acyclic_closure(&k, 5).unwrap();
        assert_eq!(m.algebra().variables().len(), 0);
        let s = ring(&[("x", 1), ("y", 1)], &[], 6);
        let m = minimal_model_over_cover(&s, 5).unwrap();
        assert_eq!(m.algebra().variables().len(), 0);
    }

    #[test]
    fn not_surjective_rejected() {
        let b = ring(&[("x", 1)], &["x^2"], 4);
        assert!(matches!(
            minimal_model_over_field(&b, 3),
            Err(Error::NotSurjective { intdeg: 1 })
        ));
    }

    #[test]
    fn cover_model_of_complete_intersection() {
        let a = ring(&[("x", 1), ("y", 1)], &["x^2", "y^2"], 10);
        let m = minimal_model_over_cover(&a, 6).unwrap();
        assert_eq!(m.n.marginals(), vec![0, 2, 0, 0, 0, 0, 0]);
    }

    #[test]
    fn koszul_complexes() {
        let a = ring(&[("x", 1), ("y", 1)], &[], 5);
        let k = koszul_on_maximal_ideal(&a).unwrap();
        assert_eq!(k.variables().len(), 2);
        let c = DgComplex::new(k.clone());
        for i in 1..=2 {
            for j in 0..=5 {
                assert_eq!(homology(&c, i, j).unwrap().dim, 0);
            }
        }
        assert_eq!(koszul_complex(&a, &[]).unwrap().variables().len(), 0);
        assert!(matches!(koszul_complex(&a, &[a.one()]), Err(Error::UnitElement(_))));
    }

    #[test]
    fn redundant_generator_skipped() {
        let a = ring(&[("x", 1), ("z", 2)], &["z - x^2"], 6);
        assert_eq!(minimal_generator_variables(a.base(), &[]).unwrap(), vec![0]);
    }
}
