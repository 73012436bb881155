//! Minimal semifree resolutions `F -> M` of finite modules.
//!
//! `F = sum A g_k` with `d(a g) = d(a) g + (-1)^{|a|} a d(g)`. Generators
//! of degree `n` kill minimal generators of `H_n(cone(F(n-1) -> M))`.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::base::BaseElement;
use crate::dg::{DgAlgebra, DgElement};
use crate::error::{Error, Result};
use crate::homology::{minimal_generators, Basis, Complex, DgComplex, SelectionOrder};
use crate::invariants::BettiTable;
use crate::linear::{ExactMatrix, Field, Scalar};
use crate::model::{acyclic_closure_bounds, degree_data};
use crate::module::{FiniteModule, FreeElement};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeGenerator {
    pub hdeg: usize,
    pub intdeg: usize,
    /// `d g = sum_l boundary[l] * g_l`.
    pub boundary: BTreeMap<usize, DgElement>,
    /// Coordinates of the image of `g` in `M_{hdeg, intdeg}`.
    pub image: Vec<Scalar>,
}

#[derive(Clone, Debug)]
pub struct Resolution {
    pub generators: Vec<FreeGenerator>,
    pub betti: BettiTable,
}

/// Blocks of `F_{n,j}`: one per generator, holding the basis of
/// `A_{n - h_k, j - j_k}`.
struct Blocks {
    parts: Vec<(usize, usize, Arc<Basis>)>,
    dim: usize,
}

impl Blocks {
    fn offset_of(&self, k: usize) -> Option<(usize, &Arc<Basis>)> {
        self.parts.iter().find(|p| p.0 == k).map(|p| (p.1, &p.2))
    }
}

struct ModuleCone<'a> {
    alg: &'a DgComplex,
    gens: &'a [FreeGenerator],
    module: &'a FiniteModule,
}

impl ModuleCone<'_> {
    fn blocks(&self, n: i64, j: usize) -> Result<Blocks> {
        let mut parts = Vec::new();
        let mut dim = 0;
        if n < 0 {
            return Ok(Blocks { parts, dim });
        }
        for (k, g) in self.gens.iter().enumerate() {
            if g.hdeg as i64 > n || g.intdeg > j {
                continue;
            }
            let b = self.alg.basis(n as usize - g.hdeg, j - g.intdeg)?;
            if b.is_empty() {
                continue;
            }
            parts.push((k, dim, b.clone()));
            dim += b.len();
        }
        Ok(Blocks { parts, dim })
    }

    /// Columns of `F_{n,j}` as `(generator, coefficient element)`.
    fn columns(&self, blocks: &Blocks) -> Vec<(usize, DgElement)> {
        let alg = self.alg.algebra();
        let one = alg.field().one();
        blocks
            .parts
            .iter()
            .flat_map(|(k, _, b)| {
                b.items
                    .iter()
                    .map(|(bi, m)| (*k, alg.term(*bi, m.clone(), one.clone())))
                    .collect::<Vec<_>>()
            })
            .collect()
    }

    fn place(&self, target: &Blocks, k: usize, e: &DgElement, col: usize, sign: &Scalar, out: &mut Vec<(usize, usize, Scalar)>) -> Result<()> {
        if e.is_zero() {
            return Ok(());
        }
        let (offset, basis) = target.offset_of(k).expect("target block exists for nonzero coefficient");
        for (key, c) in &e.terms {
            let row = basis.position(key).expect("coefficient lies in the block basis");
            out.push((offset + row, col, c.mul(sign)));
        }
        Ok(())
    }

    fn f_differential(&self, n: i64, j: usize) -> Result<ExactMatrix> {
        let alg = self.alg.algebra();
        let field = alg.field();
        let src = self.blocks(n, j)?;
        let tgt = self.blocks(n - 1, j)?;
        let mut entries = Vec::new();
        for (col, (k, a)) in self.columns(&src).into_iter().enumerate() {
            let one = field.one();
            self.place(&tgt, k, &alg.differential(&a)?, col, &one, &mut entries)?;
            let sign = if a.hdeg % 2 == 1 { one.neg() } else { one };
            for (l, c) in &self.gens[k].boundary {
                let prod = alg.multiply(&a, c)?;
                self.place(&tgt, *l, &prod, col, &sign, &mut entries)?;
            }
        }
        Ok(ExactMatrix::from_entries(field, tgt.dim, src.dim, entries))
    }

    fn base_part(&self, a: &DgElement) -> Option<BaseElement> {
        if a.hdeg != 0 {
            return None;
        }
        let mut terms = BTreeMap::new();
        for ((b, m), c) in &a.terms {
            if !m.is_one() {
                return None;
            }
            terms.insert(*b, c.clone());
        }
        Some(BaseElement {
            hdeg: 0,
            intdeg: a.intdeg,
            terms,
        })
    }

    fn module_element(&self, g: &FreeGenerator) -> FreeElement {
        let mut e = FreeElement::zero(g.hdeg, g.intdeg);
        for (idx, c) in g.image.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let b = self.module.basis_element(g.hdeg, g.intdeg, idx);
            for (k, v) in b.terms {
                crate::base::add_term(&mut e.terms, k, &v.mul(c));
            }
        }
        e
    }

    /// `F_{n,j} -> M_{n,j}`.
    fn augmentation(&self, n: i64, j: usize) -> Result<ExactMatrix> {
        let field = self.alg.algebra().field();
        let src = self.blocks(n, j)?;
        let rows = self.module.dim(n, j);
        let mut m = ExactMatrix::zero(field, rows, src.dim);
        if rows == 0 {
            return Ok(m);
        }
        for (col, (k, a)) in self.columns(&src).into_iter().enumerate() {
            let Some(b) = self.base_part(&a) else {
                continue;
            };
            let img = self.module.multiply(&b, &self.module_element(&self.gens[k]))?;
            for (r, v) in self.module.reduce(&img).into_iter().enumerate() {
                if !v.is_zero() {
                    m.set(r, col, v);
                }
            }
        }
        Ok(m)
    }

    fn split(&self, n: usize, j: usize, v: &[Scalar]) -> Result<(BTreeMap<usize, DgElement>, Vec<Scalar>)> {
        let blocks = self.blocks(n as i64 - 1, j)?;
        let mut boundary = BTreeMap::new();
        for (k, offset, basis) in &blocks.parts {
            let g = &self.gens[*k];
            let coords = &v[*offset..offset + basis.len()];
            let e = self.alg.element(n - 1 - g.hdeg, j - g.intdeg, coords)?;
            if !e.is_zero() {
                boundary.insert(*k, e);
            }
        }
        Ok((boundary, v[blocks.dim..].to_vec()))
    }
}

fn block2(field: Field, rows: (usize, usize), cols: (usize, usize), a: &ExactMatrix, c: &ExactMatrix, d: &ExactMatrix) -> ExactMatrix {
    let entries = a
        .entries()
        .map(|(&(r, k), v)| (r, k, v.clone()))
        .chain(c.entries().map(|(&(r, k), v)| (r + rows.0, k, v.clone())))
        .chain(d.entries().map(|(&(r, k), v)| (r + rows.0, k + cols.0, v.clone())))
        .collect::<Vec<_>>();
    ExactMatrix::from_entries(field, rows.0 + rows.1, cols.0 + cols.1, entries)
}

impl Complex for ModuleCone<'_> {
    fn field(&self) -> Field {
        self.alg.field()
    }

    fn bound(&self) -> usize {
        self.alg.bound()
    }

    fn dim(&self, n: i64, j: usize) -> Result<usize> {
        Ok(self.blocks(n - 1, j)?.dim + self.module.dim(n, j))
    }

    fn differential(&self, n: i64, j: usize) -> Result<ExactMatrix> {
        let field = self.field();
        let df = self.f_differential(n - 1, j)?.neg();
        let ff = self.augmentation(n - 1, j)?.neg();
        let dm = self.module.differential(n, j)?;
        let rows = (df.rows(), dm.rows());
        let cols = (df.cols(), dm.cols());
        let ff = if ff.rows() == rows.1 && ff.cols() == cols.0 {
            ff
        } else {
            ExactMatrix::zero(field, rows.1, cols.0)
        };
        Ok(block2(field, rows, cols, &df, &ff, &dm))
    }

    fn action_degrees(&self) -> Vec<usize> {
        self.alg.action_degrees()
    }

    fn action(&self, k: usize, n: i64, j: usize) -> Result<ExactMatrix> {
        let field = self.field();
        let alg = self.alg.algebra();
        let base = alg.base();
        let var = base.degree_zero_variables()[k];
        let xb = base.variable(var)?;
        let x = alg.from_base(&xb);
        let src = self.blocks(n - 1, j)?;
        let tgt = self.blocks(n - 1, j + xb.intdeg)?;
        let mut entries = Vec::new();
        let one = field.one();
        for (col, (g, a)) in self.columns(&src).into_iter().enumerate() {
            self.place(&tgt, g, &alg.multiply(&x, &a)?, col, &one, &mut entries)?;
        }
        let top = ExactMatrix::from_entries(field, tgt.dim, src.dim, entries);
        let bottom = self.module.action_by(&xb, n, j)?;
        let rows = (top.rows(), self.module.dim(n, j + xb.intdeg));
        let cols = (top.cols(), self.module.dim(n, j));
        let zero = ExactMatrix::zero(field, rows.1, cols.0);
        Ok(block2(field, rows, cols, &top, &zero, &bottom))
    }
}

fn is_residue_field(m: &FiniteModule) -> bool {
    (0..=m.max_hdeg()).all(|h| (0..=m.bound()).all(|j| m.dim(h as i64, j) == usize::from((h, j) == (0, 0))))
}

/// Minimal semifree resolution of `m` over `alg` through homological degree
/// `max_hdeg`.
pub fn resolve_module(alg: &DgAlgebra, m: &FiniteModule, max_hdeg: usize, order: SelectionOrder) -> Result<Resolution> {
    if alg.field() != m.field() || alg.bound() != m.bound() {
        return Err(Error::Inadmissible {
            statement: "resolve".into(),
            reason: "module and algebra must share the base".into(),
        });
    }
    for v in alg.variables().iter().filter(|v| v.hdeg == 1) {
        let mut terms = BTreeMap::new();
        for ((b, _), c) in &v.boundary.terms {
            terms.insert(*b, c.clone());
        }
        let b = BaseElement {
            hdeg: 0,
            intdeg: v.boundary.intdeg,
            terms,
        };
        for h in 0..=m.max_hdeg() {
            for j in 0..=m.bound() {
                if !m.action_by(&b, h as i64, j)?.is_zero() {
                    return Err(Error::Inadmissible {
                        statement: "resolve".into(),
                        reason: format!("the boundary of `{}` does not annihilate the module", v.name),
                    });
                }
            }
        }
    }

    let ac = DgComplex::new(alg.clone());
    let bound = alg.bound();
    let mut gens: Vec<FreeGenerator> = Vec::new();
    let mut betti = BettiTable::new(max_hdeg, bound);
    for n in 0..=max_hdeg {
        let found = {
            let cone = ModuleCone {
                alg: &ac,
                gens: &gens,
                module: m,
            };
            let mg = minimal_generators(&cone, n as i64, order)?;
            let mut found = Vec::new();
            for (j, list) in mg.generators.iter().enumerate() {
                for v in list {
                    let (boundary, image) = cone.split(n, j, v)?;
                    found.push(FreeGenerator {
                        hdeg: n,
                        intdeg: j,
                        boundary,
                        image,
                    });
                }
            }
            found
        };
        for g in found {
            if g.boundary.values().any(|c| c.terms.keys().any(|(b, mono)| *b == 0 && mono.is_one())) {
                return Err(Error::Unsupported("resolution differential has a unit entry".into()));
            }
            betti.add(g.hdeg, g.intdeg, 1);
            gens.push(g);
        }
    }

    let slope = degree_data(alg).map(|(t0, lam)| t0.max(lam));
    let top = m.top_degree();
    // For `k` itself the ranks are those of the acyclic closure.
    let closure = if is_residue_field(m) { acyclic_closure_bounds(alg) } else { Vec::new() };
    for h in 0..=max_hdeg {
        let ok = matches!((slope, top), (Some(c), Some(t)) if t + c * h <= bound)
            || closure.iter().any(|b| b.admits(h, bound));
        betti.set_certified(h, ok);
    }
    Ok(Resolution { generators: gens, betti })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::{truncate_quotient, BasePresentation};
    use crate::dg::VariableKind;
    use crate::module::ModulePresentation;

    fn ring(vars: &[(&str, usize)], rels: &[&str], bound: usize) -> DgAlgebra {
        let mut p = BasePresentation::polynomial_ring(Field::Rational, vars).unwrap();
        for r in rels {
            p.add_relation(r).unwrap();
        }
        DgAlgebra::new(Arc::new(truncate_quotient(&p, bound)))
    }

    #[test]
    fn residue_field_of_dual_numbers() {
        let a = ring(&[("x", 1)], &["x^2"], 10);
        let k = FiniteModule::residue_field(a.base().clone(), 0, 0).unwrap();
        let r = resolve_module(&a, &k, 8, SelectionOrder::Forward).unwrap();
        assert_eq!(r.betti.marginals(), vec![1; 9]);
        for i in 0..=8 {
            assert_eq!(r.betti.get(i, i), 1);
        }
        assert_eq!(r.betti.certified_through(), Some(8));
    }

    #[test]
    fn free_module() {
        let a = ring(&[("x", 1)], &["x^2"], 6);
        let f = FiniteModule::free(a.base().clone()).unwrap();
        let r = resolve_module(&a, &f, 5, SelectionOrder::Forward).unwrap();
        assert_eq!(r.betti.marginals(), vec![1, 0, 0, 0, 0, 0]);
    }

    #[test]
    fn maximal_ideal_is_a_shifted_syzygy() {
        let a = ring(&[("x", 1)], &["x^2"], 10);
        let mut p = ModulePresentation::new(a.base().clone());
        p.add_generator("g", 0, 1).unwrap();
        p.add_relation("x*g").unwrap();
        let m = FiniteModule::new(p).unwrap();
        let r = resolve_module(&a, &m, 8, SelectionOrder::Forward).unwrap();
        for i in 0..=8 {
            assert_eq!(r.betti.get(i, i + 1), 1);
            assert_eq!(r.betti.marginal(i), 1);
        }
    }

    #[test]
    fn complete_intersection_betti() {
        let a = ring(&[("x", 1), ("y", 1)], &["x^2", "y^2"], 10);
        let k = FiniteModule::residue_field(a.base().clone(), 0, 0).unwrap();
        let r = resolve_module(&a, &k, 6, SelectionOrder::Forward).unwrap();
        assert_eq!(r.betti.marginals(), vec![1, 2, 3, 4, 5, 6, 7]);
    }

    #[test]
    fn over_a_koszul_complex() {
        // K(x; k[x]) is quasi-isomorphic to k, so k has Betti numbers 1, 1.
        let mut a = ring(&[("x", 1)], &[], 6);
        let x = a.parse_element("x", 0, 1).unwrap();
        a.adjoin("e", VariableKind::Exterior, x).unwrap();
        let k = FiniteModule::residue_field(a.base().clone(), 0, 0).unwrap();
        let r = resolve_module(&a, &k, 4, SelectionOrder::Forward).unwrap();
        assert_eq!(r.betti.marginals(), vec![1, 0, 0, 0, 0]);

        let f = FiniteModule::free(a.base().clone()).unwrap();
        assert!(matches!(
            resolve_module(&a, &f, 2, SelectionOrder::Forward),
            Err(Error::Inadmissible { .. })
        ));
    }
}
