//! Bigraded complexes, their homology, mapping cones, and minimal generators
//! of homology over the degree-0 base.
//!
//! Every differential preserves internal degree, so each computation happens
//! inside one internal degree `j` and is exact whenever `j` lies within the
//! truncation bound.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use rayon::prelude::*;

use crate::dg::{DgAlgebra, DgElement, DgMorphism, Monomial};
use crate::error::{Error, Result};
use crate::linear::{EchelonBasis, ExactMatrix, Field, Scalar};

/// A complex graded by (homological, internal) degree whose homology is a
/// module over the degree-0 base, with the base variables acting through
/// `action`.
pub trait Complex: Sync {
    fn field(&self) -> Field;

    /// Largest internal degree at which the complex is known exactly.
    fn bound(&self) -> usize;

    fn dim(&self, i: i64, j: usize) -> Result<usize>;

    /// `d: C_{i,j} -> C_{i-1,j}`, rows indexing the target.
    fn differential(&self, i: i64, j: usize) -> Result<ExactMatrix>;

    /// Internal degrees of the acting elements.
    fn action_degrees(&self) -> Vec<usize> {
        Vec::new()
    }

    /// Multiplication by the `k`-th acting element, `C_{i,j} -> C_{i,j+d_k}`.
    fn action(&self, k: usize, i: i64, j: usize) -> Result<ExactMatrix> {
        let _ = (k, i, j);
        Err(Error::Unsupported("complex has no module action".into()))
    }
}

/// Representatives of a basis of `H_{i,j}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyClassSet {
    pub hdeg: i64,
    pub intdeg: usize,
    pub dim: usize,
    pub representatives: Vec<Vec<Scalar>>,
    pub complete: bool,
}

/// Cycles of `C_{i,j}` and the boundary subspace, both as column lists.
fn cycles_and_boundaries<C: Complex + ?Sized>(c: &C, i: i64, j: usize) -> Result<(Vec<Vec<Scalar>>, Vec<Vec<Scalar>>)> {
    let n = c.dim(i, j)?;
    if n == 0 {
        return Ok((Vec::new(), Vec::new()));
    }
    let d = c.differential(i, j)?;
    let z = d.kernel_basis().columns();
    let b = c.differential(i + 1, j)?.columns();
    Ok((z, b))
}

pub fn homology<C: Complex + ?Sized>(c: &C, i: i64, j: usize) -> Result<HomologyClassSet> {
    let (z, b) = cycles_and_boundaries(c, i, j)?;
    let n = c.dim(i, j)?;
    let mut ech = EchelonBasis::new(c.field(), n);
    for col in b {
        ech.insert(col);
    }
    let mut representatives = Vec::new();
    for col in z {
        if ech.insert(col.clone()) {
            representatives.push(col);
        }
    }
    Ok(HomologyClassSet {
        hdeg: i,
        intdeg: j,
        dim: representatives.len(),
        representatives,
        complete: j <= c.bound(),
    })
}

/// `dim H_{i,j}` from ranks alone.
pub fn homology_dim<C: Complex + ?Sized>(c: &C, i: i64, j: usize) -> Result<usize> {
    let n = c.dim(i, j)?;
    if n == 0 {
        return Ok(0);
    }
    Ok(n - c.differential(i, j)?.rank() - c.differential(i + 1, j)?.rank())
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SelectionOrder {
    #[default]
    Forward,
    Reversed,
}

/// Minimal generators of `H_i` over the degree-0 base, by internal degree.
#[derive(Clone, Debug, Default)]
pub struct MinimalGenerators {
    /// `generators[j]`: cycles in `C_{i,j}` lifting new generators.
    pub generators: Vec<Vec<Vec<Scalar>>>,
    pub homology_dims: Vec<usize>,
}

impl MinimalGenerators {
    pub fn count(&self) -> usize {
        self.generators.iter().map(Vec::len).sum()
    }
}

/// Graded Nakayama: in internal degree `j`, a homology class is a new
/// generator unless it lies in the span of boundaries and of acting elements
/// times cycles of lower internal degree.
pub fn minimal_generators<C: Complex + ?Sized>(c: &C, i: i64, order: SelectionOrder) -> Result<MinimalGenerators> {
    let bound = c.bound();
    let field = c.field();
    let parts: Vec<(Vec<Vec<Scalar>>, Vec<Vec<Scalar>>)> = (0..=bound)
        .into_par_iter()
        .map(|j| cycles_and_boundaries(c, i, j))
        .collect::<Result<_>>()?;
    let degrees = c.action_degrees();

    let per_degree: Vec<(Vec<Vec<Scalar>>, usize)> = (0..=bound)
        .into_par_iter()
        .map(|j| {
            let (z, b) = &parts[j];
            if z.is_empty() {
                return Ok((Vec::new(), 0));
            }
            let n = c.dim(i, j)?;
            let mut ech = EchelonBasis::new(field, n);
            for col in b {
                ech.insert(col.clone());
            }
            let boundary_rank = ech.rank();
            for (k, &d) in degrees.iter().enumerate() {
                if d == 0 || d > j || parts[j - d].0.is_empty() {
                    continue;
                }
                let act = c.action(k, i, j - d)?;
                for zc in &parts[j - d].0 {
                    ech.insert(act.mul_vec(zc));
                }
            }
            let mut gens = Vec::new();
            let candidates: Box<dyn Iterator<Item = &Vec<Scalar>>> = match order {
                SelectionOrder::Forward => Box::new(z.iter()),
                SelectionOrder::Reversed => Box::new(z.iter().rev()),
            };
            for zc in candidates {
                if ech.insert(zc.clone()) {
                    gens.push(zc.clone());
                }
            }
            Ok((gens, z.len() - boundary_rank))
        })
        .collect::<Result<_>>()?;

    let (generators, homology_dims) = per_degree.into_iter().unzip();
    Ok(MinimalGenerators {
        generators,
        homology_dims,
    })
}

/// A complex given by explicit matrices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BigradedComplex {
    field: Field,
    bound: usize,
    dims: BTreeMap<(i64, usize), usize>,
    diffs: BTreeMap<(i64, usize), ExactMatrix>,
}

impl BigradedComplex {
    pub fn new(field: Field, bound: usize) -> Self {
        Self {
            field,
            bound,
            dims: BTreeMap::new(),
            diffs: BTreeMap::new(),
        }
    }

    pub fn set_dim(&mut self, i: i64, j: usize, n: usize) {
        if n == 0 {
            self.dims.remove(&(i, j));
        } else {
            self.dims.insert((i, j), n);
        }
    }

    /// Sets `d: C_{i,j} -> C_{i-1,j}`; dimensions must already match.
    pub fn set_differential(&mut self, i: i64, j: usize, d: ExactMatrix) {
        assert_eq!(d.cols(), self.dim_of(i, j));
        assert_eq!(d.rows(), self.dim_of(i - 1, j));
        self.diffs.insert((i, j), d);
    }

    fn dim_of(&self, i: i64, j: usize) -> usize {
        self.dims.get(&(i, j)).copied().unwrap_or(0)
    }

    pub fn degrees(&self) -> impl Iterator<Item = (i64, usize)> + '_ {
        self.dims.keys().copied()
    }

    /// Materializes homological degrees `lo..=hi` of any complex.
    pub fn from_complex<C: Complex + ?Sized>(c: &C, lo: i64, hi: i64) -> Result<Self> {
        let mut out = Self::new(c.field(), c.bound());
        for j in 0..=c.bound() {
            for i in lo..=hi {
                out.set_dim(i, j, c.dim(i, j)?);
            }
            for i in lo + 1..=hi {
                let d = c.differential(i, j)?;
                if d.rows() > 0 && d.cols() > 0 {
                    out.diffs.insert((i, j), d);
                }
            }
        }
        Ok(out)
    }

    /// `C[s]`: degree `i` of the result is degree `i + s` of `C`, with
    /// differential scaled by `(-1)^s`.
    pub fn shift(&self, s: i64) -> Self {
        let sign = if s.rem_euclid(2) == 1 { self.field.one().neg() } else { self.field.one() };
        Self {
            field: self.field,
            bound: self.bound,
            dims: self.dims.iter().map(|(&(i, j), &n)| ((i - s, j), n)).collect(),
            diffs: self
                .diffs
                .iter()
                .map(|(&(i, j), d)| ((i - s, j), d.scale(&sign)))
                .collect(),
        }
    }

    /// `d^2 = 0` in every bidegree.
    pub fn is_complex(&self) -> bool {
        self.dims.keys().all(|&(i, j)| {
            let (Ok(a), Ok(b)) = (self.differential(i, j), self.differential(i - 1, j)) else {
                return false;
            };
            b.mul(&a).is_zero()
        })
    }
}

impl Complex for BigradedComplex {
    fn field(&self) -> Field {
        self.field
    }

    fn bound(&self) -> usize {
        self.bound
    }

    fn dim(&self, i: i64, j: usize) -> Result<usize> {
        Ok(self.dim_of(i, j))
    }

    fn differential(&self, i: i64, j: usize) -> Result<ExactMatrix> {
        Ok(self
            .diffs
            .get(&(i, j))
            .cloned()
            .unwrap_or_else(|| ExactMatrix::zero(self.field, self.dim_of(i - 1, j), self.dim_of(i, j))))
    }
}

/// `[[a, b], [c, d]]` with the given block shapes.
fn block(field: Field, rows: (usize, usize), cols: (usize, usize), blocks: [Option<&ExactMatrix>; 4]) -> ExactMatrix {
    let offsets = [(0, 0), (0, cols.0), (rows.0, 0), (rows.0, cols.0)];
    let entries = blocks.iter().zip(offsets).flat_map(|(m, (r0, c0))| {
        m.iter()
            .flat_map(move |m| m.entries().map(move |(&(r, c), v)| (r + r0, c + c0, v.clone())))
    });
    ExactMatrix::from_entries(field, rows.0 + rows.1, cols.0 + cols.1, entries)
}

/// `cone(f) = C[-1] + D` with differential `[[-d_C, 0], [-f, d_D]]`, where
/// `f[(i, j)]: C_{i,j} -> D_{i,j}`. Fails if `f` is not a chain map.
pub fn mapping_cone(
    c: &BigradedComplex,
    d: &BigradedComplex,
    f: &BTreeMap<(i64, usize), ExactMatrix>,
) -> Result<BigradedComplex> {
    let field = c.field;
    let fmat = |i: i64, j: usize| {
        f.get(&(i, j))
            .cloned()
            .unwrap_or_else(|| ExactMatrix::zero(field, d.dim_of(i, j), c.dim_of(i, j)))
    };
    for &(i, j) in c.dims.keys() {
        let lhs = d.differential(i, j)?.mul(&fmat(i, j));
        let rhs = fmat(i - 1, j).mul(&c.differential(i, j)?);
        if lhs != rhs {
            return Err(Error::NotAChainMap(format!("bidegree ({i}, {j})")));
        }
    }
    let mut out = BigradedComplex::new(field, c.bound.min(d.bound));
    let degrees: std::collections::BTreeSet<(i64, usize)> =
        c.dims.keys().map(|&(i, j)| (i + 1, j)).chain(d.dims.keys().copied()).collect();
    for &(n, j) in &degrees {
        out.set_dim(n, j, c.dim_of(n - 1, j) + d.dim_of(n, j));
    }
    let all: std::collections::BTreeSet<(i64, usize)> =
        degrees.iter().flat_map(|&(n, j)| [(n, j), (n + 1, j)]).collect();
    for (n, j) in all {
        let rows = (c.dim_of(n - 2, j), d.dim_of(n - 1, j));
        let cols = (c.dim_of(n - 1, j), d.dim_of(n, j));
        if rows.0 + rows.1 == 0 || cols.0 + cols.1 == 0 {
            continue;
        }
        let dc = c.differential(n - 1, j)?.neg();
        let ff = fmat(n - 1, j).neg();
        let dd = d.differential(n, j)?;
        out.diffs
            .insert((n, j), block(field, rows, cols, [Some(&dc), None, Some(&ff), Some(&dd)]));
    }
    Ok(out)
}

/// Basis of one bidegree of a dg-algebra with a reverse index.
#[derive(Debug)]
pub struct Basis {
    pub items: Vec<(usize, Monomial)>,
    index: HashMap<(usize, Monomial), usize>,
}

impl Basis {
    fn new(items: Vec<(usize, Monomial)>) -> Self {
        let index = items.iter().cloned().enumerate().map(|(n, k)| (k, n)).collect();
        Self { items, index }
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn position(&self, key: &(usize, Monomial)) -> Option<usize> {
        self.index.get(key).copied()
    }
}

/// The underlying complex of a dg-algebra, with bases cached per bidegree.
#[derive(Debug)]
pub struct DgComplex {
    alg: DgAlgebra,
    cache: Mutex<HashMap<(usize, usize), Arc<Basis>>>,
}

impl DgComplex {
    pub fn new(alg: DgAlgebra) -> Self {
        Self {
            alg,
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn algebra(&self) -> &DgAlgebra {
        &self.alg
    }

    pub fn basis(&self, i: usize, j: usize) -> Result<Arc<Basis>> {
        if let Some(b) = self.cache.lock().expect("basis cache").get(&(i, j)) {
            return Ok(b.clone());
        }
        let b = Arc::new(Basis::new(self.alg.basis_of_bidegree(i, j)?));
        self.cache.lock().expect("basis cache").insert((i, j), b.clone());
        Ok(b)
    }

    fn basis_at(&self, i: i64, j: usize) -> Result<Option<Arc<Basis>>> {
        if i < 0 {
            return Ok(None);
        }
        self.basis(i as usize, j).map(Some)
    }

    pub fn coordinates(&self, e: &DgElement) -> Result<Vec<Scalar>> {
        let basis = self.basis(e.hdeg, e.intdeg)?;
        let mut v = vec![self.alg.field().zero(); basis.len()];
        for (k, c) in &e.terms {
            let pos = basis.position(k).expect("element terms lie in the bidegree basis");
            v[pos] = c.clone();
        }
        Ok(v)
    }

    pub fn element(&self, i: usize, j: usize, coords: &[Scalar]) -> Result<DgElement> {
        let basis = self.basis(i, j)?;
        let mut e = DgElement::zero(i, j);
        for (k, c) in basis.items.iter().zip(coords) {
            e.add_term(k.0, k.1.clone(), c);
        }
        Ok(e)
    }

    /// Matrix of `u |-> op(u)` from bidegree `(i, j)` into `(ti, tj)`.
    fn matrix_of<F>(&self, i: i64, j: usize, ti: i64, tj: usize, op: F) -> Result<ExactMatrix>
    where
        F: Fn(&DgElement) -> Result<DgElement>,
    {
        let field = self.alg.field();
        let src = self.basis_at(i, j)?;
        let tgt = self.basis_at(ti, tj)?;
        let (Some(src), Some(tgt)) = (src, tgt) else {
            let rows = if ti < 0 { 0 } else { self.dim(ti, tj)? };
            let cols = if i < 0 { 0 } else { self.dim(i, j)? };
            return Ok(ExactMatrix::zero(field, rows, cols));
        };
        let mut entries = Vec::new();
        for (col, (b, m)) in src.items.iter().enumerate() {
            let img = op(&self.alg.term(*b, m.clone(), field.one()))?;
            for (k, c) in &img.terms {
                let row = tgt.position(k).expect("image lies in the target basis");
                entries.push((row, col, c.clone()));
            }
        }
        Ok(ExactMatrix::from_entries(field, tgt.len(), src.len(), entries))
    }

    /// Left multiplication by `e`, from `(i, j)` to `(i + |e|, j + intdeg e)`.
    pub fn multiplication(&self, e: &DgElement, i: i64, j: usize) -> Result<ExactMatrix> {
        self.matrix_of(i, j, i + e.hdeg as i64, j + e.intdeg, |u| self.alg.multiply(e, u))
    }
}

impl Complex for DgComplex {
    fn field(&self) -> Field {
        self.alg.field()
    }

    fn bound(&self) -> usize {
        self.alg.bound()
    }

    fn dim(&self, i: i64, j: usize) -> Result<usize> {
        Ok(self.basis_at(i, j)?.map_or(0, |b| b.len()))
    }

    fn differential(&self, i: i64, j: usize) -> Result<ExactMatrix> {
        self.matrix_of(i, j, i - 1, j, |u| self.alg.differential(u))
    }

    fn action_degrees(&self) -> Vec<usize> {
        let base = self.alg.base();
        base.degree_zero_variables()
            .into_iter()
            .map(|k| base.variables()[k].intdeg)
            .collect()
    }

    fn action(&self, k: usize, i: i64, j: usize) -> Result<ExactMatrix> {
        let base = self.alg.base();
        let var = base.degree_zero_variables()[k];
        let x = self.alg.from_base(&base.variable(var)?);
        self.multiplication(&x, i, j)
    }
}

/// The cone of a dg morphism `f: U -> B`: `cone_n = U_{n-1} + B_n`. The
/// degree-0 base variables `x` of `U` act by `(x, f(x))`.
pub struct DgCone<'a> {
    map: &'a DgMorphism,
    source: DgComplex,
    target: &'a DgComplex,
}

impl<'a> DgCone<'a> {
    pub fn new(map: &'a DgMorphism, target: &'a DgComplex) -> Self {
        Self {
            map,
            source: DgComplex::new(map.source().clone()),
            target,
        }
    }

    pub fn source(&self) -> &DgComplex {
        &self.source
    }

    pub fn target(&self) -> &DgComplex {
        self.target
    }

    /// Matrix of `f: U_{i,j} -> B_{i,j}`.
    pub fn map_matrix(&self, i: i64, j: usize) -> Result<ExactMatrix> {
        let field = self.source.field();
        let rows = self.target.dim(i, j)?;
        let Some(src) = self.source.basis_at(i, j)? else {
            return Ok(ExactMatrix::zero(field, rows, 0));
        };
        let mut entries = Vec::new();
        for (col, (b, m)) in src.items.iter().enumerate() {
            let u = self.source.alg.term(*b, m.clone(), field.one());
            let img = self.map.apply(&u)?;
            if img.is_zero() {
                continue;
            }
            let coords = self.target.coordinates(&img)?;
            for (row, c) in coords.into_iter().enumerate() {
                if !c.is_zero() {
                    entries.push((row, col, c));
                }
            }
        }
        Ok(ExactMatrix::from_entries(field, rows, src.len(), entries))
    }

    /// Splits a cone vector of degree `(n, j)` into its `U_{n-1}` and `B_n`
    /// components.
    pub fn split(&self, n: usize, j: usize, v: &[Scalar]) -> Result<(DgElement, DgElement)> {
        let a_dim = if n == 0 { 0 } else { self.source.dim(n as i64 - 1, j)? };
        let a = if n == 0 {
            DgElement::zero(0, j)
        } else {
            self.source.element(n - 1, j, &v[..a_dim])?
        };
        let b = self.target.element(n, j, &v[a_dim..])?;
        Ok((a, b))
    }
}

impl Complex for DgCone<'_> {
    fn field(&self) -> Field {
        self.source.field()
    }

    fn bound(&self) -> usize {
        self.source.bound().min(self.target.bound())
    }

    fn dim(&self, n: i64, j: usize) -> Result<usize> {
        Ok(self.source.dim(n - 1, j)? + self.target.dim(n, j)?)
    }

    fn differential(&self, n: i64, j: usize) -> Result<ExactMatrix> {
        let field = self.field();
        let rows = (self.source.dim(n - 2, j)?, self.target.dim(n - 1, j)?);
        let cols = (self.source.dim(n - 1, j)?, self.target.dim(n, j)?);
        let dc = self.source.differential(n - 1, j)?.neg();
        let ff = self.map_matrix(n - 1, j)?.neg();
        let dd = self.target.differential(n, j)?;
        Ok(block(field, rows, cols, [Some(&dc), None, Some(&ff), Some(&dd)]))
    }

    fn action_degrees(&self) -> Vec<usize> {
        self.source.action_degrees()
    }

    fn action(&self, k: usize, n: i64, j: usize) -> Result<ExactMatrix> {
        let field = self.field();
        let base = self.source.alg.base();
        let var = base.degree_zero_variables()[k];
        let d = base.variables()[var].intdeg;
        let x = self.source.alg.from_base(&base.variable(var)?);
        let fx = self.map.base_image(var);
        let top = self.source.multiplication(&x, n - 1, j)?;
        let bottom = if fx.is_zero() {
            ExactMatrix::zero(field, self.target.dim(n, j + d)?, self.target.dim(n, j)?)
        } else {
            self.target.multiplication(fx, n, j)?
        };
        let rows = (top.rows(), bottom.rows());
        let cols = (top.cols(), bottom.cols());
        Ok(block(field, rows, cols, [Some(&top), None, None, Some(&bottom)]))
    }
}
