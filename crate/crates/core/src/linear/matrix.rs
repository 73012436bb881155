use std::collections::BTreeMap;

use super::scalar::{Field, Scalar};

/// A sparse matrix over the active field. Zero entries are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactMatrix {
    field: Field,
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), Scalar>,
}

impl ExactMatrix {
    pub fn zero(field: Field, rows: usize, cols: usize) -> Self {
        Self {
            field,
            rows,
            cols,
            entries: BTreeMap::new(),
        }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Self::zero(field, n, n);
        for i in 0..n {
            m.entries.insert((i, i), field.one());
        }
        m
    }

    /// Builds a matrix from `(row, col, value)` triples, summing repeated
    /// positions. Panics on out-of-range indices.
    pub fn from_entries<I>(field: Field, rows: usize, cols: usize, entries: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize, Scalar)>,
    {
        let mut m = Self::zero(field, rows, cols);
        for (r, c, v) in entries {
            m.add_to(r, c, &v);
        }
        m
    }

    pub fn from_dense(field: Field, dense: &[Vec<Scalar>]) -> Self {
        let rows = dense.len();
        let cols = dense.first().map_or(0, |r| r.len());
        let mut m = Self::zero(field, rows, cols);
        for (r, row) in dense.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged dense matrix");
            for (c, v) in row.iter().enumerate() {
                if !v.is_zero() {
                    m.entries.insert((r, c), v.clone());
                }
            }
        }
        m
    }

    pub fn from_i64(field: Field, dense: &[&[i64]]) -> Self {
        let rows: Vec<Vec<Scalar>> = dense
            .iter()
            .map(|r| r.iter().map(|&v| field.from_i64(v)).collect())
            .collect();
        if rows.is_empty() {
            return Self::zero(field, 0, 0);
        }
        Self::from_dense(field, &rows)
    }

    /// Matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(field: Field, rows: usize, columns: &[Vec<Scalar>]) -> Self {
        let mut m = Self::zero(field, rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length mismatch");
            for (r, v) in col.iter().enumerate() {
                if !v.is_zero() {
                    m.entries.insert((r, c), v.clone());
                }
            }
        }
        m
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize), &Scalar)> {
        self.entries.iter()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, r: usize, c: usize) -> Scalar {
        assert!(r < self.rows && c < self.cols, "index out of range");
        self.entries
            .get(&(r, c))
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        assert!(r < self.rows && c < self.cols, "index out of range");
        if v.is_zero() {
            self.entries.remove(&(r, c));
        } else {
            self.entries.insert((r, c), v);
        }
    }

    pub fn add_to(&mut self, r: usize, c: usize, v: &Scalar) {
        assert!(r < self.rows && c < self.cols, "index out of range");
        if v.is_zero() {
            return;
        }
        let sum = match self.entries.get(&(r, c)) {
            Some(old) => old.add(v),
            None => v.clone(),
        };
        self.set(r, c, sum);
    }

    pub fn to_dense(&self) -> Vec<Vec<Scalar>> {
        let mut out = vec![vec![self.field.zero(); self.cols]; self.rows];
        for (&(r, c), v) in &self.entries {
            out[r][c] = v.clone();
        }
        out
    }

    pub fn column(&self, c: usize) -> Vec<Scalar> {
        let mut out = vec![self.field.zero(); self.rows];
        for (&(r, cc), v) in &self.entries {
            if cc == c {
                out[r] = v.clone();
            }
        }
        out
    }

    pub fn columns(&self) -> Vec<Vec<Scalar>> {
        let mut out = vec![vec![self.field.zero(); self.rows]; self.cols];
        for (&(r, c), v) in &self.entries {
            out[c][r] = v.clone();
        }
        out
    }

    pub fn transpose(&self) -> Self {
        Self {
            field: self.field,
            rows: self.cols,
            cols: self.rows,
            entries: self
                .entries
                .iter()
                .map(|(&(r, c), v)| ((c, r), v.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        Self::from_entries(
            self.field,
            self.rows,
            self.cols,
            self.entries
                .iter()
                .map(|(&(r, c), v)| (r, c, v.mul(s))),
        )
    }

    pub fn neg(&self) -> Self {
        self.scale(&self.field.from_i64(-1))
    }

    pub fn mul_vec(&self, x: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(x.len(), self.cols, "vector length mismatch");
        let mut out = vec![self.field.zero(); self.rows];
        for (&(r, c), v) in &self.entries {
            if !x[c].is_zero() {
                out[r] = out[r].add(&v.mul(&x[c]));
            }
        }
        out
    }

    pub fn mul(&self, other: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut by_row: BTreeMap<usize, Vec<(usize, &Scalar)>> = BTreeMap::new();
        for (&(r, c), v) in &other.entries {
            by_row.entry(r).or_default().push((c, v));
        }
        let mut out = ExactMatrix::zero(self.field, self.rows, other.cols);
        for (&(r, k), a) in &self.entries {
            if let Some(row) = by_row.get(&k) {
                for &(c, b) in row {
                    out.add_to(r, c, &a.mul(b));
                }
            }
        }
        out
    }

    /// Rank and the pivot columns of the deterministic reduced echelon form
    /// (leftmost column first, smallest available row as pivot).
    pub fn rank_and_pivots(&self) -> (usize, Vec<usize>) {
        let (_, pivots) = rref(self.field, self.to_dense(), self.cols);
        (pivots.len(), pivots)
    }

    pub fn rank(&self) -> usize {
        self.rank_and_pivots().0
    }

    /// Canonical null-space basis read off the reduced echelon form: one
    /// column per free variable, that variable set to 1 and the other free
    /// variables to 0.
    pub fn kernel_basis(&self) -> ExactMatrix {
        let (reduced, pivots) = rref(self.field, self.to_dense(), self.cols);
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let free: Vec<usize> = (0..self.cols).filter(|&c| !is_pivot[c]).collect();
        let mut k = ExactMatrix::zero(self.field, self.cols, free.len());
        for (idx, &f) in free.iter().enumerate() {
            k.set(f, idx, self.field.one());
            for (row, &p) in pivots.iter().enumerate() {
                let v = &reduced[row][f];
                if !v.is_zero() {
                    k.set(p, idx, v.neg());
                }
            }
        }
        k
    }

    /// Some `x` with `self · x = b`, or `None` when `b` is outside the column
    /// space.
    pub fn solve(&self, b: &[Scalar]) -> Option<Vec<Scalar>> {
        self.solve_many(std::slice::from_ref(&b.to_vec()))
            .pop()
            .expect("one right-hand side")
    }

    /// `solve` for several right-hand sides with a single elimination.
    pub fn solve_many(&self, rhs: &[Vec<Scalar>]) -> Vec<Option<Vec<Scalar>>> {
        let mut dense = self.to_dense();
        for (r, row) in dense.iter_mut().enumerate() {
            for b in rhs {
                assert_eq!(b.len(), self.rows, "right-hand side length mismatch");
                row.push(b[r].clone());
            }
        }
        let (reduced, pivots) = rref(self.field, dense, self.cols);
        rhs.iter()
            .enumerate()
            .map(|(k, _)| {
                let col = self.cols + k;
                // Inconsistent iff some zero row of the coefficient part has a
                // nonzero right-hand entry.
                for row in reduced.iter().skip(pivots.len()) {
                    if !row[col].is_zero() {
                        return None;
                    }
                }
                let mut x = vec![self.field.zero(); self.cols];
                for (row, &p) in pivots.iter().enumerate() {
                    x[p] = reduced[row][col].clone();
                }
                Some(x)
            })
            .collect()
    }

    /// Indices of standard basis vectors of the target whose images form a
    /// basis of `target / colspace(self)`, chosen greedily by smallest index.
    pub fn cokernel_complement(&self) -> Vec<usize> {
        let mut ech = EchelonBasis::new(self.field, self.rows);
        for col in self.columns() {
            ech.insert(col);
        }
        let mut chosen = Vec::new();
        for r in 0..self.rows {
            let mut e = vec![self.field.zero(); self.rows];
            e[r] = self.field.one();
            if ech.insert(e) {
                chosen.push(r);
            }
        }
        chosen
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.rows, other.rows);
        let mut out = self.clone();
        out.cols += other.cols;
        for (&(r, c), v) in &other.entries {
            out.entries.insert((r, c + self.cols), v.clone());
        }
        out
    }

    /// `[self ; other]`.
    pub fn vstack(&self, other: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.cols, other.cols);
        let mut out = self.clone();
        out.rows += other.rows;
        for (&(r, c), v) in &other.entries {
            out.entries.insert((r + self.rows, c), v.clone());
        }
        out
    }
}

/// Gauss-Jordan elimination on the first `ncols` columns of `rows`; later
/// columns are carried along. Returns the reduced rows (pivot rows first) and
/// the pivot columns.
fn rref(field: Field, mut rows: Vec<Vec<Scalar>>, ncols: usize) -> (Vec<Vec<Scalar>>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut next = 0;
    for c in 0..ncols {
        if next == rows.len() {
            break;
        }
        let Some(p) = (next..rows.len()).find(|&r| !rows[r][c].is_zero()) else {
            continue;
        };
        rows.swap(next, p);
        let inv = rows[next][c].inv().expect("nonzero pivot");
        if !inv.is_one() {
            for v in rows[next].iter_mut() {
                if !v.is_zero() {
                    *v = v.mul(&inv);
                }
            }
        }
        let pivot_row = rows[next].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == next || row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v = v.sub(&factor.mul(pv));
                }
            }
        }
        pivots.push(c);
        next += 1;
    }
    let _ = field;
    (rows, pivots)
}

/// An incrementally built echelon basis of a subspace of `field^dim`.
///
/// Rows are stored in insertion order; each stored row is reduced against the
/// earlier ones, so reducing a vector by the rows in order is exact.
#[derive(Clone, Debug)]
pub struct EchelonBasis {
    field: Field,
    dim: usize,
    rows: Vec<(usize, Vec<Scalar>)>,
}

impl EchelonBasis {
    pub fn new(field: Field, dim: usize) -> Self {
        Self {
            field,
            dim,
            rows: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn reduce(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.dim, "vector length mismatch");
        let mut v = v.to_vec();
        for (p, row) in &self.rows {
            if v[*p].is_zero() {
                continue;
            }
            let factor = v[*p].clone();
            for (x, r) in v.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x = x.sub(&factor.mul(r));
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.reduce(v).iter().all(Scalar::is_zero)
    }

    /// Adds `v` to the span; returns whether it was independent.
    pub fn insert(&mut self, v: Vec<Scalar>) -> bool {
        let r = self.reduce(&v);
        let Some(p) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = r[p].inv().expect("nonzero");
        let row: Vec<Scalar> = r.iter().map(|x| x.mul(&inv)).collect();
        self.rows.push((p, row));
        true
    }

    pub fn field(&self) -> Field {
        self.field
    }
}
