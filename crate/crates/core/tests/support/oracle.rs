//! Brute-force minimal graded free resolution of `k` over a commutative
//! bigraded base, written against the linear algebra and the base ring only.
//!
//! `F_s` is built degree by degree: in each bidegree the kernel of
//! `d_{s-1}` is computed outright and a complement of `R_+ F_s` in it is
//! taken as the new generators. A generator of `F_s` in bidegree `(h, j)`
//! counts towards total degree `s + h`.

use std::collections::BTreeMap;

use semifree::base::TruncatedBase;
use semifree::linear::{EchelonBasis, ExactMatrix, Scalar};

struct FreeModule {
    /// Bidegree of each generator.
    gens: Vec<(usize, usize)>,
    /// Image of each generator in the previous module, as a coordinate vector
    /// of the previous module at the generator's bidegree.
    images: Vec<Vec<Scalar>>,
}

/// Coordinates of a free module in one bidegree: `(generator, base index)`.
fn coordinates(r: &TruncatedBase, gens: &[(usize, usize)], h: usize, j: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (g, &(hg, jg)) in gens.iter().enumerate() {
        if hg <= h && jg <= j {
            for b in r.basis_at(h - hg, j - jg) {
                out.push((g, b));
            }
        }
    }
    out
}

/// `b * image(g)` in the coordinates of the previous module at `(h, j)`.
fn act(
    r: &TruncatedBase,
    prev: &[(usize, usize)],
    image: &[Scalar],
    image_deg: (usize, usize),
    b: usize,
    target: &BTreeMap<(usize, usize), usize>,
) -> Vec<Scalar> {
    let field = r.field();
    let src = coordinates(r, prev, image_deg.0, image_deg.1);
    let mut out = vec![field.zero(); target.len()];
    for (k, c) in image.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let (g, rb) = src[k];
        for (idx, coeff) in r.multiply_basis(b, rb).expect("within bound") {
            let pos = target[&(g, *idx)];
            out[pos] = out[pos].add(&c.mul(coeff));
        }
    }
    out
}

/// Column vectors spanning `d(F)` at `(h, j)` where `F` has generators `gens`
/// mapping into a module with generators `prev`.
fn image_span(
    r: &TruncatedBase,
    module: &FreeModule,
    prev: &[(usize, usize)],
    h: usize,
    j: usize,
) -> Vec<Vec<Scalar>> {
    let target: BTreeMap<(usize, usize), usize> = coordinates(r, prev, h, j)
        .into_iter()
        .enumerate()
        .map(|(k, c)| (c, k))
        .collect();
    let mut cols = Vec::new();
    for (g, &(hg, jg)) in module.gens.iter().enumerate() {
        if hg > h || jg > j {
            continue;
        }
        for b in r.basis_at(h - hg, j - jg) {
            cols.push(act(r, prev, &module.images[g], (hg, jg), b, &target));
        }
    }
    cols
}

/// Graded Betti numbers `beta[s][h][j]` of `k` over `r`, for `s + h <= max_total`
/// and `j <= r.bound()`. Every entry reported is exact.
pub struct OracleResolution {
    pub max_total: usize,
    pub bound: usize,
    pub graded: Vec<Vec<Vec<u64>>>,
}

impl OracleResolution {
    /// Generators of total degree `i` in internal degree `j`.
    pub fn total(&self, i: usize, j: usize) -> u64 {
        (0..=i).map(|s| self.graded[s][i - s][j]).sum()
    }

    pub fn marginal(&self, i: usize) -> u64 {
        (0..=self.bound).map(|j| self.total(i, j)).sum()
    }

    pub fn marginals(&self) -> Vec<u64> {
        (0..=self.max_total).map(|i| self.marginal(i)).collect()
    }
}

pub fn resolve_residue_field(r: &TruncatedBase, max_total: usize) -> OracleResolution {
    assert!(
        r.variables().iter().all(|v| v.hdeg % 2 == 0 && v.intdeg > 0),
        "oracle needs a commutative connected base"
    );
    let field = r.field();
    let bound = r.bound();
    let mut graded = vec![vec![vec![0u64; bound + 1]; max_total + 1]; max_total + 1];
    graded[0][0][0] = 1;

    // F_0 = R, and ker(F_0 -> k) = R_+.
    let mut prev = FreeModule {
        gens: vec![(0, 0)],
        images: vec![vec![]],
    };
    let mut prev_prev: Vec<(usize, usize)> = Vec::new();

    for s in 1..=max_total {
        let mut module = FreeModule {
            gens: Vec::new(),
            images: Vec::new(),
        };
        for j in 0..=bound {
            for h in 0..=max_total - s {
                let dom = coordinates(r, &prev.gens, h, j);
                if dom.is_empty() {
                    continue;
                }
                let kernel: Vec<Vec<Scalar>> = if s == 1 {
                    // Everything but the unit.
                    (0..dom.len())
                        .filter(|&k| (h, j) != (0, 0) || dom[k].1 != 0)
                        .map(|k| {
                            let mut v = vec![field.zero(); dom.len()];
                            v[k] = field.one();
                            v
                        })
                        .collect()
                } else {
                    let cols = image_span(r, &prev, &prev_prev, h, j);
                    let rows = coordinates(r, &prev_prev, h, j).len();
                    if rows == 0 {
                        ExactMatrix::identity(field, dom.len()).columns()
                    } else {
                        ExactMatrix::from_columns(field, rows, &cols).kernel_basis().columns()
                    }
                };
                if kernel.is_empty() {
                    continue;
                }
                let mut span = EchelonBasis::new(field, dom.len());
                for v in image_span(r, &module, &prev.gens, h, j) {
                    span.insert(v);
                }
                for z in kernel {
                    if span.insert(z.clone()) {
                        module.gens.push((h, j));
                        module.images.push(z);
                        graded[s][h][j] += 1;
                    }
                }
            }
        }
        prev_prev = std::mem::take(&mut prev.gens);
        prev = module;
    }
    OracleResolution {
        max_total,
        bound,
        graded,
    }
}

/// Deviations recovered from bigraded Betti numbers by peeling factors off
/// `prod (1 + t^i u^j)^e / prod (1 - t^i u^j)^e` one total degree at a time.
pub fn deviations_from_betti(res: &OracleResolution) -> Vec<Vec<i64>> {
    let (n, d) = (res.max_total, res.bound);
    let mut eps = vec![vec![0i64; d + 1]; n + 1];
    // Running expansion of the factors found so far.
    let mut series = vec![vec![0i64; d + 1]; n + 1];
    series[0][0] = 1;
    for i in 1..=n {
        for j in 0..=d {
            let e = res.total(i, j) as i64 - series[i][j];
            eps[i][j] = e;
            for _ in 0..e.max(0) {
                multiply_factor(&mut series, i, j);
            }
        }
    }
    eps
}

fn multiply_factor(series: &mut [Vec<i64>], i: usize, j: usize) {
    let n = series.len() - 1;
    let d = series[0].len() - 1;
    if i % 2 == 1 {
        for a in (i..=n).rev() {
            for b in (j..=d).rev() {
                series[a][b] += series[a - i][b - j];
            }
        }
    } else {
        for a in i..=n {
            for b in j..=d {
                series[a][b] += series[a - i][b - j];
            }
        }
    }
}

pub fn deviation_marginals(eps: &[Vec<i64>]) -> Vec<i64> {
    eps.iter().map(|row| row.iter().sum()).collect()
}
