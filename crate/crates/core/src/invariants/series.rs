use serde::Serialize;

use crate::error::{Error, Result};
use crate::invariants::CountTable;

/// Integer power series in `t`, known through `t^order`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PowerSeries {
    pub order: usize,
    pub coefficients: Vec<i64>,
    /// Coefficients up to this degree are exact; later ones only use the
    /// deviations that were certified.
    pub exact_through: Option<usize>,
}

impl PowerSeries {
    pub fn coefficient(&self, n: usize) -> i64 {
        self.coefficients.get(n).copied().unwrap_or(0)
    }

    pub fn is_exact(&self) -> bool {
        self.exact_through == Some(self.order)
    }
}

/// Series in `t` (homological) and `u` (internal), `c[i][j]` for `i <= order`,
/// `j <= bound`. Every coefficient is exact.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BigradedSeries {
    pub order: usize,
    pub bound: usize,
    pub coefficients: Vec<Vec<i64>>,
}

impl BigradedSeries {
    pub fn coefficient(&self, i: usize, j: usize) -> i64 {
        self.coefficients
            .get(i)
            .and_then(|r| r.get(j))
            .copied()
            .unwrap_or(0)
    }

    pub fn collapse(&self) -> Result<Vec<i64>> {
        self.coefficients
            .iter()
            .map(|row| row.iter().try_fold(0i64, |a, &b| checked(a.checked_add(b))))
            .collect()
    }
}

fn checked(v: Option<i64>) -> Result<i64> {
    v.ok_or_else(|| Error::Overflow("power series coefficient".into()))
}

/// Multiplies `c` in place by `(1 + t^i u^j)` (odd `i`) or `1 / (1 - t^i u^j)`
/// (even `i`), `e` times.
fn apply_factor(c: &mut [Vec<i64>], i: usize, j: usize, e: u64) -> Result<()> {
    let (rows, cols) = (c.len(), c.first().map_or(0, Vec::len));
    if i == 0 || i >= rows || j >= cols {
        return Ok(());
    }
    for _ in 0..e {
        if i % 2 == 1 {
            for a in (i..rows).rev() {
                for b in (j..cols).rev() {
                    c[a][b] = checked(c[a][b].checked_add(c[a - i][b - j]))?;
                }
            }
        } else {
            for a in i..rows {
                for b in j..cols {
                    c[a][b] = checked(c[a][b].checked_add(c[a - i][b - j]))?;
                }
            }
        }
    }
    Ok(())
}

/// `prod (1 + t^i u^j)^{e_ij} / (1 - t^i u^j)^{e_ij}` over odd and even `i`.
pub fn bigraded_poincare(eps: &CountTable, order: usize) -> Result<BigradedSeries> {
    let bound = eps.bound;
    let mut c = vec![vec![0i64; bound + 1]; order + 1];
    c[0][0] = 1;
    for i in 1..=order.min(eps.max_hdeg) {
        for j in 0..=bound {
            apply_factor(&mut c, i, j, eps.get(i, j))?;
        }
    }
    Ok(BigradedSeries {
        order,
        bound,
        coefficients: c,
    })
}

/// Expands the product formula on the deviation marginals through `t^order`.
pub fn poincare_from_deviations(eps: &CountTable, order: usize) -> Result<PowerSeries> {
    let counts: Vec<u64> = (0..=order).map(|i| eps.marginal(i)).collect();
    let mut series = expand_marginals(&counts, order)?;
    let exact = (1..=order)
        .take_while(|&i| i <= eps.max_hdeg && eps.is_certified(i))
        .last()
        .unwrap_or(0);
    series.exact_through = Some(exact);
    Ok(series)
}

/// Product formula on plain deviations `eps[i]` (index 0 ignored).
pub fn expand_marginals(eps: &[u64], order: usize) -> Result<PowerSeries> {
    let mut c = vec![vec![0i64]; order + 1];
    c[0][0] = 1;
    for (i, &e) in eps.iter().enumerate().take(order + 1) {
        apply_factor(&mut c, i, 0, e)?;
    }
    Ok(PowerSeries {
        order,
        coefficients: c.into_iter().map(|r| r[0]).collect(),
        exact_through: Some(order),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_and_binomial_series() {
        let s = expand_marginals(&[0, 1, 1], 8).unwrap();
        assert_eq!(s.coefficients, vec![1; 9]);
        let s = expand_marginals(&[0, 2, 2], 8).unwrap();
        assert_eq!(s.coefficients, (1..=9).collect::<Vec<_>>());
    }

    #[test]
    fn telescoping_product() {
        let s = expand_marginals(&[0, 0, 0, 1, 0, 0, 1], 12).unwrap();
        let expected: Vec<i64> = (0..=12).map(|n| i64::from(n % 3 == 0)).collect();
        assert_eq!(s.coefficients, expected);
    }

    #[test]
    fn bigraded_collapses_to_marginals() {
        let mut t = CountTable::new(4, 6);
        t.add(1, 1, 2);
        t.add(2, 2, 2);
        for i in 0..=4 {
            t.set_certified(i, true);
        }
        let b = bigraded_poincare(&t, 4).unwrap();
        assert_eq!(b.coefficient(3, 3), 4);
        assert_eq!(b.coefficient(3, 4), 0);
        assert_eq!(b.collapse().unwrap(), vec![1, 2, 3, 4, 5]);
        let p = poincare_from_deviations(&t, 4).unwrap();
        assert!(p.is_exact());
        assert_eq!(p.coefficients, vec![1, 2, 3, 4, 5]);
    }

    #[test]
    fn uncertified_rows_limit_exactness() {
        let mut t = CountTable::new(3, 4);
        t.add(1, 1, 1);
        t.set_certified(0, true);
        t.set_certified(1, true);
        let p = poincare_from_deviations(&t, 5).unwrap();
        assert_eq!(p.exact_through, Some(1));
        assert!(!p.is_exact());
    }

    #[test]
    fn overflow_is_reported() {
        let err = expand_marginals(&[0, 0, 200], 200).unwrap_err();
        assert!(matches!(err, Error::Overflow(_)));
    }
}
