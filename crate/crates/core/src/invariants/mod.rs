//! Deviations, Betti numbers, Poincaré series and the statement checks built
//! on them.

mod classify;
mod series;
mod tables;
mod verify;

pub use classify::{classify_growth, is_ring, Classification, GrowthVerdict};
pub use series::{bigraded_poincare, expand_marginals, poincare_from_deviations, BigradedSeries, PowerSeries};
pub use tables::{BettiTable, CountTable, DeviationTable};
pub use verify::{
    fiber_algebra, verify, Comparison, Relation, Statement, VerificationReport, Verdict, VerifyOptions,
};

use crate::dg::DgAlgebra;
use crate::error::Result;
use crate::homology::SelectionOrder;
use crate::model::acyclic_closure;
use crate::module::FiniteModule;
use crate::resolution::resolve_module;

/// `eps_{i,j}` of `A`: the variables of the acyclic closure of `k`.
pub fn deviations(a: &DgAlgebra, max_hdeg: usize) -> Result<DeviationTable> {
    Ok(acyclic_closure(a, max_hdeg)?.eps)
}

/// Betti numbers of `m` over `a`; of `k` when `m` is `None`.
///
/// For `k` these are the free ranks of the acyclic closure, i.e. the number
/// of monomials in its variables in each bidegree.
pub fn betti_numbers(a: &DgAlgebra, m: Option<&FiniteModule>, max_hdeg: usize) -> Result<BettiTable> {
    if let Some(m) = m {
        return Ok(resolve_module(a, m, max_hdeg, SelectionOrder::Forward)?.betti);
    }
    let eps = deviations(a, max_hdeg)?;
    let series = bigraded_poincare(&eps, max_hdeg)?;
    let mut t = BettiTable::new(max_hdeg, eps.bound);
    for i in 0..=max_hdeg {
        for j in 0..=eps.bound {
            t.set(i, j, series.coefficient(i, j) as u64);
        }
        t.set_certified(i, (1..=i).all(|r| eps.is_certified(r)));
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::TruncatedBase;
    use crate::fixtures;
    use crate::linear::Field;

    const Q: Field = Field::Rational;

    #[test]
    fn deviations_of_truncated_power() {
        let b = fixtures::truncated_power(Q, 2, 2, 12).unwrap();
        let eps = deviations(&b, 10).unwrap();
        let mut expected = vec![0; 11];
        expected[3] = 1;
        expected[6] = 1;
        assert_eq!(eps.marginals(), expected);
        assert_eq!(eps.certified_through(), Some(10));
    }

    #[test]
    fn deviations_of_the_field_vanish() {
        let k = DgAlgebra::new(TruncatedBase::residue_field(Q, 6));
        assert_eq!(deviations(&k, 6).unwrap().total(), 0);
    }

    #[test]
    fn betti_numbers_of_residue_field() {
        let r = fixtures::dual_numbers(Q, 10).unwrap();
        assert_eq!(betti_numbers(&r, None, 8).unwrap().marginals(), vec![1; 9]);
        let ci = fixtures::complete_intersection(Q, 10).unwrap();
        let b = betti_numbers(&ci, None, 8).unwrap();
        assert_eq!(b.marginals(), (1..=9).collect::<Vec<u64>>());
        assert_eq!(b.certified_through(), Some(8));
    }

    #[test]
    fn two_even_generators_have_sparse_betti_numbers() {
        let a = fixtures::two_even_generators(Q, 12).unwrap();
        let b = betti_numbers(&a, None, 12).unwrap();
        let nonzero: Vec<usize> = (0..=12).filter(|&i| b.marginal(i) > 0).collect();
        assert_eq!(nonzero, vec![0, 3, 7, 10]);
        assert!(b.marginals().iter().all(|&x| x <= 1));
    }

    #[test]
    fn explicit_module_goes_through_the_resolution() {
        let r = fixtures::dual_numbers(Q, 8).unwrap();
        let f = FiniteModule::free(r.base().clone()).unwrap();
        assert_eq!(betti_numbers(&r, Some(&f), 4).unwrap().marginals(), vec![1, 0, 0, 0, 0]);
    }
}
