//! The kernel against an independent brute-force resolution engine.

mod support;

use semifree::base::{truncate_quotient, BasePresentation};
use semifree::fixtures;
use semifree::homology::SelectionOrder;
use semifree::invariants::{betti_numbers, deviations};
use semifree::linear::Field;
use semifree::module::FiniteModule;
use semifree::resolution::resolve_module;

use support::oracle::{deviation_marginals, deviations_from_betti, resolve_residue_field};

const Q: Field = Field::Rational;

#[test]
fn oracle_on_a_polynomial_ring_is_the_koszul_complex() {
    let a = fixtures::ring(Q, &["x", "y", "z"], &[], 6).unwrap();
    let res = resolve_residue_field(a.base(), 5);
    assert_eq!(res.marginals(), vec![1, 3, 3, 1, 0, 0]);
    assert_eq!(res.total(2, 2), 3);
    let eps = deviations_from_betti(&res);
    assert_eq!(deviation_marginals(&eps), vec![0, 3, 0, 0, 0, 0]);
}

#[test]
fn oracle_on_dual_numbers_in_two_characteristics() {
    for field in [Q, Field::prime(2).unwrap()] {
        let a = fixtures::dual_numbers(field, 10).unwrap();
        let res = resolve_residue_field(a.base(), 8);
        assert_eq!(res.marginals(), vec![1; 9], "over {field}");
        for i in 0..=8 {
            assert_eq!(res.total(i, i), 1);
        }
        let eps = deviation_marginals(&deviations_from_betti(&res));
        assert_eq!(eps, vec![0, 1, 1, 0, 0, 0, 0, 0, 0]);
    }
}

#[test]
fn oracle_deviations_of_the_non_complete_intersection() {
    let a = fixtures::non_complete_intersection(Q, 8).unwrap();
    let eps = deviation_marginals(&deviations_from_betti(&resolve_residue_field(a.base(), 6)));
    assert!(eps.iter().all(|&e| e >= 0));
    assert!(eps[1..].iter().all(|&e| e > 0), "{eps:?}");
}

#[test]
fn kernel_betti_numbers_match_the_oracle_on_rings() {
    for field in [Q, Field::prime(3).unwrap()] {
        for (name, a) in fixtures::ring_fixtures(field, 9).unwrap() {
            let res = resolve_residue_field(a.base(), 7);
            let closure = betti_numbers(&a, None, 7).unwrap();
            let k = FiniteModule::residue_field(a.base().clone(), 0, 0).unwrap();
            let resolution = resolve_module(&a, &k, 7, SelectionOrder::Forward).unwrap().betti;
            for i in 0..=7 {
                for j in 0..=9 {
                    assert_eq!(closure.get(i, j), res.total(i, j), "{name} over {field}: closure at ({i},{j})");
                    assert_eq!(resolution.get(i, j), res.total(i, j), "{name} over {field}: resolution at ({i},{j})");
                }
            }
        }
    }
}

#[test]
fn kernel_deviations_match_the_oracle_on_rings() {
    for (name, a) in fixtures::ring_fixtures(Q, 8).unwrap() {
        let oracle = deviations_from_betti(&resolve_residue_field(a.base(), 6));
        let eps = deviations(&a, 6).unwrap();
        for (i, row) in oracle.iter().enumerate() {
            for (j, &e) in row.iter().enumerate() {
                assert_eq!(eps.get(i, j) as i64, e, "{name} at ({i},{j})");
            }
        }
    }
}

#[test]
fn oracle_on_a_bigraded_polynomial_algebra() {
    let mut p = BasePresentation::new(Q);
    p.add_graded_variable("x1", 2, 2).unwrap();
    p.add_graded_variable("x2", 6, 6).unwrap();
    let r = truncate_quotient(&p, 12);
    let res = resolve_residue_field(&r, 12);
    let nonzero: Vec<usize> = (0..=12).filter(|&i| res.marginal(i) > 0).collect();
    assert_eq!(nonzero, vec![0, 3, 7, 10]);
    assert!(res.marginals().iter().all(|&b| b <= 1));

    let a = fixtures::two_even_generators(Q, 12).unwrap();
    assert_eq!(betti_numbers(&a, None, 12).unwrap().marginals(), res.marginals());
}
