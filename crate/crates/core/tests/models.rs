use semifree::fixtures;
use semifree::invariants::{classify_growth, deviations, verify, GrowthVerdict, Statement, Verdict, VerifyOptions};
use semifree::linear::Field;
use semifree::model::{acyclic_closure, minimal_model_over_cover, minimal_model_over_field};

const Q: Field = Field::Rational;

fn nonzero(v: &[u64]) -> Vec<usize> {
    (0..v.len()).filter(|&i| v[i] > 0).collect()
}

#[test]
fn koszul_on_a_power_has_two_deviations() {
    for (d, m) in [(2usize, 2u32), (2, 3), (4, 2)] {
        let n = m as usize * d + 4;
        let a = fixtures::koszul_on_power(Q, d, m, n + d).unwrap();
        assert!(a.is_minimal());
        let eps = deviations(&a, n).unwrap();
        assert_eq!(eps.certified_through(), Some(n), "({d},{m})");
        assert_eq!(nonzero(&eps.marginals()), vec![d + 1, m as usize * d + 2], "({d},{m})");
        assert!(eps.marginals().iter().all(|&e| e <= 1));
    }
}

#[test]
fn truncated_power_and_its_model_have_the_same_deviations() {
    let b = fixtures::truncated_power(Q, 2, 2, 14).unwrap();
    let d = fixtures::koszul_on_power(Q, 2, 2, 14).unwrap();
    assert_eq!(deviations(&b, 10).unwrap().marginals(), deviations(&d, 10).unwrap().marginals());
    let model = minimal_model_over_field(&b, 10).unwrap();
    assert_eq!(model.algebra().variables().len(), 2);
}

#[test]
fn odd_characteristic_does_not_change_small_deviations() {
    for field in [Field::prime(3).unwrap(), Field::prime(5).unwrap()] {
        for (name, a) in fixtures::ring_fixtures(field, 8).unwrap() {
            let over_q = fixtures::ring_fixtures(Q, 8).unwrap();
            let q = &over_q.iter().find(|(n, _)| *n == name).unwrap().1;
            assert_eq!(
                deviations(&a, 6).unwrap().marginals(),
                deviations(q, 6).unwrap().marginals(),
                "{name} over {field}"
            );
        }
    }
}

#[test]
fn cover_model_of_a_complete_intersection_is_koszul_on_the_relations() {
    let a = fixtures::complete_intersection(Q, 10).unwrap();
    let m = minimal_model_over_cover(&a, 6).unwrap();
    assert_eq!(m.n.marginals(), vec![0, 2, 0, 0, 0, 0, 0]);
    assert_eq!(m.n.get(1, 2), 2);
}

#[test]
fn growth_classification_of_the_fixtures() {
    let ci = classify_growth(&fixtures::complete_intersection(Q, 10).unwrap(), 6).unwrap();
    assert_eq!(
        ci.verdict,
        GrowthVerdict::DerivedCiUpToBound {
            last_deviation: 2,
            polynomial_degree: 1
        }
    );
    let nci = classify_growth(&fixtures::non_complete_intersection(Q, 8).unwrap(), 6).unwrap();
    assert!(matches!(nci.verdict, GrowthVerdict::NotDciWithinBound { .. }));
    let d = classify_growth(&fixtures::koszul_on_power(Q, 2, 2, 14).unwrap(), 10).unwrap();
    assert_eq!(
        d.verdict,
        GrowthVerdict::DerivedCiUpToBound {
            last_deviation: 6,
            polynomial_degree: 0
        }
    );
}

#[test]
fn no_statement_fails_on_any_fixture() {
    let mut cases = Vec::new();
    for (name, a) in fixtures::ring_fixtures(Q, 10).unwrap() {
        cases.push((name.to_string(), a));
    }
    cases.push(("D(2,2)".into(), fixtures::koszul_on_power(Q, 2, 2, 14).unwrap()));
    cases.push(("B(2,2)".into(), fixtures::truncated_power(Q, 2, 2, 14).unwrap()));
    cases.push(("k[x1,x2]".into(), fixtures::two_even_generators(Q, 14).unwrap()));
    cases.push(("K(t)".into(), fixtures::koszul_over_ring(Q, 10).unwrap()));
    let mut passed = 0;
    for (name, a) in &cases {
        for s in Statement::ALL {
            match verify(s, a, name, &VerifyOptions::new(8)) {
                Ok(r) => {
                    assert_ne!(r.verdict, Verdict::Fail, "{s} on {name}: {:?}", r.failures().collect::<Vec<_>>());
                    passed += usize::from(r.verdict == Verdict::Pass);
                }
                Err(e) => assert!(e.to_string().len() > 10, "{s} on {name}: terse rejection"),
            }
        }
    }
    assert!(passed >= 40, "only {passed} passing checks");
}

#[test]
fn closure_variables_are_named_and_bigraded() {
    let a = fixtures::dual_numbers(Q, 8).unwrap();
    let c = acyclic_closure(&a, 4).unwrap();
    let vars = c.algebra().variables();
    assert_eq!(vars.len(), 2);
    assert_eq!((vars[0].hdeg, vars[0].intdeg), (1, 1));
    assert_eq!((vars[1].hdeg, vars[1].intdeg), (2, 2));
}
