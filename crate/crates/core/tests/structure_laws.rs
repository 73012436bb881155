//! Sign and structure laws on random homogeneous elements, over Q, F2 and F3.

mod support;

use std::sync::OnceLock;

use proptest::prelude::*;

use semifree::dg::{DgAlgebra, DgElement, Monomial, VariableKind};
use semifree::linear::{binomial, Field};

use support::{build_element, element_seed, law_fixtures, nonempty_bidegrees, sign};

const BOUND: usize = 16;

struct Fixture {
    name: String,
    a: DgAlgebra,
    /// Bidegrees `<= (6, 8)` for two-factor laws.
    wide: Vec<(usize, usize)>,
    /// Bidegrees `<= (4, 5)` for three-factor laws.
    narrow: Vec<(usize, usize)>,
}

fn fixtures_over(field: Field) -> Vec<Fixture> {
    law_fixtures(field, BOUND)
        .into_iter()
        .map(|(name, a)| Fixture {
            wide: nonempty_bidegrees(&a, 6, 8),
            narrow: nonempty_bidegrees(&a, 4, 5),
            name,
            a,
        })
        .collect()
}

fn all_fixtures() -> &'static [(Field, Vec<Fixture>)] {
    static CELL: OnceLock<Vec<(Field, Vec<Fixture>)>> = OnceLock::new();
    CELL.get_or_init(|| {
        [Field::Rational, Field::prime(2).unwrap(), Field::prime(3).unwrap()]
            .into_iter()
            .map(|f| (f, fixtures_over(f)))
            .collect()
    })
}

fn same(x: &DgElement, y: &DgElement) -> bool {
    x.terms == y.terms
}

fn for_each_fixture(mut check: impl FnMut(&Field, &Fixture) -> Result<(), TestCaseError>) -> Result<(), TestCaseError> {
    for (field, fixtures) in all_fixtures() {
        for f in fixtures {
            check(field, f)?;
        }
    }
    Ok(())
}

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 256,
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn differential_squares_to_zero(seed in element_seed()) {
        for_each_fixture(|field, f| {
            let u = build_element(&f.a, &f.wide, &seed);
            let dd = f.a.differential(&f.a.differential(&u).unwrap()).unwrap();
            prop_assert!(dd.is_zero(), "{} over {}: d^2 of {} is {}", f.name, field, f.a.format_element(&u), f.a.format_element(&dd));
            Ok(())
        })?;
    }

    #[test]
    fn leibniz_rule(s in element_seed(), t in element_seed()) {
        for_each_fixture(|field, f| {
            let a = &f.a;
            let (u, v) = (build_element(a, &f.wide, &s), build_element(a, &f.wide, &t));
            let lhs = a.differential(&a.multiply(&u, &v).unwrap()).unwrap();
            let mut rhs = a.multiply(&a.differential(&u).unwrap(), &v).unwrap();
            rhs.add_scaled(&a.multiply(&u, &a.differential(&v).unwrap()).unwrap(), &sign(a, u.hdeg));
            prop_assert!(same(&lhs, &rhs), "{} over {}: Leibniz fails on {} and {}", f.name, field, a.format_element(&u), a.format_element(&v));
            Ok(())
        })?;
    }

    #[test]
    fn graded_commutativity(s in element_seed(), t in element_seed()) {
        for_each_fixture(|field, f| {
            let a = &f.a;
            let (u, v) = (build_element(a, &f.wide, &s), build_element(a, &f.wide, &t));
            let uv = a.multiply(&u, &v).unwrap();
            let vu = a.multiply(&v, &u).unwrap().scale(&sign(a, u.hdeg * v.hdeg));
            prop_assert!(same(&uv, &vu), "{} over {}: {} and {} do not graded-commute", f.name, field, a.format_element(&u), a.format_element(&v));
            Ok(())
        })?;
    }

    #[test]
    fn odd_elements_square_to_zero(s in element_seed()) {
        for_each_fixture(|field, f| {
            let a = &f.a;
            let u = build_element(a, &f.wide, &s);
            if u.hdeg % 2 == 1 {
                let sq = a.multiply(&u, &u).unwrap();
                prop_assert!(sq.is_zero(), "{} over {}: square of {} is {}", f.name, field, a.format_element(&u), a.format_element(&sq));
            }
            Ok(())
        })?;
    }

    #[test]
    fn associativity(s in element_seed(), t in element_seed(), r in element_seed()) {
        for_each_fixture(|field, f| {
            let a = &f.a;
            let (u, v, w) = (
                build_element(a, &f.narrow, &s),
                build_element(a, &f.narrow, &t),
                build_element(a, &f.narrow, &r),
            );
            let left = a.multiply(&a.multiply(&u, &v).unwrap(), &w).unwrap();
            let right = a.multiply(&u, &a.multiply(&v, &w).unwrap()).unwrap();
            prop_assert!(same(&left, &right), "{} over {}: product not associative", f.name, field);
            Ok(())
        })?;
    }

    #[test]
    fn divided_power_laws(p in 1u32..5, q in 1u32..5) {
        for_each_fixture(|field, f| {
            let a = &f.a;
            for (v, var) in a.variables().iter().enumerate() {
                if var.kind != VariableKind::DividedPower || (p + q) as usize * var.intdeg > BOUND {
                    continue;
                }
                let y = |e: u32| a.term(0, Monomial::even_var(v as u32, e), a.field().one());
                // y^(p) y^(q) = binom(p+q, p) y^(p+q)
                let prod = a.multiply(&y(p), &y(q)).unwrap();
                let c = a.field().from_biguint(&binomial((p + q) as u64, p as u64));
                prop_assert!(same(&prod, &y(p + q).scale(&c)), "{} over {}: y^({p}) y^({q})", f.name, field);
                // d(y^(p)) = d(y) y^(p-1)
                let d = a.differential(&y(p)).unwrap();
                let expected = a.multiply(&a.differential(&y(1)).unwrap(), &y(p - 1)).unwrap();
                prop_assert!(same(&d, &expected), "{} over {}: d y^({p})", f.name, field);
                // y^p = p! y^(p)
                let mut power = a.one();
                for _ in 0..p {
                    power = a.multiply(&power, &y(1)).unwrap();
                }
                let fact = (1..=p as i64).product::<i64>();
                prop_assert!(same(&power, &y(p).scale(&a.field().from_i64(fact))), "{} over {}: y^{p}", f.name, field);
            }
            Ok(())
        })?;
    }
}

#[test]
fn closures_exercise_divided_powers() {
    for (field, fixtures) in all_fixtures() {
        let with_dp = fixtures
            .iter()
            .filter(|f| f.a.variables().iter().any(|v| v.kind == VariableKind::DividedPower))
            .count();
        assert!(with_dp >= 3, "only {with_dp} fixtures with divided powers over {field}");
    }
}

#[test]
fn every_fixture_has_positive_degrees() {
    let (_, fixtures) = &all_fixtures()[0];
    for f in fixtures {
        assert!(f.wide.len() >= 2, "{} is concentrated in degree zero", f.name);
    }
}
