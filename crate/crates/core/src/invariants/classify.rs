use serde::Serialize;

use crate::dg::DgAlgebra;
use crate::error::Result;
use crate::invariants::{CountTable, DeviationTable};
use crate::model::{acyclic_closure, minimal_model_over_cover};

/// Growth verdict for the Betti numbers of `k`, relative to the bounds used.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum GrowthVerdict {
    /// Deviations stop at `last_deviation` with no even ones, and the model
    /// over the cover has no odd variables.
    PerfectResidueField { last_deviation: usize },
    /// Deviations vanish from `last_deviation + 1` through the certified
    /// range; Betti numbers grow like a polynomial of this degree.
    DerivedCiUpToBound {
        last_deviation: usize,
        polynomial_degree: i64,
    },
    NotDciWithinBound { witness_hdeg: usize },
    InconclusiveAtBound,
}

impl GrowthVerdict {
    pub fn id(&self) -> &'static str {
        match self {
            GrowthVerdict::PerfectResidueField { .. } => "perfect-residue-field",
            GrowthVerdict::DerivedCiUpToBound { .. } => "derived-ci-up-to-bound",
            GrowthVerdict::NotDciWithinBound { .. } => "not-dci-within-bound",
            GrowthVerdict::InconclusiveAtBound => "inconclusive-at-bound",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Classification {
    #[serde(flatten)]
    pub verdict: GrowthVerdict,
    pub max_hdeg: usize,
    pub max_intdeg: usize,
    pub deviations: DeviationTable,
    /// Variables of the minimal model over the cover, by bidegree.
    pub model_counts: CountTable,
}

/// No dg variables and every base variable in homological degree 0.
pub fn is_ring(a: &DgAlgebra) -> bool {
    a.variables().is_empty() && a.base().variables().iter().all(|v| v.hdeg == 0)
}

pub fn classify_growth(a: &DgAlgebra, max_hdeg: usize) -> Result<Classification> {
    let eps = acyclic_closure(a, max_hdeg)?.eps;
    let model = minimal_model_over_cover(a, max_hdeg)?.n;
    let verdict = decide(a, &eps, &model, max_hdeg);
    Ok(Classification {
        verdict,
        max_hdeg,
        max_intdeg: a.bound(),
        deviations: eps,
        model_counts: model,
    })
}

fn decide(a: &DgAlgebra, eps: &CountTable, model: &CountTable, max_hdeg: usize) -> GrowthVerdict {
    let ring = is_ring(a);
    // A positive count is never an artefact of truncation.
    if ring {
        if let Some(i) = (3..=max_hdeg).find(|&i| eps.marginal(i) > 0) {
            return GrowthVerdict::NotDciWithinBound { witness_hdeg: i };
        }
    }
    let Some(cert) = eps.certified_through() else {
        return GrowthVerdict::InconclusiveAtBound;
    };
    if (cert + 1..=max_hdeg).any(|i| eps.marginal(i) > 0) {
        return GrowthVerdict::InconclusiveAtBound;
    }
    let last = (1..=cert).filter(|&i| eps.marginal(i) > 0).max().unwrap_or(0);
    // Rings: one vanishing deviation past 2 settles it. Otherwise ask for a
    // zero tail covering both parities.
    let enough = if ring { cert >= 3 } else { cert >= last + 2 };
    if !enough {
        return GrowthVerdict::InconclusiveAtBound;
    }
    let even: u64 = (1..=cert).filter(|i| i % 2 == 0).map(|i| eps.marginal(i)).sum();
    let odd_model = (1..=max_hdeg).any(|i| i % 2 == 1 && model.marginal(i) > 0);
    if even == 0 && !odd_model {
        GrowthVerdict::PerfectResidueField { last_deviation: last }
    } else {
        GrowthVerdict::DerivedCiUpToBound {
            last_deviation: last,
            polynomial_degree: even as i64 - 1,
        }
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::base::{truncate_quotient, BasePresentation, TruncatedBase};
    use crate::dg::{DgElement, VariableKind};
    use crate::linear::Field;

    fn ring(rels: &[&str], bound: usize) -> DgAlgebra {
        let mut p = BasePresentation::polynomial_ring(Field::Rational, &[("x", 1), ("y", 1)]).unwrap();
        for r in rels {
            p.add_relation(r).unwrap();
        }
        DgAlgebra::new(Arc::new(truncate_quotient(&p, bound)))
    }

    #[test]
    fn complete_intersection() {
        let c = classify_growth(&ring(&["x^2", "y^2"], 8), 6).unwrap();
        assert_eq!(
            c.verdict,
            GrowthVerdict::DerivedCiUpToBound {
                last_deviation: 2,
                polynomial_degree: 1
            }
        );
    }

    #[test]
    fn not_a_complete_intersection() {
        let c = classify_growth(&ring(&["x^2", "x*y"], 6), 4).unwrap();
        assert_eq!(c.verdict, GrowthVerdict::NotDciWithinBound { witness_hdeg: 3 });
    }

    #[test]
    fn polynomial_generator_in_degree_two() {
        let mut a = DgAlgebra::new(TruncatedBase::residue_field(Field::Rational, 12));
        a.declare_variable("x1", 2, 2, VariableKind::Polynomial, DgElement::zero(1, 2))
            .unwrap();
        let c = classify_growth(&a, 6).unwrap();
        assert_eq!(c.verdict, GrowthVerdict::PerfectResidueField { last_deviation: 3 });
    }

    #[test]
    fn regular_ring_and_field_are_perfect() {
        let c = classify_growth(&ring(&[], 6), 4).unwrap();
        assert_eq!(c.verdict, GrowthVerdict::PerfectResidueField { last_deviation: 1 });
        let k = DgAlgebra::new(TruncatedBase::residue_field(Field::Rational, 4));
        let c = classify_growth(&k, 4).unwrap();
        assert_eq!(c.verdict, GrowthVerdict::PerfectResidueField { last_deviation: 0 });
    }

    #[test]
    fn too_small_a_bound_is_inconclusive() {
        let c = classify_growth(&ring(&["x^2", "y^2"], 2), 6).unwrap();
        assert_eq!(c.verdict, GrowthVerdict::InconclusiveAtBound);
    }
}
