use std::sync::Arc;

use semifree::dg::{DgAlgebra, DgMorphism};
use semifree::homology::SelectionOrder;
use semifree::invariants::{
    betti_numbers, classify_growth, deviations, poincare_from_deviations, verify, Statement, Verdict, VerifyOptions,
};
use semifree::model::{acyclic_closure, build_model, Model, ModelSpec, Switching};
use semifree::module::FiniteModule;

use crate::job::{Command, Job};
use crate::report::{Outcome, Report, TableView, VariableView};

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    /// Bad arguments or a job that does not say enough.
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Kernel(#[from] semifree::Error),
}

/// Command-line settings that override the job's `[task]` block.
#[derive(Debug, Default)]
pub struct Overrides {
    pub switching: Option<Switching>,
    pub order: Option<usize>,
    pub statement: Option<Statement>,
    pub koszul_variable: Option<String>,
    pub module: Option<FiniteModule>,
}

/// Whether the report should turn into exit status 3.
pub fn is_failure(r: &Report) -> bool {
    matches!(&r.result, Outcome::Verify { report } if report.verdict == Verdict::Fail)
}

fn variables(m: &Model) -> Vec<VariableView> {
    let a = m.algebra();
    a.variables()[m.first_new..]
        .iter()
        .map(|v| VariableView {
            name: v.name.clone(),
            hdeg: v.hdeg,
            intdeg: v.intdeg,
            kind: v.kind.name().to_string(),
            boundary: a.format_element(&v.boundary),
        })
        .collect()
}

fn model_outcome(map: &str, m: &Model) -> Outcome {
    Outcome::Model {
        map: map.into(),
        switching: m.switching.to_string(),
        variables: variables(m),
        n: TableView::from(&m.n),
        eps: TableView::from(&m.eps),
    }
}

/// `S -> A` from the polynomial cover when `A` has degree-0 base variables,
/// `k -> A` otherwise.
fn structure_map(a: &DgAlgebra) -> Result<(&'static str, DgMorphism), RunError> {
    let target = Arc::new(a.clone());
    if a.base().variables().iter().any(|v| v.hdeg == 0) {
        Ok(("cover", DgMorphism::cover(target)?))
    } else {
        Ok(("unit", DgMorphism::unit(target)?))
    }
}

pub fn run(job: &Job, name: &str, command: Command, o: Overrides) -> Result<Report, RunError> {
    let a = &job.algebra;
    let n = job.max_hdeg;
    let t = &job.task;
    let result = match command {
        Command::Deviations => Outcome::Deviations {
            deviations: TableView::from(&deviations(a, n)?),
        },
        Command::AcyclicClosure => model_outcome("augmentation", &acyclic_closure(a, n)?),
        Command::MinimalModel => {
            let (map_name, map) = structure_map(a)?;
            let switching = o.switching.or(t.switching).unwrap_or(Switching::Infinite);
            let m = build_model(&ModelSpec {
                map,
                switching,
                max_hdeg: n,
                order: SelectionOrder::Forward,
            })?;
            model_outcome(map_name, &m)
        }
        Command::Betti => {
            let module = o.module.as_ref().or(job.module.as_ref());
            Outcome::Betti {
                module: if module.is_some() { "presented" } else { "residue field" }.into(),
                betti: TableView::from(&betti_numbers(a, module, n)?),
            }
        }
        Command::Poincare => {
            let order = o.order.or(t.order).unwrap_or(n);
            Outcome::Poincare {
                series: poincare_from_deviations(&deviations(a, n)?, order)?,
            }
        }
        Command::Classify => {
            let c = classify_growth(a, n)?;
            Outcome::Classify {
                deviations: TableView::from(&c.deviations),
                model_counts: TableView::from(&c.model_counts),
                classification: c,
            }
        }
        Command::Verify => {
            let statement = o
                .statement
                .or(t.statement)
                .ok_or_else(|| RunError::Usage("verify needs a statement (`--statement` or `statement =` in [task])".into()))?;
            let opts = VerifyOptions {
                max_hdeg: n,
                switching: match o.switching.or(t.switching) {
                    Some(Switching::Finite(s)) => Some(s),
                    Some(Switching::Infinite) => {
                        return Err(RunError::Usage("switching-compare needs a finite switching degree".into()))
                    }
                    None => None,
                },
                koszul_variable: o.koszul_variable.or_else(|| t.koszul_variable.clone()),
            };
            Outcome::Verify {
                report: verify(statement, a, name, &opts)?,
            }
        }
    };
    Ok(Report {
        command: command.name().into(),
        job: name.into(),
        field: job.field.to_string(),
        max_hdeg: n,
        max_intdeg: job.max_intdeg,
        result,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::job::parse_job_str;

    fn job(rels: &str, h: usize, j: usize) -> Job {
        parse_job_str(&format!(
            "field = Q\n[base]\nvar x intdeg=1\nvar y intdeg=1\n{rels}\n[bounds]\nmax_hdeg = {h}\nmax_intdeg = {j}\n"
        ))
        .unwrap()
    }

    #[test]
    fn poincare_of_a_complete_intersection() {
        let j = job("rel x^2\nrel y^2", 9, 11);
        let r = run(&j, "ci", Command::Poincare, Overrides { order: Some(9), ..Default::default() }).unwrap();
        let Outcome::Poincare { series } = r.result else { panic!() };
        assert_eq!(series.coefficients, (1..=10).collect::<Vec<i64>>());
        assert!(series.is_exact());
    }

    #[test]
    fn verify_without_statement_is_a_usage_error() {
        let j = job("rel x^2", 4, 6);
        assert!(matches!(run(&j, "r", Command::Verify, Overrides::default()), Err(RunError::Usage(_))));
    }

    #[test]
    fn quasi_fibers_passes_on_the_non_complete_intersection() {
        let j = job("rel x^2\nrel x*y", 6, 8);
        let o = Overrides {
            statement: Some(Statement::QuasiFibers),
            ..Default::default()
        };
        let r = run(&j, "nci", Command::Verify, o).unwrap();
        assert!(!is_failure(&r));
        let Outcome::Verify { report } = r.result else { panic!() };
        assert_eq!(report.verdict, Verdict::Pass);
    }

    #[test]
    fn minimal_model_uses_the_cover_for_rings() {
        let j = job("rel x^2\nrel y^2", 4, 6);
        let r = run(&j, "ci", Command::MinimalModel, Overrides::default()).unwrap();
        let Outcome::Model { map, variables, .. } = r.result else { panic!() };
        assert_eq!(map, "cover");
        assert_eq!(variables.len(), 2);
        assert_eq!(variables[0].hdeg, 1);
    }

    #[test]
    fn failed_verification_is_a_failure() {
        let j = job("rel x^2", 4, 6);
        let o = Overrides {
            statement: Some(Statement::Halperin),
            ..Default::default()
        };
        let mut r = run(&j, "r", Command::Verify, o).unwrap();
        assert!(!is_failure(&r));
        if let Outcome::Verify { report } = &mut r.result {
            report.verdict = Verdict::Fail;
        }
        assert!(is_failure(&r));
    }
}
