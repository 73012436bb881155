//! Reports: one serializable value per run, rendered either as aligned text
//! or as JSON. Both renderings read the same fields.

use std::fmt::Write;

use serde::Serialize;

use semifree::invariants::{Classification, CountTable, GrowthVerdict, PowerSeries, VerificationReport};

/// A count table in the shape reports use: nonzero entries plus per-row
/// totals and completeness flags.
#[derive(Clone, Debug, Serialize)]
pub struct TableView {
    pub totals: Vec<u64>,
    pub complete: Vec<bool>,
    pub complete_through: Option<usize>,
    /// `[hdeg, intdeg, count]` for every nonzero entry.
    pub entries: Vec<[u64; 3]>,
}

impl From<&CountTable> for TableView {
    fn from(t: &CountTable) -> Self {
        let mut entries = Vec::new();
        for i in 0..=t.max_hdeg {
            for j in 0..=t.bound {
                let c = t.get(i, j);
                if c > 0 {
                    entries.push([i as u64, j as u64, c]);
                }
            }
        }
        Self {
            totals: t.marginals(),
            complete: (0..=t.max_hdeg).map(|i| t.is_certified(i)).collect(),
            complete_through: t.certified_through(),
            entries,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VariableView {
    pub name: String,
    pub hdeg: usize,
    pub intdeg: usize,
    pub kind: String,
    pub boundary: String,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Outcome {
    Deviations {
        deviations: TableView,
    },
    Model {
        map: String,
        switching: String,
        variables: Vec<VariableView>,
        /// Variables adjoined below the switching degree.
        n: TableView,
        /// Variables adjoined at or above it.
        eps: TableView,
    },
    Betti {
        module: String,
        betti: TableView,
    },
    Poincare {
        series: PowerSeries,
    },
    Classify {
        classification: Classification,
        deviations: TableView,
        model_counts: TableView,
    },
    Verify {
        report: VerificationReport,
    },
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub job: String,
    pub field: String,
    pub max_hdeg: usize,
    pub max_intdeg: usize,
    pub result: Outcome,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{}  {}  field {}  max_hdeg {}  max_intdeg {}",
            self.command, self.job, self.field, self.max_hdeg, self.max_intdeg
        );
        match &self.result {
            Outcome::Deviations { deviations } => table(&mut out, "eps", deviations),
            Outcome::Model {
                map,
                switching,
                variables,
                n,
                eps,
            } => {
                let _ = writeln!(out, "map {map}  switching degree {switching}");
                variable_list(&mut out, variables);
                table(&mut out, "n", n);
                table(&mut out, "eps", eps);
            }
            Outcome::Betti { module, betti } => {
                let _ = writeln!(out, "module {module}");
                table(&mut out, "beta", betti);
            }
            Outcome::Poincare { series } => poincare(&mut out, series),
            Outcome::Classify {
                classification,
                deviations,
                model_counts,
            } => {
                let _ = writeln!(out, "verdict {}", verdict_line(&classification.verdict));
                table(&mut out, "eps", deviations);
                table(&mut out, "n over the cover", model_counts);
            }
            Outcome::Verify { report } => verification(&mut out, report),
        }
        out
    }
}

fn verdict_line(v: &GrowthVerdict) -> String {
    match v {
        GrowthVerdict::PerfectResidueField { last_deviation } => {
            format!("{}  last deviation {last_deviation}", v.id())
        }
        GrowthVerdict::DerivedCiUpToBound {
            last_deviation,
            polynomial_degree,
        } => format!(
            "{}  last deviation {last_deviation}  polynomial degree {polynomial_degree}",
            v.id()
        ),
        GrowthVerdict::NotDciWithinBound { witness_hdeg } => format!("{}  witness hdeg {witness_hdeg}", v.id()),
        GrowthVerdict::InconclusiveAtBound => v.id().to_string(),
    }
}

fn table(out: &mut String, name: &str, t: &TableView) {
    let _ = writeln!(out, "{name}:");
    let _ = writeln!(out, "  {:>4}  {:>8}  {:<8}  by internal degree", "i", "total", "complete");
    for (i, total) in t.totals.iter().enumerate() {
        let cells: Vec<String> = t
            .entries
            .iter()
            .filter(|e| e[0] == i as u64)
            .map(|e| format!("{}:{}", e[1], e[2]))
            .collect();
        let _ = writeln!(
            out,
            "  {:>4}  {:>8}  {:<8}  {}",
            i,
            total,
            if t.complete[i] { "yes" } else { "no" },
            cells.join(" ")
        );
    }
    // Trailing spaces from empty cell lists are noise in diffs.
    trim_lines(out);
}

fn trim_lines(out: &mut String) {
    let trimmed: Vec<&str> = out.lines().map(str::trim_end).collect();
    *out = trimmed.join("\n");
    out.push('\n');
}

fn variable_list(out: &mut String, vars: &[VariableView]) {
    if vars.is_empty() {
        let _ = writeln!(out, "no variables adjoined");
        return;
    }
    let width = vars.iter().map(|v| v.name.len()).max().unwrap_or(0).max(4);
    let _ = writeln!(out, "  {:<width$}  {:>4}  {:>6}  {:<12}  boundary", "name", "hdeg", "intdeg", "kind");
    for v in vars {
        let _ = writeln!(
            out,
            "  {:<width$}  {:>4}  {:>6}  {:<12}  {}",
            v.name, v.hdeg, v.intdeg, v.kind, v.boundary
        );
    }
}

fn poincare(out: &mut String, s: &PowerSeries) {
    let exact = s.exact_through.map_or("none".to_string(), |e| e.to_string());
    let _ = writeln!(out, "order {}  exact through {exact}", s.order);
    let _ = writeln!(out, "  {:>4}  {:>12}  exact", "n", "coefficient");
    for (n, c) in s.coefficients.iter().enumerate() {
        let ok = s.exact_through.is_some_and(|e| n <= e);
        let _ = writeln!(out, "  {:>4}  {:>12}  {}", n, c, if ok { "yes" } else { "no" });
    }
}

fn verification(out: &mut String, r: &VerificationReport) {
    let _ = writeln!(out, "statement {}  fixture {}  verdict {}", r.statement, r.fixture, r.verdict);
    if !r.comparisons.is_empty() {
        let width = r.comparisons.iter().map(|c| c.label.len()).max().unwrap_or(0).max(10);
        let _ = writeln!(out, "  {:<width$}  {:>10}  {:<9}  {:>10}  status", "comparison", "lhs", "relation", "rhs");
        for c in &r.comparisons {
            let status = match (c.certified, c.holds()) {
                (false, _) => "uncertified",
                (true, true) => "holds",
                (true, false) => "FAILS",
            };
            let _ = writeln!(
                out,
                "  {:<width$}  {:>10}  {:<9}  {:>10}  {status}",
                c.label,
                c.lhs,
                c.relation.to_string(),
                c.rhs
            );
        }
    }
    for u in &r.undecided {
        let _ = writeln!(out, "undecided: {u}");
    }
    for n in &r.notes {
        let _ = writeln!(out, "note: {n}");
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> CountTable {
        let mut t = CountTable::new(2, 3);
        t.set(1, 1, 2);
        t.set(2, 2, 1);
        t.set(2, 3, 4);
        t.set_certified(0, true);
        t.set_certified(1, true);
        t
    }

    #[test]
    fn table_view_keeps_nonzero_entries() {
        let v = TableView::from(&sample());
        assert_eq!(v.totals, vec![0, 2, 5]);
        assert_eq!(v.entries, vec![[1, 1, 2], [2, 2, 1], [2, 3, 4]]);
        assert_eq!(v.complete_through, Some(1));
    }

    #[test]
    fn text_and_json_carry_the_same_numbers() {
        let r = Report {
            command: "deviations".into(),
            job: "t".into(),
            field: "Q".into(),
            max_hdeg: 2,
            max_intdeg: 3,
            result: Outcome::Deviations {
                deviations: TableView::from(&sample()),
            },
        };
        let text = r.to_text();
        assert!(text.contains("     2         5  no        2:1 3:4"), "{text}");
        let json: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(json["result"]["deviations"]["totals"][2], 5);
        assert_eq!(json["result"]["kind"], "deviations");
        assert!(!text.lines().any(|l| l.ends_with(' ')));
    }
}
