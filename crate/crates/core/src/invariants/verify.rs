//! Finite-bound checks of structural statements about deviations, Betti
//! numbers and minimal models.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::Serialize;

use crate::base::TruncatedBase;
use crate::dg::{DgAlgebra, DgElement, DgMorphism, Monomial};
use crate::error::{Error, Result};
use crate::homology::{homology_dim, DgComplex, SelectionOrder};
use crate::invariants::classify::{classify_growth, is_ring, GrowthVerdict};
use crate::invariants::series::bigraded_poincare;
use crate::invariants::CountTable;
use crate::model::{
    acyclic_closure, acyclic_closure_ordered, build_model, degree_data, koszul_complex, koszul_on_maximal_ideal,
    minimal_model_over_cover, Model, ModelSpec, Switching,
};
use crate::module::FiniteModule;
use crate::resolution::resolve_module;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Statement {
    KoszulShift,
    DeviationsCompare,
    QuasiFibers,
    ProductFormula,
    SwitchingCompare,
    VanishingPattern,
    Halperin,
    Uniqueness,
    OddToEven,
    FiberBoundedness,
}

impl Statement {
    pub const ALL: [Statement; 10] = [
        Statement::KoszulShift,
        Statement::DeviationsCompare,
        Statement::QuasiFibers,
        Statement::ProductFormula,
        Statement::SwitchingCompare,
        Statement::VanishingPattern,
        Statement::Halperin,
        Statement::Uniqueness,
        Statement::OddToEven,
        Statement::FiberBoundedness,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Statement::KoszulShift => "koszul-shift",
            Statement::DeviationsCompare => "deviations-compare",
            Statement::QuasiFibers => "quasi-fibers",
            Statement::ProductFormula => "product-formula",
            Statement::SwitchingCompare => "switching-compare",
            Statement::VanishingPattern => "vanishing-pattern",
            Statement::Halperin => "halperin",
            Statement::Uniqueness => "uniqueness",
            Statement::OddToEven => "odd-to-even",
            Statement::FiberBoundedness => "fiber-boundedness",
        }
    }
}

impl fmt::Display for Statement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Statement {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Statement::ALL
            .into_iter()
            .find(|st| st.id() == s)
            .ok_or_else(|| Error::Unsupported(format!("unknown statement `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    InconclusiveAtBound,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::InconclusiveAtBound => "inconclusive-at-bound",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Relation {
    Equal,
    AtMost,
    Positive,
    /// An implication whose premise fails, so it holds whatever `lhs` is.
    Vacuous,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Equal => "=",
            Relation::AtMost => "<=",
            Relation::Positive => "> 0",
            Relation::Vacuous => "(vacuous)",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Comparison {
    pub label: String,
    pub hdeg: usize,
    pub intdeg: Option<usize>,
    pub lhs: i64,
    pub relation: Relation,
    pub rhs: i64,
    /// Whether both sides are exact at the bounds used.
    pub certified: bool,
}

impl Comparison {
    pub fn holds(&self) -> bool {
        match self.relation {
            Relation::Equal => self.lhs == self.rhs,
            Relation::AtMost => self.lhs <= self.rhs,
            Relation::Positive => self.lhs > 0,
            Relation::Vacuous => true,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub statement: Statement,
    pub fixture: String,
    pub max_hdeg: usize,
    pub max_intdeg: usize,
    pub verdict: Verdict,
    pub comparisons: Vec<Comparison>,
    /// Reasons a part of the statement could not be decided at these bounds.
    pub undecided: Vec<String>,
    pub notes: Vec<String>,
    pub tables: BTreeMap<String, CountTable>,
}

impl VerificationReport {
    fn new(statement: Statement, fixture: &str, max_hdeg: usize, max_intdeg: usize) -> Self {
        Self {
            statement,
            fixture: fixture.to_string(),
            max_hdeg,
            max_intdeg,
            verdict: Verdict::InconclusiveAtBound,
            comparisons: Vec::new(),
            undecided: Vec::new(),
            notes: Vec::new(),
            tables: BTreeMap::new(),
        }
    }

    fn compare(&mut self, label: String, hdeg: usize, lhs: u64, relation: Relation, rhs: i64, certified: bool) {
        self.comparisons.push(Comparison {
            label,
            hdeg,
            intdeg: None,
            lhs: lhs as i64,
            relation,
            rhs,
            certified,
        });
    }

    fn finish(mut self) -> Self {
        let certified: Vec<_> = self.comparisons.iter().filter(|c| c.certified).collect();
        self.verdict = if certified.iter().any(|c| !c.holds()) {
            Verdict::Fail
        } else if certified.is_empty() || !self.undecided.is_empty() {
            Verdict::InconclusiveAtBound
        } else {
            Verdict::Pass
        };
        self
    }

    pub fn failures(&self) -> impl Iterator<Item = &Comparison> {
        self.comparisons.iter().filter(|c| c.certified && !c.holds())
    }
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub max_hdeg: usize,
    /// Switching degree for `switching-compare`; defaults to 2.
    pub switching: Option<usize>,
    /// Base variable used by `koszul-shift`; defaults to the first one of
    /// homological degree 0.
    pub koszul_variable: Option<String>,
}

impl VerifyOptions {
    pub fn new(max_hdeg: usize) -> Self {
        Self {
            max_hdeg,
            switching: None,
            koszul_variable: None,
        }
    }
}

pub fn verify(statement: Statement, a: &DgAlgebra, fixture: &str, opts: &VerifyOptions) -> Result<VerificationReport> {
    let mut r = VerificationReport::new(statement, fixture, opts.max_hdeg, a.bound());
    match statement {
        Statement::KoszulShift => koszul_shift(a, opts, &mut r)?,
        Statement::DeviationsCompare => deviations_compare(a, opts, &mut r)?,
        Statement::QuasiFibers => quasi_fibers(a, opts, &mut r)?,
        Statement::ProductFormula => product_formula(a, opts, &mut r)?,
        Statement::SwitchingCompare => switching_compare(a, opts, &mut r)?,
        Statement::VanishingPattern => vanishing_pattern(a, opts, &mut r)?,
        Statement::Halperin => halperin(a, opts, &mut r)?,
        Statement::Uniqueness => uniqueness(a, opts, &mut r)?,
        Statement::OddToEven => odd_to_even(a, opts, &mut r)?,
        Statement::FiberBoundedness => fiber_boundedness(a, opts, &mut r)?,
    }
    Ok(r.finish())
}

fn inadmissible(statement: Statement, reason: impl Into<String>) -> Error {
    Error::Inadmissible {
        statement: statement.id().into(),
        reason: reason.into(),
    }
}

fn certified(t: &CountTable, i: usize) -> bool {
    i <= t.max_hdeg && t.is_certified(i)
}

/// Embedding dimension of the degree-0 part of the base.
fn edim_degree_zero(a: &DgAlgebra) -> Result<u64> {
    Ok(a.base().embedding_dimension_by_degree(&[])?.iter().map(|&d| d as u64).sum())
}

/// `eps^K_i = eps^A_i + shift` at `i = 2`, equality above, zero below.
fn compare_shifted(r: &mut VerificationReport, ek: &CountTable, ea: &CountTable, shift: i64, n: usize, name: &str) {
    for i in 1..=n {
        let expected = match i {
            1 => 0,
            2 => ea.marginal(2) as i64 + shift,
            _ => ea.marginal(i) as i64,
        };
        let cert = certified(ek, i) && (i == 1 || certified(ea, i));
        r.compare(format!("eps_{i}({name})"), i, ek.marginal(i), Relation::Equal, expected, cert);
    }
}

fn koszul_shift(a: &DgAlgebra, opts: &VerifyOptions, r: &mut VerificationReport) -> Result<()> {
    let st = Statement::KoszulShift;
    let base = a.base();
    let complex = DgComplex::new(a.clone());
    for j in 1..=a.bound() {
        if homology_dim(&complex, 0, j)? != 0 {
            return Err(inadmissible(st, "H_0(A) must be the residue field"));
        }
    }
    let k = match &opts.koszul_variable {
        Some(name) => base
            .presentation()
            .variable_index(name)
            .filter(|&k| base.variables()[k].hdeg == 0)
            .ok_or_else(|| inadmissible(st, format!("`{name}` is not a base variable of degree 0")))?,
        None => *base
            .degree_zero_variables()
            .first()
            .ok_or_else(|| inadmissible(st, "the degree-0 maximal ideal is zero"))?,
    };
    let x = a.from_base(&base.variable(k)?);
    let kx = koszul_complex(a, &[x])?;
    let ea = acyclic_closure(a, opts.max_hdeg)?.eps;
    let ek = acyclic_closure(&kx, opts.max_hdeg)?.eps;
    r.notes.push(format!("x = {}", base.variables()[k].name));
    compare_shifted(r, &ek, &ea, 1, opts.max_hdeg, "K(x,A)");
    r.tables.insert("eps_A".into(), ea);
    r.tables.insert("eps_K".into(), ek);
    Ok(())
}

fn deviations_compare(a: &DgAlgebra, opts: &VerifyOptions, r: &mut VerificationReport) -> Result<()> {
    let km = koszul_on_maximal_ideal(a)?;
    let ea = acyclic_closure(a, opts.max_hdeg)?.eps;
    let ek = acyclic_closure(&km, opts.max_hdeg)?.eps;
    let m = edim_degree_zero(a)?;
    let n = ea.marginal(1);
    if !certified(&ea, 1) {
        r.undecided.push("eps_1(A), the embedding dimension of H_0(A), is not certified".into());
    }
    r.notes.push(format!("m = edim A_0 = {m}, n = edim H_0(A) = {n}"));
    compare_shifted(r, &ek, &ea, m as i64 - n as i64, opts.max_hdeg, "K(m,A)");
    r.tables.insert("eps_A".into(), ea);
    r.tables.insert("eps_K".into(), ek);
    Ok(())
}

fn quasi_fibers(a: &DgAlgebra, opts: &VerifyOptions, r: &mut VerificationReport) -> Result<()> {
    let ea = acyclic_closure(a, opts.max_hdeg)?.eps;
    let ns = minimal_model_over_cover(a, opts.max_hdeg)?.n;
    // The cover is the polynomial ring on the degree-0 base variables.
    let m = a.base().degree_zero_variables().len() as u64;
    let n = ea.marginal(1);
    if m != edim_degree_zero(a)? {
        r.notes.push("the cover is not a minimal presentation of A_0".into());
    }
    if !certified(&ea, 1) {
        r.undecided.push("eps_1(A) is not certified".into());
    }
    // Degree-1 variables also kill the m - n generators of m_S that vanish
    // in H_0(A), so the shift is m - n.
    r.notes.push(format!("m = {m}, n = {n}, shift at i = 1: m - n = {}", m as i64 - n as i64));
    for i in 1..opts.max_hdeg {
        let mut expected = ea.marginal(i + 1) as i64;
        if i == 1 {
            expected += m as i64 - n as i64;
        }
        let cert = certified(&ns, i) && certified(&ea, i + 1);
        r.compare(format!("n^S_{i}"), i, ns.marginal(i), Relation::Equal, expected, cert);
    }
    r.tables.insert("eps_A".into(), ea);
    r.tables.insert("n_S".into(), ns);
    Ok(())
}

fn betti_of_residue_field(a: &DgAlgebra, max_hdeg: usize, order: SelectionOrder) -> Result<CountTable> {
    let k = FiniteModule::residue_field(a.base().clone(), 0, 0)?;
    Ok(resolve_module(a, &k, max_hdeg, order)?.betti)
}

fn product_formula(a: &DgAlgebra, opts: &VerifyOptions, r: &mut VerificationReport) -> Result<()> {
    let n = opts.max_hdeg;
    let eps = acyclic_closure(a, n)?.eps;
    let betti = betti_of_residue_field(a, n, SelectionOrder::Forward)?;
    let series = bigraded_poincare(&eps, n)?;
    // Both sides are exact in every bidegree within the bound.
    for i in 0..=n {
        for j in 0..=a.bound() {
            let (b, s) = (betti.get(i, j), series.coefficient(i, j));
            if b != 0 || s != 0 {
                r.comparisons.push(Comparison {
                    label: format!("beta_{{{i},{j}}}"),
                    hdeg: i,
                    intdeg: Some(j),
                    lhs: b as i64,
                    relation: Relation::Equal,
                    rhs: s,
                    certified: true,
                });
            }
        }
    }
    let totals = series.collapse()?;
    for (i, &s) in totals.iter().enumerate() {
        let cert = certified(&betti, i) && (1..=i).all(|t| certified(&eps, t));
        r.compare(format!("beta_{i}"), i, betti.marginal(i), Relation::Equal, s, cert);
    }
    r.tables.insert("eps".into(), eps);
    r.tables.insert("betti".into(), betti);
    Ok(())
}

fn switching_compare(a: &DgAlgebra, opts: &VerifyOptions, r: &mut VerificationReport) -> Result<()> {
    let st = Statement::SwitchingCompare;
    let s = opts.switching.unwrap_or(2);
    let rr = if s.is_multiple_of(2) { s } else { s + 1 };
    let n = opts.max_hdeg;
    if 2 * rr + 1 > n {
        return Err(inadmissible(st, format!("needs max_hdeg >= {} for switching degree {s}", 2 * rr + 1)));
    }
    let cover = DgMorphism::cover(Arc::new(a.clone()))?;
    let model = |sw: usize| -> Result<Model> {
        build_model(&ModelSpec {
            map: cover.clone(),
            switching: Switching::Finite(sw),
            max_hdeg: n,
            order: SelectionOrder::Forward,
        })
    };
    let v = model(s)?.all_counts();
    let u = model(2 * rr + 1)?.all_counts();
    let e = acyclic_closure(&koszul_on_maximal_ideal(a)?, n)?.eps;
    r.notes.push(format!("s = {s}, r = {rr}"));
    for i in 1..2 * rr {
        let cert = certified(&v, i) && certified(&e, i + 1);
        r.compare(format!("n_{i}(V)"), i, v.marginal(i), Relation::Equal, e.marginal(i + 1) as i64, cert);
    }
    let i = 2 * rr;
    let cert = certified(&v, i) && certified(&e, i + 1);
    r.compare(format!("n_{i}(V)"), i, v.marginal(i), Relation::AtMost, e.marginal(i + 1) as i64, cert);
    let cert = certified(&v, i) && certified(&u, i);
    r.compare(format!("n_{i}(V) vs n_{i}(U)"), i, v.marginal(i), Relation::AtMost, u.marginal(i) as i64, cert);
    r.tables.insert("n_V".into(), v);
    r.tables.insert("n_U".into(), u);
    r.tables.insert("e".into(), e);
    Ok(())
}

/// `sup {i : H_i(A) != 0}` within the bounds, or `None` if homology is
/// still nonzero in the last two rows.
fn homology_sup(a: &DgAlgebra, max_hdeg: usize) -> Result<(Option<usize>, Vec<u64>)> {
    let complex = DgComplex::new(a.clone());
    let mut dims = vec![0u64; max_hdeg + 1];
    for (i, d) in dims.iter_mut().enumerate() {
        for j in 0..=a.bound() {
            *d += homology_dim(&complex, i as i64, j)? as u64;
        }
    }
    let top = dims.iter().rposition(|&d| d > 0).unwrap_or(0);
    Ok(((top + 2 <= max_hdeg).then_some(top), dims))
}

/// Rows `i` of `A` whose every bidegree lies within the internal bound.
fn algebra_row_complete(a: &DgAlgebra, i: usize) -> bool {
    let concentrated_in_zero = a.variables().is_empty() && a.base().variables().iter().all(|v| v.hdeg == 0);
    (i > 0 && concentrated_in_zero) || degree_data(a).is_some_and(|(t0, lam)| t0 + lam * i <= a.bound())
}

fn vanishing_pattern(a: &DgAlgebra, opts: &VerifyOptions, r: &mut VerificationReport) -> Result<()> {
    let st = Statement::VanishingPattern;
    let n = opts.max_hdeg;
    let (sup, dims) = homology_sup(a, n)?;
    let s = sup.ok_or_else(|| inadmissible(st, "homology is not bounded within max_hdeg"))?;
    if !(s + 1..=n).all(|i| algebra_row_complete(a, i)) {
        r.undecided.push(format!("H_i(A) = 0 for {} <= i <= {n} is not certified", s + 1));
    }
    r.notes.push(format!("s = sup H(A) = {s}; dim H_i(A) = {dims:?}"));
    let ns = minimal_model_over_cover(a, n)?.n;
    for t in s + 1..=n {
        let conclusion = if t % 2 == 0 {
            t
        } else if t > s + 1 {
            t - 1
        } else {
            continue;
        };
        let premise: Vec<usize> = (t + 1..=t + s + 1).collect();
        if premise.last().is_some_and(|&p| p > n) {
            break;
        }
        let label = format!(
            "t = {t} ({}): n_{}..n_{} = 0 => n_{conclusion} = 0",
            if t % 2 == 0 { "even" } else { "odd" },
            t + 1,
            t + s + 1
        );
        if premise.iter().any(|&p| ns.marginal(p) > 0) {
            r.compare(label, conclusion, ns.marginal(conclusion), Relation::Vacuous, 0, true);
        } else {
            let cert = premise.iter().all(|&p| certified(&ns, p))
                && (ns.marginal(conclusion) > 0 || certified(&ns, conclusion));
            r.compare(label, conclusion, ns.marginal(conclusion), Relation::Equal, 0, cert);
        }
    }
    r.tables.insert("n_S".into(), ns);
    Ok(())
}

fn halperin(a: &DgAlgebra, opts: &VerifyOptions, r: &mut VerificationReport) -> Result<()> {
    if !is_ring(a) {
        return Err(inadmissible(Statement::Halperin, "requires a ring (no dg variables, base in degree 0)"));
    }
    let n = opts.max_hdeg;
    let eps = acyclic_closure(a, n)?.eps;
    let not_ci = (3..=n).find(|&i| eps.marginal(i) > 0);
    if let Some(w) = not_ci {
        r.notes.push(format!("eps_{w} > 0, so no certified deviation may vanish"));
        for t in 1..=n {
            r.compare(format!("eps_{t}"), t, eps.marginal(t), Relation::Positive, 0, certified(&eps, t));
        }
    } else {
        r.notes.push("no deviation above 2 within bound: complete intersection pattern".into());
        for t in 3..=n {
            r.compare(format!("eps_{t}"), t, eps.marginal(t), Relation::Equal, 0, certified(&eps, t));
        }
        if !certified(&eps, 3) {
            r.undecided.push("eps_3 is not certified".into());
        }
    }
    r.tables.insert("eps".into(), eps);
    Ok(())
}

fn uniqueness(a: &DgAlgebra, opts: &VerifyOptions, r: &mut VerificationReport) -> Result<()> {
    let n = opts.max_hdeg;
    let pairs = [
        (
            "eps",
            acyclic_closure_ordered(a, n, SelectionOrder::Forward)?.eps,
            acyclic_closure_ordered(a, n, SelectionOrder::Reversed)?.eps,
        ),
        {
            let cover = DgMorphism::cover(Arc::new(a.clone()))?;
            let build = |order| {
                build_model(&ModelSpec {
                    map: cover.clone(),
                    switching: Switching::Infinite,
                    max_hdeg: n,
                    order,
                })
            };
            ("n_S", build(SelectionOrder::Forward)?.n, build(SelectionOrder::Reversed)?.n)
        },
    ];
    for (name, fwd, rev) in pairs {
        for i in 0..=n {
            for j in 0..=a.bound() {
                let (x, y) = (fwd.get(i, j), rev.get(i, j));
                if x != 0 || y != 0 {
                    r.comparisons.push(Comparison {
                        label: format!("{name}_{{{i},{j}}}"),
                        hdeg: i,
                        intdeg: Some(j),
                        lhs: x as i64,
                        relation: Relation::Equal,
                        rhs: y as i64,
                        certified: true,
                    });
                }
            }
            let cert = certified(&fwd, i) && certified(&rev, i);
            r.compare(format!("{name}_{i}"), i, fwd.marginal(i), Relation::Equal, rev.marginal(i) as i64, cert);
        }
        r.tables.insert(format!("{name}_forward"), fwd);
        r.tables.insert(format!("{name}_reversed"), rev);
    }
    Ok(())
}

fn odd_to_even(a: &DgAlgebra, opts: &VerifyOptions, r: &mut VerificationReport) -> Result<()> {
    let n = opts.max_hdeg;
    let (sup, _) = homology_sup(a, n)?;
    if sup.is_none() {
        return Err(inadmissible(Statement::OddToEven, "homology is not bounded within max_hdeg"));
    }
    let eps = acyclic_closure(a, n)?.eps;
    let odd: Vec<usize> = (3..=n).step_by(2).filter(|&q| eps.marginal(q) > 0).collect();
    if odd.is_empty() {
        r.undecided.push("no odd deviation above 1 within bound".into());
    }
    for q in odd {
        match (q + 1..=n).step_by(2).find(|&i| eps.marginal(i) > 0) {
            Some(i) => r.compare(format!("q = {q}: eps_{i}"), i, eps.marginal(i), Relation::Positive, 0, true),
            None => r.undecided.push(format!("no nonzero even deviation above {q} within bound")),
        }
    }
    r.tables.insert("eps".into(), eps);
    Ok(())
}

/// `k (x)_{V(i)} V`: the variables of degree above `i`, with boundaries
/// reduced modulo the base maximal ideal and the lower variables.
pub fn fiber_algebra(v: &DgAlgebra, i: usize) -> Result<DgAlgebra> {
    let mut f = DgAlgebra::new(TruncatedBase::residue_field(v.field(), v.bound()));
    let mut map: Vec<Option<u32>> = Vec::with_capacity(v.variables().len());
    for var in v.variables() {
        if var.hdeg <= i {
            map.push(None);
            continue;
        }
        let mut boundary = DgElement::zero(var.hdeg - 1, var.intdeg);
        for ((b, m), c) in &var.boundary.terms {
            if *b != 0 {
                continue;
            }
            let even: Option<Vec<_>> = m.even.iter().map(|&(w, e)| map[w as usize].map(|x| (x, e))).collect();
            let odd: Option<Vec<_>> = m.odd.iter().map(|&w| map[w as usize]).collect();
            if let (Some(even), Some(odd)) = (even, odd) {
                boundary.add_term(0, Monomial { even, odd }, c);
            }
        }
        let idx = f.declare_variable(&var.name, var.hdeg, var.intdeg, var.kind, boundary)?;
        map.push(Some(idx as u32));
    }
    Ok(f)
}

fn fiber_boundedness(a: &DgAlgebra, opts: &VerifyOptions, r: &mut VerificationReport) -> Result<()> {
    let st = Statement::FiberBoundedness;
    let n = opts.max_hdeg;
    let growth = classify_growth(a, n)?;
    match growth.verdict {
        GrowthVerdict::PerfectResidueField { .. } | GrowthVerdict::DerivedCiUpToBound { .. } => {}
        _ => return Err(inadmissible(st, format!("needs a derived complete intersection, found {}", growth.verdict.id()))),
    }
    if homology_sup(a, n)?.0.is_none() {
        return Err(inadmissible(st, "homology is not bounded within max_hdeg"));
    }
    let model = minimal_model_over_cover(a, n)?;
    let v = model.algebra();
    let top_var = v.variables().iter().map(|x| x.hdeg).max().unwrap_or(0);
    for i in 0..top_var {
        let f = fiber_algebra(v, i)?;
        let width = f.variables().iter().map(|x| x.hdeg).max().unwrap_or(0);
        let lam = f.variables().iter().map(|x| x.intdeg.div_ceil(x.hdeg)).max().unwrap_or(0);
        let complex = DgComplex::new(f);
        let mut dims = vec![0u64; n + 1];
        for (h, d) in dims.iter_mut().enumerate() {
            for j in 0..=a.bound() {
                *d += homology_dim(&complex, h as i64, j)? as u64;
            }
        }
        let sup = dims.iter().rposition(|&d| d > 0).unwrap_or(0);
        r.notes.push(format!("i = {i}: dim H(k (x)_V({i}) V) = {dims:?}"));
        // A zero tail longer than any fiber variable degree.
        if n < sup + width + 1 {
            r.undecided.push(format!("i = {i}: homology not seen to vanish above {sup} within bound"));
            continue;
        }
        for (h, &d) in dims.iter().enumerate().skip(sup + 1) {
            r.compare(format!("i = {i}: H_{h}"), h, d, Relation::Equal, 0, lam * h <= a.bound());
        }
    }
    r.tables.insert("n_S".into(), model.n);
    Ok(())
}
