use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::base::{BaseElement, TruncatedBase};
use crate::dg::{DgElement, Monomial};
use crate::error::{Error, Result};
use crate::expr;
use crate::linear::{binomial, Field, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum VariableKind {
    Exterior,
    Polynomial,
    DividedPower,
}

impl VariableKind {
    pub fn is_odd(self) -> bool {
        self == VariableKind::Exterior
    }

    pub fn name(self) -> &'static str {
        match self {
            VariableKind::Exterior => "exterior",
            VariableKind::Polynomial => "polynomial",
            VariableKind::DividedPower => "dividedPower",
        }
    }

    fn fits(self, hdeg: usize) -> bool {
        self.is_odd() == (hdeg % 2 == 1)
    }
}

impl fmt::Display for VariableKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for VariableKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exterior" => Ok(VariableKind::Exterior),
            "polynomial" => Ok(VariableKind::Polynomial),
            "dividedPower" => Ok(VariableKind::DividedPower),
            _ => Err(Error::Unsupported(format!("unknown variable kind `{s}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DgVariable {
    pub name: String,
    pub hdeg: usize,
    pub intdeg: usize,
    pub kind: VariableKind,
    pub boundary: DgElement,
}

/// A semifree extension `A_0[X]<Y>` of a truncated base.
#[derive(Clone, Debug)]
pub struct DgAlgebra {
    base: Arc<TruncatedBase>,
    vars: Vec<DgVariable>,
}

impl DgAlgebra {
    pub fn new(base: Arc<TruncatedBase>) -> Self {
        Self {
            base,
            vars: Vec::new(),
        }
    }

    pub fn base(&self) -> &Arc<TruncatedBase> {
        &self.base
    }

    pub fn field(&self) -> Field {
        self.base.field()
    }

    pub fn bound(&self) -> usize {
        self.base.bound()
    }

    pub fn variables(&self) -> &[DgVariable] {
        &self.vars
    }

    pub fn variable(&self, v: usize) -> &DgVariable {
        &self.vars[v]
    }

    pub fn variable_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v.name == name)
    }

    /// Keeps only the first `n` variables.
    pub fn truncated(&self, n: usize) -> DgAlgebra {
        DgAlgebra {
            base: self.base.clone(),
            vars: self.vars[..n].to_vec(),
        }
    }

    pub fn monomial_bidegree(&self, m: &Monomial) -> (usize, usize) {
        let mut h = 0;
        let mut j = 0;
        for &(v, e) in &m.even {
            let var = &self.vars[v as usize];
            h += var.hdeg * e as usize;
            j += var.intdeg * e as usize;
        }
        for &v in &m.odd {
            let var = &self.vars[v as usize];
            h += var.hdeg;
            j += var.intdeg;
        }
        (h, j)
    }

    pub fn one(&self) -> DgElement {
        self.term(0, Monomial::one(), self.field().one())
    }

    /// `c * b * m` as an element, with `b` a base basis index.
    pub fn term(&self, base: usize, m: Monomial, c: Scalar) -> DgElement {
        let (h, j) = self.monomial_bidegree(&m);
        let bm = self.base.monomial(base);
        let mut e = DgElement::zero(h + bm.hdeg, j + bm.intdeg);
        e.add_term(base, m, &c);
        e
    }

    pub fn generator(&self, v: usize) -> DgElement {
        let m = if self.vars[v].kind.is_odd() {
            Monomial::odd_var(v as u32)
        } else {
            Monomial::even_var(v as u32, 1)
        };
        self.term(0, m, self.field().one())
    }

    pub fn from_base(&self, b: &BaseElement) -> DgElement {
        let mut e = DgElement::zero(b.hdeg, b.intdeg);
        for (&idx, c) in &b.terms {
            e.add_term(idx, Monomial::one(), c);
        }
        e
    }

    fn check_bound(&self, intdeg: usize) -> Result<()> {
        if intdeg > self.bound() {
            return Err(Error::BoundExceeded {
                requested: intdeg,
                bound: self.bound(),
            });
        }
        Ok(())
    }

    /// Product of two monomials as `coefficient * monomial`, or `None` when
    /// it vanishes.
    pub fn multiply_monomials(&self, a: &Monomial, b: &Monomial) -> Option<(Scalar, Monomial)> {
        let field = self.field();
        let mut coef = field.one();

        let mut odd = Vec::with_capacity(a.odd.len() + b.odd.len());
        let (mut i, mut k) = (0, 0);
        let mut swaps = 0usize;
        while i < a.odd.len() || k < b.odd.len() {
            if k == b.odd.len() || (i < a.odd.len() && a.odd[i] < b.odd[k]) {
                odd.push(a.odd[i]);
                i += 1;
            } else if i == a.odd.len() || b.odd[k] < a.odd[i] {
                // b.odd[k] jumps over the remaining factors of a.
                swaps += a.odd.len() - i;
                odd.push(b.odd[k]);
                k += 1;
            } else {
                return None;
            }
        }
        if swaps % 2 == 1 {
            coef = coef.neg();
        }

        let mut even = Vec::with_capacity(a.even.len() + b.even.len());
        let (mut i, mut k) = (0, 0);
        while i < a.even.len() || k < b.even.len() {
            if k == b.even.len() || (i < a.even.len() && a.even[i].0 < b.even[k].0) {
                even.push(a.even[i]);
                i += 1;
            } else if i == a.even.len() || b.even[k].0 < a.even[i].0 {
                even.push(b.even[k]);
                k += 1;
            } else {
                let (v, ea) = a.even[i];
                let eb = b.even[k].1;
                if self.vars[v as usize].kind == VariableKind::DividedPower {
                    coef = coef.mul(&field.from_biguint(&binomial((ea + eb) as u64, ea as u64)));
                    if coef.is_zero() {
                        return None;
                    }
                }
                even.push((v, ea + eb));
                i += 1;
                k += 1;
            }
        }
        Some((coef, Monomial { even, odd }))
    }

    /// Graded-commutative product. Fails only if the internal degree of the
    /// result exceeds the base bound.
    pub fn multiply(&self, u: &DgElement, v: &DgElement) -> Result<DgElement> {
        let mut out = DgElement::zero(u.hdeg + v.hdeg, u.intdeg + v.intdeg);
        if u.is_zero() || v.is_zero() {
            return Ok(out);
        }
        self.check_bound(out.intdeg)?;
        for ((bu, mu), cu) in &u.terms {
            for ((bv, mv), cv) in &v.terms {
                let Some((c, m)) = self.multiply_monomials(mu, mv) else {
                    continue;
                };
                let c = c.mul(cu).mul(cv);
                for (b, cb) in self.base.multiply_basis(*bu, *bv)? {
                    out.add_term(*b, m.clone(), &c.mul(cb));
                }
            }
        }
        Ok(out)
    }

    pub fn differential(&self, u: &DgElement) -> Result<DgElement> {
        let mut out = DgElement::zero(u.hdeg.saturating_sub(1), u.intdeg);
        if u.hdeg == 0 {
            return Ok(out);
        }
        let field = self.field();
        for ((b, m), c) in &u.terms {
            for &(v, e) in &m.even {
                let var = &self.vars[v as usize];
                if var.boundary.is_zero() {
                    continue;
                }
                let rest = self.term(*b, m.with_exponent(v, e - 1), field.one());
                let mut coef = c.clone();
                if var.kind == VariableKind::Polynomial {
                    coef = coef.mul(&field.from_i64(e as i64));
                }
                let d = self.multiply(&var.boundary, &rest)?;
                out.add_scaled(&d, &coef);
            }
            for (l, &o) in m.odd.iter().enumerate() {
                let var = &self.vars[o as usize];
                if var.boundary.is_zero() {
                    continue;
                }
                let left = Monomial {
                    even: m.even.clone(),
                    odd: m.odd[..l].to_vec(),
                };
                let right = Monomial {
                    even: Vec::new(),
                    odd: m.odd[l + 1..].to_vec(),
                };
                let left = self.term(*b, left, field.one());
                let right = self.term(0, right, field.one());
                let d = self.multiply(&self.multiply(&left, &var.boundary)?, &right)?;
                let coef = if l % 2 == 1 { c.neg() } else { c.clone() };
                out.add_scaled(&d, &coef);
            }
        }
        Ok(out)
    }

    /// Variable monomials of bidegree `(h, j)`, in lexicographic order of
    /// their exponent data.
    pub fn monomials_of_bidegree(&self, h: usize, j: usize) -> Vec<Monomial> {
        let mut out = Vec::new();
        let mut cur = Monomial::one();
        self.enumerate(0, h, j, &mut cur, &mut out);
        out.sort();
        out
    }

    fn enumerate(&self, k: usize, h: usize, j: usize, cur: &mut Monomial, out: &mut Vec<Monomial>) {
        if k == self.vars.len() {
            if h == 0 && j == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let var = &self.vars[k];
        let mut max = h / var.hdeg;
        if let Some(q) = j.checked_div(var.intdeg) {
            max = max.min(q);
        }
        if var.kind.is_odd() {
            max = max.min(1);
        }
        for e in 0..=max {
            let (dh, dj) = (e * var.hdeg, e * var.intdeg);
            if e > 0 {
                if var.kind.is_odd() {
                    cur.odd.push(k as u32);
                } else {
                    cur.even.push((k as u32, e as u32));
                }
            }
            self.enumerate(k + 1, h - dh, j - dj, cur, out);
            if e > 0 {
                if var.kind.is_odd() {
                    cur.odd.pop();
                } else {
                    cur.even.pop();
                }
            }
        }
    }

    /// Basis of the `(i, j)` component: (base basis index, monomial) pairs,
    /// ordered by monomial and then base index.
    pub fn basis_of_bidegree(&self, i: usize, j: usize) -> Result<Vec<(usize, Monomial)>> {
        self.check_bound(j)?;
        let mut out = Vec::new();
        for bj in 0..=j {
            for bh in self.base.hdegs_at(bj) {
                if bh > i {
                    continue;
                }
                let range = self.base.basis_at(bh, bj);
                for m in self.monomials_of_bidegree(i - bh, j - bj) {
                    for b in range.clone() {
                        out.push((b, m.clone()));
                    }
                }
            }
        }
        out.sort_by(|a, b| (&a.1, a.0).cmp(&(&b.1, b.0)));
        Ok(out)
    }

    fn check_name(&self, name: &str) -> Result<()> {
        if self.variable_index(name).is_some() || self.base.presentation().variable_index(name).is_some() {
            return Err(Error::DuplicateVariable(name.to_string()));
        }
        Ok(())
    }

    /// A name of the form `{prefix}{n}` not yet in use.
    pub fn fresh_name(&self, prefix: &str) -> String {
        (1..)
            .map(|n| format!("{prefix}{n}"))
            .find(|s| self.check_name(s).is_ok())
            .expect("unbounded name supply")
    }

    /// Declares a variable with an explicit bidegree. A zero boundary may be
    /// given in any bidegree.
    pub fn declare_variable(
        &mut self,
        name: &str,
        hdeg: usize,
        intdeg: usize,
        kind: VariableKind,
        boundary: DgElement,
    ) -> Result<usize> {
        if hdeg == 0 {
            return Err(Error::InvalidVariable {
                name: name.into(),
                reason: "homological degree must be at least 1".into(),
            });
        }
        let mut boundary = boundary;
        if boundary.is_zero() {
            boundary = DgElement::zero(hdeg - 1, intdeg);
        }
        if boundary.bidegree() != (hdeg - 1, intdeg) {
            return Err(Error::Bidegree {
                expected_h: hdeg - 1,
                expected_j: intdeg,
                found_h: boundary.hdeg,
                found_j: boundary.intdeg,
            });
        }
        self.adjoin(name, kind, boundary)
    }

    /// Adjoins a variable killing the cycle `z`; its bidegree is
    /// `(|z| + 1, intdeg z)`.
    pub fn adjoin(&mut self, name: &str, kind: VariableKind, z: DgElement) -> Result<usize> {
        self.check_name(name)?;
        let hdeg = z.hdeg + 1;
        if !kind.fits(hdeg) {
            return Err(Error::ParityMismatch {
                name: name.into(),
                hdeg,
                kind: kind.name().into(),
            });
        }
        self.check_bound(z.intdeg)?;
        let n = self.vars.len() as u32;
        if z.terms.keys().any(|(_, m)| m.variables().any(|v| v >= n)) {
            return Err(Error::InvalidVariable {
                name: name.into(),
                reason: "boundary refers to an unknown variable".into(),
            });
        }
        if !self.differential(&z)?.is_zero() {
            return Err(Error::NotACycle { name: name.into() });
        }
        self.vars.push(DgVariable {
            name: name.to_string(),
            hdeg,
            intdeg: z.intdeg,
            kind,
            boundary: z,
        });
        Ok(self.vars.len() - 1)
    }

    /// Non-mutating form of [`DgAlgebra::adjoin`] with a generated name.
    pub fn adjoin_variable(&self, z: DgElement, kind: VariableKind) -> Result<DgAlgebra> {
        let mut out = self.clone();
        let name = out.fresh_name(if kind == VariableKind::DividedPower { "y" } else { "x" });
        out.adjoin(&name, kind, z)?;
        Ok(out)
    }

    /// The first boundary term that is a bare variable (or constant) with a
    /// unit coefficient, as `(variable, base index, monomial)`.
    pub fn minimality_witness(&self) -> Option<(usize, usize, Monomial)> {
        for (v, var) in self.vars.iter().enumerate() {
            for (b, m) in var.boundary.terms.keys() {
                if *b == 0 && (m.is_one() || m.as_variable().is_some()) {
                    return Some((v, *b, m.clone()));
                }
            }
        }
        None
    }

    pub fn is_minimal(&self) -> bool {
        self.minimality_witness().is_none()
    }

    /// Parses an expression in base and dg variables as an element of
    /// bidegree `(hdeg, intdeg)`. For a divided-power variable `y`, `y^n`
    /// denotes `y^(n)`.
    pub fn parse_element(&self, src: &str, hdeg: usize, intdeg: usize) -> Result<DgElement> {
        let e = expr::parse(src)?;
        let field = self.field();
        let pres = self.base.presentation();
        let mut out = DgElement::zero(hdeg, intdeg);
        for t in &e.terms {
            let mut exps = vec![0u32; pres.variables().len()];
            let mut factors = Vec::new();
            for f in &t.factors {
                if let Some(k) = pres.variable_index(&f.name) {
                    exps[k] += f.exponent;
                } else if let Some(v) = self.variable_index(&f.name) {
                    factors.push((v, f.exponent));
                } else {
                    return Err(Error::UnknownVariable(f.name.clone()));
                }
            }
            let (bh, bj) = pres.bidegree(&exps);
            let (mut th, mut tj) = (bh, bj);
            for &(v, e) in &factors {
                th += self.vars[v].hdeg * e as usize;
                tj += self.vars[v].intdeg * e as usize;
            }
            if (th, tj) != (hdeg, intdeg) {
                return Err(Error::Bidegree {
                    expected_h: hdeg,
                    expected_j: intdeg,
                    found_h: th,
                    found_j: tj,
                });
            }
            let mut acc = self.from_base(&self.base.element_of_monomial(&exps)?);
            acc = acc.scale(&field.from_bigint(&t.coefficient));
            for (v, e) in factors {
                let var = &self.vars[v];
                let m = if var.kind.is_odd() {
                    if e > 1 {
                        acc = DgElement::zero(th, tj);
                        break;
                    }
                    Monomial::odd_var(v as u32)
                } else {
                    Monomial::even_var(v as u32, e)
                };
                acc = self.multiply(&acc, &self.term(0, m, field.one()))?;
            }
            out.add_scaled(&acc, &field.one());
        }
        Ok(out)
    }

    /// Human-readable rendering using variable names.
    pub fn format_element(&self, e: &DgElement) -> String {
        if e.is_zero() {
            return "0".into();
        }
        let pres = self.base.presentation();
        let mut s = String::new();
        for (n, ((b, m), c)) in e.terms.iter().enumerate() {
            let mut factors = Vec::new();
            for (k, &x) in self.base.monomial(*b).exponents.iter().enumerate() {
                push_factor(&mut factors, &pres.variables()[k].name, x);
            }
            for &(v, x) in &m.even {
                push_factor(&mut factors, &self.vars[v as usize].name, x);
            }
            for &v in &m.odd {
                push_factor(&mut factors, &self.vars[v as usize].name, 1);
            }
            let text = c.to_string();
            let (neg, mag) = match text.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, text),
            };
            if n == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            if mag != "1" || factors.is_empty() {
                factors.insert(0, mag);
            }
            s.push_str(&factors.join("*"));
        }
        s
    }
}

fn push_factor(out: &mut Vec<String>, name: &str, e: u32) {
    match e {
        0 => {}
        1 => out.push(name.to_string()),
        _ => out.push(format!("{name}^{e}")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::{truncate_quotient, BasePresentation};

    fn over_k(field: Field, bound: usize) -> DgAlgebra {
        DgAlgebra::new(TruncatedBase::residue_field(field, bound))
    }

    fn koszul_dual_numbers() -> DgAlgebra {
        let mut p = BasePresentation::polynomial_ring(Field::Rational, &[("x", 1)]).unwrap();
        p.add_relation("x^2").unwrap();
        let mut a = DgAlgebra::new(Arc::new(truncate_quotient(&p, 8)));
        let x = a.parse_element("x", 0, 1).unwrap();
        a.adjoin("e", VariableKind::Exterior, x).unwrap();
        a
    }

    #[test]
    fn divided_power_product() {
        let mut a = over_k(Field::Rational, 20);
        a.declare_variable("y", 2, 2, VariableKind::DividedPower, DgElement::zero(1, 2))
            .unwrap();
        let y2 = a.parse_element("y^2", 4, 4).unwrap();
        let y3 = a.parse_element("y^3", 6, 6).unwrap();
        let y5 = a.parse_element("y^5", 10, 10).unwrap();
        assert_eq!(a.multiply(&y2, &y3).unwrap(), y5.scale(&a.field().from_i64(10)));
    }

    #[test]
    fn divided_powers_in_characteristic_two() {
        let f = Field::prime(2).unwrap();
        let mut a = over_k(f, 20);
        a.declare_variable("y", 2, 2, VariableKind::DividedPower, DgElement::zero(1, 2))
            .unwrap();
        let y = a.generator(0);
        assert!(a.multiply(&y, &y).unwrap().is_zero());
        let y2 = a.parse_element("y^2", 4, 4).unwrap();
        assert!(!y2.is_zero());
    }

    #[test]
    fn odd_variables_anticommute() {
        let mut a = over_k(Field::Rational, 10);
        a.declare_variable("e1", 1, 1, VariableKind::Exterior, DgElement::zero(0, 1))
            .unwrap();
        a.declare_variable("e2", 1, 1, VariableKind::Exterior, DgElement::zero(0, 1))
            .unwrap();
        let e1 = a.generator(0);
        let e2 = a.generator(1);
        let p = a.multiply(&e2, &e1).unwrap();
        assert_eq!(p, a.multiply(&e1, &e2).unwrap().neg());
        assert!(a.multiply(&e1, &e1).unwrap().is_zero());
        assert_eq!(a.format_element(&p), "-e1*e2");
    }

    #[test]
    fn fixture_d_differential() {
        let mut a = over_k(Field::Rational, 20);
        a.declare_variable("x0", 2, 2, VariableKind::Polynomial, DgElement::zero(1, 2))
            .unwrap();
        let b = a.parse_element("x0^2", 4, 4).unwrap();
        a.declare_variable("x1", 5, 4, VariableKind::Exterior, b.clone())
            .unwrap();
        assert_eq!(a.differential(&a.generator(1)).unwrap(), b);
        let x0x1 = a.parse_element("x0*x1", 7, 6).unwrap();
        assert_eq!(a.differential(&x0x1).unwrap(), a.parse_element("x0^3", 6, 6).unwrap());
        assert!(a.is_minimal());
    }

    #[test]
    fn divided_power_differential() {
        let mut a = over_k(Field::Rational, 20);
        a.declare_variable("z", 1, 1, VariableKind::Exterior, DgElement::zero(0, 1))
            .unwrap();
        let z = a.generator(0);
        a.adjoin("y", VariableKind::DividedPower, z).unwrap();
        let y3 = a.parse_element("y^3", 6, 3).unwrap();
        let expected = a.parse_element("y^2*z", 5, 3).unwrap();
        assert_eq!(a.differential(&y3).unwrap(), expected);
        assert!(a.differential(&expected).unwrap().is_zero());
    }

    #[test]
    fn koszul_basis_and_rejections() {
        let a = koszul_dual_numbers();
        let basis = a.basis_of_bidegree(1, 2).unwrap();
        assert_eq!(basis.len(), 1);
        assert_eq!(basis[0].1, Monomial::odd_var(0));
        assert_eq!(a.basis_of_bidegree(0, 1).unwrap().len(), 1);
        assert!(a.basis_of_bidegree(2, 1).unwrap().is_empty());
        assert!(a.is_minimal());

        let e = a.generator(0);
        assert!(matches!(
            a.adjoin_variable(e.clone(), VariableKind::DividedPower),
            Err(Error::NotACycle { .. })
        ));
        let xe = a.parse_element("x*e", 1, 2).unwrap();
        assert!(matches!(
            a.adjoin_variable(xe.clone(), VariableKind::Exterior),
            Err(Error::ParityMismatch { .. })
        ));
        let shamash = a.adjoin_variable(xe, VariableKind::DividedPower).unwrap();
        assert_eq!(shamash.variable(1).hdeg, 2);
        assert_eq!(shamash.variable(1).intdeg, 2);
    }

    #[test]
    fn unit_boundary_is_not_minimal() {
        let p = BasePresentation::polynomial_ring(Field::Rational, &[("x", 1)]).unwrap();
        let mut a = DgAlgebra::new(Arc::new(truncate_quotient(&p, 4)));
        let one = a.one();
        a.declare_variable("e", 1, 0, VariableKind::Exterior, one).unwrap();
        assert_eq!(a.minimality_witness().map(|w| w.0), Some(0));
    }

    #[test]
    fn zero_cycle_gives_trivial_extension() {
        let a = koszul_dual_numbers();
        let b = a.adjoin_variable(DgElement::zero(0, 3), VariableKind::Exterior).unwrap();
        assert!(b.differential(&b.generator(1)).unwrap().is_zero());
    }
}
