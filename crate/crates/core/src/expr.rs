//! Polynomial expressions in named variables.
//!
//! Grammar (whitespace ignored):
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := INTEGER | NAME ['^' INTEGER]
//! NAME   := [A-Za-z_][A-Za-z0-9_]*
//! ```
//!
//! Factor order inside a term is preserved, since it matters for odd
//! variables.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factor {
    pub name: String,
    pub exponent: u32,
    /// 1-based column of the name in the source text.
    pub column: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub coefficient: BigInt,
    pub factors: Vec<Factor>,
    pub column: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Expr {
    pub terms: Vec<Term>,
}

impl Expr {
    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|t| t.coefficient.is_zero())
    }
}

pub fn parse(src: &str) -> Result<Expr> {
    let mut p = Parser {
        chars: src.chars().collect(),
        pos: 0,
    };
    let expr = p.expr()?;
    p.skip_ws();
    if p.pos < p.chars.len() {
        return Err(p.error(format!("unexpected `{}`", p.chars[p.pos])));
    }
    Ok(expr)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn error(&self, message: String) -> Error {
        Error::Parse {
            column: self.pos + 1,
            message,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut terms = Vec::new();
        let mut sign = match self.peek() {
            Some('-') => {
                self.pos += 1;
                -1
            }
            Some('+') => {
                self.pos += 1;
                1
            }
            None => return Err(self.error("empty expression".into())),
            _ => 1,
        };
        loop {
            let mut t = self.term()?;
            if sign < 0 {
                t.coefficient = -t.coefficient;
            }
            terms.push(t);
            match self.peek() {
                Some('+') => sign = 1,
                Some('-') => sign = -1,
                _ => break,
            }
            self.pos += 1;
        }
        Ok(Expr { terms })
    }

    fn term(&mut self) -> Result<Term> {
        self.skip_ws();
        let column = self.pos + 1;
        let mut coefficient = BigInt::one();
        let mut factors = Vec::new();
        loop {
            match self.peek() {
                Some(c) if c.is_ascii_digit() => coefficient *= self.integer()?,
                Some(c) if c.is_ascii_alphabetic() || c == '_' => {
                    let col = self.pos + 1;
                    let name = self.name();
                    let mut exponent = 1u32;
                    if self.peek() == Some('^') {
                        self.pos += 1;
                        self.skip_ws();
                        let e = self.integer()?;
                        exponent = u32::try_from(e)
                            .map_err(|_| self.error("exponent out of range".into()))?;
                    }
                    factors.push(Factor {
                        name,
                        exponent,
                        column: col,
                    });
                }
                Some(c) => return Err(self.error(format!("expected a factor, found `{c}`"))),
                None => return Err(self.error("expected a factor".into())),
            }
            if self.peek() == Some('*') {
                self.pos += 1;
            } else {
                break;
            }
        }
        Ok(Term {
            coefficient,
            factors,
            column,
        })
    }

    fn integer(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an integer".into()));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        Ok(s.parse().expect("digits parse"))
    }

    fn name(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.chars.len()
            && (self.chars[self.pos].is_ascii_alphanumeric() || self.chars[self.pos] == '_')
        {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_signed_sums() {
        let e = parse("x^2 - 3*x*y + 2").unwrap();
        assert_eq!(e.terms.len(), 3);
        assert_eq!(e.terms[0].factors[0].exponent, 2);
        assert_eq!(e.terms[1].coefficient, BigInt::from(-3));
        assert_eq!(e.terms[1].factors.len(), 2);
        assert!(e.terms[2].factors.is_empty());
        assert_eq!(e.terms[2].coefficient, BigInt::from(2));
    }

    #[test]
    fn leading_minus_and_columns() {
        let e = parse(" -e1*e2").unwrap();
        assert_eq!(e.terms[0].coefficient, BigInt::from(-1));
        assert_eq!(e.terms[0].factors[1].name, "e2");
        assert_eq!(e.terms[0].factors[0].column, 3);
    }

    #[test]
    fn rejects_garbage() {
        assert!(matches!(parse("x + "), Err(Error::Parse { .. })));
        assert!(matches!(parse("x ^ y"), Err(Error::Parse { .. })));
        assert!(matches!(parse("(x)"), Err(Error::Parse { column: 1, .. })));
        assert!(parse("").is_err());
    }

    #[test]
    fn zero_expression() {
        assert!(parse("0").unwrap().is_zero());
        assert!(!parse("x").unwrap().is_zero());
    }
}
