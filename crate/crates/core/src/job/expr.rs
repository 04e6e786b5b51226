//! Polynomial expressions with Gaussian-rational coefficients.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := ('+' | '-') unary | power
//! power := atom ('^' integer)?
//! atom  := number | 'i' | variable | '(' expr ')'
//! ```
//!
//! Numbers are integers or decimals, read exactly. Division is only by
//! nonzero constants.

use crate::field::{parse_rational, Field, GaussRat};
use crate::series::{Series, SeriesRing};

/// Terms above this total degree are discarded while parsing.
pub const EXPR_DEGREE_LIMIT: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExprError {
    /// `offset` counts characters from the start of the expression.
    Syntax { offset: usize, message: String },
    Undeclared { offset: usize, name: String },
}

/// The ring expressions over `vars` are parsed into.
pub fn expression_ring(vars: &[String]) -> SeriesRing {
    SeriesRing::new(vars, EXPR_DEGREE_LIMIT).expect("validated variable names")
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    ring: &'a SeriesRing,
}

type Parsed = Result<Series<GaussRat>, ExprError>;

impl Parser<'_> {
    fn err<T>(&self, offset: usize, message: impl Into<String>) -> Result<T, ExprError> {
        Err(ExprError::Syntax { offset, message: message.into() })
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn expr(&mut self) -> Parsed {
        let mut acc = self.term()?;
        while let Some(c @ ('+' | '-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if c == '+' { &acc + &rhs } else { &acc - &rhs };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Parsed {
        let mut acc = self.unary()?;
        while let Some(c @ ('*' | '/')) = self.peek() {
            let at = self.pos;
            self.pos += 1;
            let rhs = self.unary()?;
            acc = if c == '*' {
                &acc * &rhs
            } else {
                if rhs.terms().any(|(m, _)| !m.is_one()) {
                    return self.err(at, "division by a non-constant");
                }
                let Some(inv) = rhs.constant_term().inv() else {
                    return self.err(at, "division by zero");
                };
                acc.scale(&inv)
            };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Parsed {
        match self.peek() {
            Some('-') => {
                self.pos += 1;
                Ok(-&self.unary()?)
            }
            Some('+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Parsed {
        let base = self.atom()?;
        if self.peek() != Some('^') {
            return Ok(base);
        }
        self.pos += 1;
        self.skip_ws();
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(char::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err(start, "expected a nonnegative integer exponent");
        }
        let digits: String = self.chars[start..self.pos].iter().collect();
        match digits.parse::<u32>() {
            Ok(e) if e as usize <= EXPR_DEGREE_LIMIT => Ok(base.pow(e)),
            _ => self.err(start, format!("exponent exceeds {EXPR_DEGREE_LIMIT}")),
        }
    }

    fn atom(&mut self) -> Parsed {
        let Some(c) = self.peek() else {
            return self.err(self.pos, "unexpected end of expression");
        };
        let start = self.pos;
        if c == '(' {
            self.pos += 1;
            let inner = self.expr()?;
            if self.peek() != Some(')') {
                return self.err(self.pos, "expected `)`");
            }
            self.pos += 1;
            return Ok(inner);
        }
        if c.is_ascii_digit() || c == '.' {
            while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit() || *c == '.') {
                self.pos += 1;
            }
            let text: String = self.chars[start..self.pos].iter().collect();
            return match parse_rational(&text) {
                Ok(q) => Ok(Series::constant(self.ring, GaussRat::real(q))),
                Err(msg) => self.err(start, msg),
            };
        }
        if c.is_ascii_alphabetic() || c == '_' {
            while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_alphanumeric() || *c == '_') {
                self.pos += 1;
            }
            let name: String = self.chars[start..self.pos].iter().collect();
            if name == "i" {
                return Ok(Series::constant(self.ring, GaussRat::i()));
            }
            return match self.ring.var_index(&name) {
                Some(idx) => Ok(self.ring.var(idx)),
                None => Err(ExprError::Undeclared { offset: start, name }),
            };
        }
        self.err(start, format!("unexpected `{c}`"))
    }
}

/// Parses `text` over the variables of `ring`.
pub fn parse_expression(text: &str, ring: &SeriesRing) -> Result<Series<GaussRat>, ExprError> {
    let mut p = Parser { chars: text.chars().collect(), pos: 0, ring };
    if p.peek().is_none() {
        return p.err(p.pos, "empty expression");
    }
    let value = p.expr()?;
    if let Some(c) = p.peek() {
        return p.err(p.pos, format!("unexpected `{c}`"));
    }
    Ok(value)
}

/// Parses a constant (no variables).
pub fn parse_constant(text: &str) -> Result<GaussRat, ExprError> {
    let ring = expression_ring(&[]);
    Ok(parse_expression(text, &ring)?.constant_term())
}
