//! Recursive-descent parser for polynomial expressions.
//!
//! Grammar (ASCII):
//!
//! ```text
//! expr   := [-] term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := rational | variable ['^' nat] | '(' expr ')' ['^' nat]
//! ```
//!
//! Rational literals follow the `exactnum` forms (`223/100`, `5`, `1.115`).
//! Juxtaposition is not multiplication: `2x` is a syntax error, `2*x` is not.
//! Variable names are a letter followed by alphanumerics and must appear in
//! the caller's name list.

use std::fmt;

use super::Polynomial;
use crate::exactnum::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    /// Byte offset into the input where parsing failed.
    pub position: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at byte {}: {}", self.position, self.message)
    }
}

impl std::error::Error for ParseError {}

/// Parses `text` as a polynomial over the ordered variable list `vars`.
pub fn parse_polynomial(text: &str, vars: &[String]) -> Result<Polynomial, ParseError> {
    let mut parser = Parser {
        src: text.as_bytes(),
        pos: 0,
        vars,
    };
    parser.skip_ws();
    let poly = parser.expr()?;
    parser.skip_ws();
    if parser.pos != parser.src.len() {
        return Err(parser.error("unexpected trailing input"));
    }
    Ok(poly)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    vars: &'a [String],
}

impl<'a> Parser<'a> {
    fn error(&self, message: &str) -> ParseError {
        ParseError {
            position: self.pos,
            message: message.to_string(),
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let b = self.peek();
        if b.is_some() {
            self.pos += 1;
        }
        b
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b' ') | Some(b'\t')) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Polynomial, ParseError> {
        self.skip_ws();
        let mut negate = false;
        if self.eat(b'-') {
            negate = true;
        } else {
            let _ = self.eat(b'+');
        }
        let first = self.term()?;
        let mut acc = if negate { first.neg() } else { first };
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = add_checked(self, acc, t, false)?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = add_checked(self, acc, t, true)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.factor()?;
        loop {
            self.skip_ws();
            if self.eat(b'*') {
                let rhs = self.factor()?;
                acc = acc
                    .checked_mul(&rhs)
                    .map_err(|e| self.error(&e.to_string()))?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<Polynomial, ParseError> {
        self.skip_ws();
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                self.skip_ws();
                if !self.eat(b')') {
                    return Err(self.error("expected `)`"));
                }
                let e = self.optional_power()?;
                Ok(inner.pow(e))
            }
            Some(b) if b.is_ascii_digit() => self.rational_factor(),
            Some(b) if b.is_ascii_alphabetic() => self.variable_factor(),
            _ => Err(self.error("expected a number, variable or `(`")),
        }
    }

    fn optional_power(&mut self) -> Result<u32, ParseError> {
        self.skip_ws();
        if !self.eat(b'^') {
            return Ok(1);
        }
        self.skip_ws();
        let start = self.pos;
        while matches!(self.peek(), Some(b) if b.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.error("expected a nonnegative integer exponent"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .expect("digits are utf8")
            .parse()
            .map_err(|_| self.error("exponent does not fit a machine word"))
    }

    fn rational_factor(&mut self) -> Result<Polynomial, ParseError> {
        let start = self.pos;
        while matches!(self.peek(), Some(b) if b.is_ascii_digit()) {
            self.pos += 1;
        }
        // fractional part or explicit denominator, both optional
        if self.peek() == Some(b'.') {
            self.pos += 1;
            while matches!(self.peek(), Some(b) if b.is_ascii_digit()) {
                self.pos += 1;
            }
        } else if self.peek() == Some(b'/') {
            self.pos += 1;
            let den_start = self.pos;
            while matches!(self.peek(), Some(b) if b.is_ascii_digit()) {
                self.pos += 1;
            }
            if self.pos == den_start {
                return Err(self.error("expected a denominator"));
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("digits are utf8");
        let value: Rational = text
            .parse()
            .map_err(|e| self.error(&format!("bad rational literal: {e}")))?;
        Ok(Polynomial::constant(self.vars.len(), value))
    }

    fn variable_factor(&mut self) -> Result<Polynomial, ParseError> {
        let start = self.pos;
        self.bump();
        while matches!(self.peek(), Some(b) if b.is_ascii_alphanumeric() || b == b'_') {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii ident");
        let index = self
            .vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| ParseError {
                position: start,
                message: format!("unknown variable `{name}`"),
            })?;
        let e = self.optional_power()?;
        let mut exps = vec![0u32; self.vars.len()];
        exps[index] = e;
        Ok(Polynomial::monomial(
            self.vars.len(),
            super::Monomial::new(exps),
            Rational::one(),
        ))
    }
}

fn add_checked(
    p: &Parser<'_>,
    acc: Polynomial,
    t: Polynomial,
    subtract: bool,
) -> Result<Polynomial, ParseError> {
    let rhs = if subtract { t.neg() } else { t };
    acc.checked_add(&rhs).map_err(|e| p.error(&e.to_string()))
}
