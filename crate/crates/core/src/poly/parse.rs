//! Recursive-descent parser for polynomial expressions.
//!
//! Grammar (whitespace insignificant, multiplication always explicit):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := ('+' | '-') unary | power
//! power  := atom ('^' uint)?
//! atom   := number | variable | '(' expr ')'
//! number := digits ('.' digits)?
//! ```
//!
//! Division is only allowed by a nonzero constant, so `3/2*x` and `x/4`
//! are fine but `x/y` is rejected.

use num_bigint::BigInt;
use num_traits::{Pow, Zero};
use thiserror::Error;

use super::{Poly, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnexpectedChar(char),
    UnexpectedEnd,
    Expected(&'static str),
    UnknownVariable(String),
    NonRationalCoefficient(String),
    BadExponent(String),
    DivisionByNonConstant,
    DivisionByZero,
    TrailingInput,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at position {position}: {kind}")]
pub struct ParseError {
    pub position: usize,
    pub kind: ParseErrorKind,
}

impl std::fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ParseErrorKind::UnexpectedChar(c) => write!(f, "unexpected character `{c}`"),
            ParseErrorKind::UnexpectedEnd => write!(f, "unexpected end of input"),
            ParseErrorKind::Expected(what) => write!(f, "expected {what}"),
            ParseErrorKind::UnknownVariable(v) => write!(f, "unknown variable `{v}`"),
            ParseErrorKind::NonRationalCoefficient(v) => {
                write!(f, "non-rational coefficient `{v}` (only rational coefficients are supported)")
            }
            ParseErrorKind::BadExponent(e) => {
                write!(f, "exponent `{e}` is not a non-negative integer")
            }
            ParseErrorKind::DivisionByNonConstant => write!(f, "division by a non-constant expression"),
            ParseErrorKind::DivisionByZero => write!(f, "division by zero"),
            ParseErrorKind::TrailingInput => write!(f, "unexpected trailing input"),
        }
    }
}

/// Names that denote irrational or complex constants or functions.
const NON_RATIONAL: &[&str] = &["i", "I", "j", "pi", "Pi", "PI", "e", "E", "sqrt", "exp", "log", "ln", "sin", "cos"];

pub(crate) struct Parser<'a> {
    src: &'a str,
    pos: usize,
    vars: Vec<String>,
}

type PResult<T> = Result<T, ParseError>;

impl<'a> Parser<'a> {
    pub fn new(src: &'a str, vars: &[&str]) -> Self {
        Parser { src, pos: 0, vars: vars.iter().map(|s| s.to_string()).collect() }
    }

    pub fn position(&self) -> usize {
        self.pos
    }

    fn err<T>(&self, kind: ParseErrorKind) -> PResult<T> {
        Err(ParseError { position: self.pos, kind })
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    pub fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn bump(&mut self) {
        if let Some(c) = self.src[self.pos..].chars().next() {
            self.pos += c.len_utf8();
        }
    }

    pub fn expect(&mut self, c: char, what: &'static str) -> PResult<()> {
        match self.peek() {
            Some(d) if d == c => {
                self.bump();
                Ok(())
            }
            Some(_) => self.err(ParseErrorKind::Expected(what)),
            None => self.err(ParseErrorKind::UnexpectedEnd),
        }
    }

    pub fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    pub fn expr(&mut self) -> PResult<Poly> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some('+') => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Some('-') => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> PResult<Poly> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.bump();
                    acc = &acc * &self.unary()?;
                }
                Some('/') => {
                    self.bump();
                    let start = self.pos;
                    let d = self.unary()?;
                    if !d.is_constant() {
                        return Err(ParseError { position: start, kind: ParseErrorKind::DivisionByNonConstant });
                    }
                    let c = d.constant_term();
                    if c.is_zero() {
                        return Err(ParseError { position: start, kind: ParseErrorKind::DivisionByZero });
                    }
                    acc = acc.scale(&c.recip());
                }
                Some(c) if c.is_alphanumeric() || c == '(' => {
                    return self.err(ParseErrorKind::Expected("operator (multiplication must be explicit)"));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> PResult<Poly> {
        match self.peek() {
            Some('-') => {
                self.bump();
                Ok(-self.unary()?)
            }
            Some('+') => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> PResult<Poly> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.bump();
            self.skip_ws();
            let start = self.pos;
            let mut tok = String::new();
            while let Some(c) = self.src[self.pos..].chars().next() {
                if c.is_ascii_digit() || c == '.' || c == '-' && tok.is_empty() {
                    tok.push(c);
                    self.bump();
                } else {
                    break;
                }
            }
            if tok.is_empty() {
                if let Some(c) = self.peek() {
                    let mut t = String::new();
                    t.push(c);
                    return Err(ParseError { position: start, kind: ParseErrorKind::BadExponent(t) });
                }
                return self.err(ParseErrorKind::UnexpectedEnd);
            }
            let k: u32 = tok
                .parse()
                .map_err(|_| ParseError { position: start, kind: ParseErrorKind::BadExponent(tok.clone()) })?;
            return Ok(base.pow(k));
        }
        Ok(base)
    }

    fn atom(&mut self) -> PResult<Poly> {
        match self.peek() {
            None => self.err(ParseErrorKind::UnexpectedEnd),
            Some('(') => {
                self.bump();
                let e = self.expr()?;
                self.expect(')', "`)`")?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.src[self.pos..].starts_with(|c: char| c.is_ascii_digit()) {
                    self.bump();
                }
                let int_part = &self.src[start..self.pos];
                let mut value = Rational::from_integer(int_part.parse::<BigInt>().unwrap());
                if self.src[self.pos..].starts_with('.') {
                    self.bump();
                    let fs = self.pos;
                    while self.src[self.pos..].starts_with(|c: char| c.is_ascii_digit()) {
                        self.bump();
                    }
                    let frac = &self.src[fs..self.pos];
                    if frac.is_empty() {
                        return self.err(ParseErrorKind::Expected("digits after decimal point"));
                    }
                    let scale = BigInt::from(10u32).pow(frac.len() as u32);
                    value += Rational::new(frac.parse::<BigInt>().unwrap(), scale);
                }
                if self.src[self.pos..].starts_with(|c: char| c == 'e' || c == 'E') {
                    return self.err(ParseErrorKind::NonRationalCoefficient("scientific notation".into()));
                }
                Ok(Poly::constant_in(value, self.vars.clone()))
            }
            Some(c) if c.is_alphabetic() || c == '_' => {
                let start = self.pos;
                while let Some(c) = self.src[self.pos..].chars().next() {
                    if c.is_alphanumeric() || c == '_' || c == '\'' {
                        self.bump();
                    } else {
                        break;
                    }
                }
                let name = &self.src[start..self.pos];
                if self.vars.iter().any(|v| v == name) {
                    let vars: Vec<&str> = self.vars.iter().map(|s| s.as_str()).collect();
                    return Ok(Poly::var(name, &vars));
                }
                let kind = if NON_RATIONAL.contains(&name) || self.peek() == Some('(') {
                    ParseErrorKind::NonRationalCoefficient(name.to_string())
                } else {
                    ParseErrorKind::UnknownVariable(name.to_string())
                };
                Err(ParseError { position: start, kind })
            }
            Some(c) => self.err(ParseErrorKind::UnexpectedChar(c)),
        }
    }
}

/// Parses a polynomial over the given variable names.
pub fn parse_poly(src: &str, vars: &[&str]) -> Result<Poly, ParseError> {
    let mut p = Parser::new(src, vars);
    let e = p.expr()?;
    if !p.at_end() {
        return p.err(ParseErrorKind::TrailingInput);
    }
    Ok(e)
}
