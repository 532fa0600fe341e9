//! Recursive-descent parser for polynomial expressions and potentials.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*        '/' only by a nonzero constant
//! unary  := ('-' | '+') unary | power
//! power  := base ('^' (int | '(' int ')'))?   exponent must be >= 0
//! base   := int | identifier | '(' expr ')'
//! ```

use std::fmt;

use num_bigint::BigInt;
use thiserror::Error;

use crate::algebra::rational::Rational;
use crate::algebra::{MPoly, Var};

const MAX_EXPONENT: u32 = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnexpectedChar(char),
    UnexpectedEnd,
    UnknownSymbol(String),
    NegativeExponent,
    BadExponent,
    NonConstantDivisor,
    DivisionByZero,
    TrailingInput,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::UnexpectedChar(c) => write!(f, "unexpected character `{c}`"),
            ParseErrorKind::UnexpectedEnd => f.write_str("unexpected end of input"),
            ParseErrorKind::UnknownSymbol(s) => write!(f, "unknown symbol `{s}`"),
            ParseErrorKind::NegativeExponent => f.write_str("negative exponent"),
            ParseErrorKind::BadExponent => write!(f, "exponent must be an integer in 0..={MAX_EXPONENT}"),
            ParseErrorKind::NonConstantDivisor => f.write_str("division by a non-constant (only polynomials are accepted)"),
            ParseErrorKind::DivisionByZero => f.write_str("division by zero"),
            ParseErrorKind::TrailingInput => f.write_str("unexpected trailing input"),
        }
    }
}

/// Syntax error with the character offset where it was detected.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at position {pos}: {kind}")]
pub struct ParseError {
    pub pos: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PotentialError {
    #[error(transparent)]
    Syntax(#[from] ParseError),
    #[error("x2 = y2 = 0 is not invariant: V has terms linear in x2: {terms}")]
    InvariantPlane { terms: String },
}

/// Which identifiers are accepted.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Symbols {
    /// Only `x1` and `x2`.
    Potential,
    /// Any canonical variable name.
    Any,
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
    symbols: Symbols,
}

impl Parser {
    fn new(src: &str, symbols: Symbols) -> Self {
        Parser {
            chars: src.chars().collect(),
            pos: 0,
            symbols,
        }
    }

    fn err<T>(&self, pos: usize, kind: ParseErrorKind) -> Result<T, ParseError> {
        Err(ParseError { pos, kind })
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

    fn expect(&mut self, want: char) -> Result<(), ParseError> {
        match self.peek() {
            Some(c) if c == want => {
                self.pos += 1;
                Ok(())
            }
            Some(c) => self.err(self.pos, ParseErrorKind::UnexpectedChar(c)),
            None => self.err(self.pos, ParseErrorKind::UnexpectedEnd),
        }
    }

    fn expr(&mut self) -> Result<MPoly, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    acc += &self.term()?;
                }
                Some('-') => {
                    self.pos += 1;
                    acc -= &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<MPoly, ParseError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    acc = &acc * &self.unary()?;
                }
                Some('/') => {
                    self.pos += 1;
                    let at = self.pos;
                    let divisor = self.unary()?;
                    let Some(c) = divisor.constant_value() else {
                        return self.err(at, ParseErrorKind::NonConstantDivisor);
                    };
                    if num_traits::Zero::is_zero(&c) {
                        return self.err(at, ParseErrorKind::DivisionByZero);
                    }
                    acc = acc.scale(&(Rational::from_integer(BigInt::from(1)) / c));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<MPoly, ParseError> {
        match self.peek() {
            Some('-') => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some('+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<MPoly, ParseError> {
        let base = self.base()?;
        if self.peek() != Some('^') {
            return Ok(base);
        }
        self.pos += 1;
        let exp = if self.peek() == Some('(') {
            self.pos += 1;
            let sign_at = self.pos;
            if self.peek() == Some('-') {
                return self.err(sign_at, ParseErrorKind::NegativeExponent);
            }
            let e = self.exponent()?;
            self.expect(')')?;
            e
        } else {
            if self.peek() == Some('-') {
                return self.err(self.pos, ParseErrorKind::NegativeExponent);
            }
            self.exponent()?
        };
        Ok(base.pow(exp))
    }

    fn exponent(&mut self) -> Result<u32, ParseError> {
        let start = self.pos;
        let digits = self.digits();
        if digits.is_empty() {
            return match self.peek() {
                Some(c) => self.err(self.pos, ParseErrorKind::UnexpectedChar(c)),
                None => self.err(self.pos, ParseErrorKind::UnexpectedEnd),
            };
        }
        match digits.parse::<u32>() {
            Ok(e) if e <= MAX_EXPONENT => Ok(e),
            _ => self.err(start, ParseErrorKind::BadExponent),
        }
    }

    fn digits(&mut self) -> String {
        self.skip_ws();
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn base(&mut self) -> Result<MPoly, ParseError> {
        match self.peek() {
            None => self.err(self.pos, ParseErrorKind::UnexpectedEnd),
            Some('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(')')?;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let digits = self.digits();
                let n: BigInt = digits.parse().expect("ascii digits");
                Ok(MPoly::constant(Rational::from_integer(n)))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self
                    .chars
                    .get(self.pos)
                    .is_some_and(|c| c.is_ascii_alphanumeric() || *c == '_')
                {
                    self.pos += 1;
                }
                let name: String = self.chars[start..self.pos].iter().collect();
                let var = match self.symbols {
                    Symbols::Potential => match name.as_str() {
                        "x1" => Some(Var::X1),
                        "x2" => Some(Var::X2),
                        _ => None,
                    },
                    Symbols::Any => Var::from_name(&name),
                };
                match var {
                    Some(v) => Ok(MPoly::var(v)),
                    None => self.err(start, ParseErrorKind::UnknownSymbol(name)),
                }
            }
            Some(c) => self.err(self.pos, ParseErrorKind::UnexpectedChar(c)),
        }
    }
}

/// Parses a polynomial expression.
pub fn parse_poly(text: &str, symbols: Symbols) -> Result<MPoly, ParseError> {
    let mut p = Parser::new(text, symbols);
    let value = p.expr()?;
    if p.peek().is_some() {
        return p.err(p.pos, ParseErrorKind::TrailingInput);
    }
    Ok(value)
}

/// Potential V(x1, x2) = φ(x1) − α(x1)·x2²/2 + O(x2³) with Γ invariant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Potential {
    pub v: MPoly,
    pub phi: MPoly,
    pub alpha: MPoly,
    /// Part of V of degree at least 3 in x2.
    pub beta: MPoly,
    pub beta_present: bool,
}

impl Potential {
    pub fn from_poly(v: MPoly) -> Result<Self, PotentialError> {
        let linear = v.coefficient(Var::X2, 1);
        if !linear.is_zero() {
            let offending = &linear * &MPoly::var(Var::X2);
            return Err(PotentialError::InvariantPlane {
                terms: offending.to_string(),
            });
        }
        let phi = v.coefficient(Var::X2, 0);
        let alpha = v.coefficient(Var::X2, 2).scale(&Rational::from_integer(BigInt::from(-2)));
        let quadratic = &alpha.scale(&Rational::new(1.into(), 2.into())) * &MPoly::var_pow(Var::X2, 2);
        let beta = &(&v - &phi) + &quadratic;
        let beta_present = !beta.is_zero();
        Ok(Potential {
            v,
            phi,
            alpha,
            beta,
            beta_present,
        })
    }
}

pub fn parse_potential(text: &str) -> Result<Potential, PotentialError> {
    Potential::from_poly(parse_poly(text, Symbols::Potential)?)
}

/// Canonical text: terms in decreasing canonical order, `*` products, `^` powers.
pub fn format_canonical(p: &MPoly) -> String {
    p.to_string()
}
