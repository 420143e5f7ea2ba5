//! Text form of polynomials.
//!
//! The canonical output is a sum of signed terms `c*v1^e1*...*vk^ek` with
//! rational `c` written `a/b`. The reader accepts that plus parentheses and
//! `/` by a nonzero constant, ignoring whitespace.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::{PolyError, Polynomial, Var};
use crate::field::Field;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(text: &str) -> Result<Vec<Tok>, PolyError> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            c if c.is_whitespace() => i += 1,
            '+' => {
                out.push(Tok::Plus);
                i += 1;
            }
            '-' => {
                out.push(Tok::Minus);
                i += 1;
            }
            '*' => {
                out.push(Tok::Star);
                i += 1;
            }
            '/' => {
                out.push(Tok::Slash);
                i += 1;
            }
            '^' => {
                out.push(Tok::Caret);
                i += 1;
            }
            '(' => {
                out.push(Tok::LParen);
                i += 1;
            }
            ')' => {
                out.push(Tok::RParen);
                i += 1;
            }
            c if c.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                out.push(Tok::Num(s.parse().unwrap()));
            }
            c if c.is_ascii_lowercase() => {
                let start = i;
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                out.push(Tok::Ident(chars[start..i].iter().collect()));
            }
            other => return Err(PolyError::Parse(format!("unexpected character {other:?}"))),
        }
    }
    Ok(out)
}

struct Parser {
    field: Field,
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<Polynomial, PolyError> {
        let mut acc = match self.peek() {
            Some(Tok::Minus) => {
                self.bump();
                -self.term()?
            }
            Some(Tok::Plus) => {
                self.bump();
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    acc = acc + self.term()?;
                }
                Some(Tok::Minus) => {
                    self.bump();
                    acc = acc - self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial, PolyError> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    acc = acc * self.power()?;
                }
                Some(Tok::Slash) => {
                    self.bump();
                    let d = self.power()?;
                    if !d.is_constant() || d.is_zero() {
                        return Err(PolyError::Parse("division must be by a nonzero constant".into()));
                    }
                    let inv = self.field.inv(&d.constant_term())?;
                    acc = acc.scale(&inv);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<Polynomial, PolyError> {
        let base = self.atom()?;
        if let Some(Tok::Caret) = self.peek() {
            self.bump();
            match self.bump() {
                Some(Tok::Num(n)) => {
                    let e: u32 = n.try_into().map_err(|_| PolyError::Parse("exponent too large".into()))?;
                    return Ok(base.pow(e));
                }
                _ => return Err(PolyError::Parse("expected integer exponent".into())),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Polynomial, PolyError> {
        match self.bump() {
            Some(Tok::Num(n)) => {
                let c = self.field.from_rational(&BigRational::from_integer(n))?;
                Ok(Polynomial::constant(self.field, c))
            }
            Some(Tok::Ident(s)) => Ok(Polynomial::var(self.field, s.parse::<Var>()?)),
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                match self.bump() {
                    Some(Tok::RParen) => Ok(inner),
                    _ => Err(PolyError::Parse("missing ')'".into())),
                }
            }
            Some(Tok::Minus) => Ok(-self.atom()?),
            Some(t) => Err(PolyError::Parse(format!("unexpected token {t:?}"))),
            None => Err(PolyError::Parse("unexpected end of input".into())),
        }
    }
}

pub(super) fn parse_polynomial(field: Field, text: &str) -> Result<Polynomial, PolyError> {
    let toks = tokenize(text)?;
    if toks.is_empty() {
        return Err(PolyError::Parse("empty polynomial".into()));
    }
    let mut p = Parser { field, toks, pos: 0 };
    let out = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(PolyError::Parse(format!("trailing input at token {}", p.pos)));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_the_canonical_grammar() {
        let f = Field::Rational;
        let p = parse_polynomial(f, " x1^2-x2 ^2 +1/2*x3 ").unwrap();
        assert_eq!(p.to_string(), "x1^2 - x2^2 + 1/2*x3");
        assert_eq!(parse_polynomial(f, "-3/4*x1*x2^3").unwrap().to_string(), "-3/4*x1*x2^3");
        assert_eq!(parse_polynomial(f, "(x1 + 1)^2").unwrap().to_string(), "x1^2 + 2*x1 + 1");
    }

    #[test]
    fn rejects_garbage() {
        let f = Field::Rational;
        for bad in ["", "x1 +", "x1 ^ y", "1/0", "x1/x2", "X1", "(x1", "x1 x2"] {
            assert!(parse_polynomial(f, bad).is_err(), "{bad:?} should fail");
        }
    }
}
