use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use super::{Algebra, Polynomial, Rational, Word};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{message} at position {position}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

impl ParseError {
    fn new(position: usize, message: impl Into<String>) -> Self {
        ParseError {
            position,
            message: message.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Rational),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn tokenize(src: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        match c {
            ' ' | '\t' | '\n' | '\r' => {
                i += 1;
                continue;
            }
            '+' => out.push((start, Tok::Plus)),
            '-' => out.push((start, Tok::Minus)),
            '*' => out.push((start, Tok::Star)),
            '^' => out.push((start, Tok::Caret)),
            '(' => out.push((start, Tok::LParen)),
            ')' => out.push((start, Tok::RParen)),
            '0'..='9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let numer: BigInt = src[start..i].parse().expect("digits");
                let mut value = Rational::from_integer(numer);
                if i < bytes.len() && bytes[i] == b'/' {
                    let dstart = i + 1;
                    let mut j = dstart;
                    while j < bytes.len() && bytes[j].is_ascii_digit() {
                        j += 1;
                    }
                    if j == dstart {
                        return Err(ParseError::new(i, "expected denominator after `/`"));
                    }
                    let denom: BigInt = src[dstart..j].parse().expect("digits");
                    if denom.is_zero() {
                        return Err(ParseError::new(dstart, "zero denominator"));
                    }
                    value /= Rational::from_integer(denom);
                    i = j;
                }
                out.push((start, Tok::Num(value)));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(src[start..i].to_string())));
                continue;
            }
            other => return Err(ParseError::new(start, format!("unexpected character `{other}`"))),
        }
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    algebra: &'a Algebra,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn sum(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = Polynomial::zero();
        let mut negate = match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                true
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        loop {
            let p = self.product()?;
            acc = if negate { acc - p } else { acc + p };
            match self.peek() {
                Some(Tok::Plus) => negate = false,
                Some(Tok::Minus) => negate = true,
                _ => return Ok(acc),
            }
            self.pos += 1;
        }
    }

    fn product(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.power()?;
        while let Some(Tok::Star) = self.peek() {
            self.pos += 1;
            acc = acc * self.power()?;
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<Polynomial, ParseError> {
        let base = self.atom()?;
        if let Some(Tok::Caret) = self.peek() {
            self.pos += 1;
            let at = self.here();
            let exp = match self.toks.get(self.pos) {
                Some((_, Tok::Num(n))) if n.is_integer() => n.to_integer(),
                _ => return Err(ParseError::new(at, "expected a nonnegative integer exponent")),
            };
            self.pos += 1;
            let exp: u32 = exp
                .try_into()
                .map_err(|_| ParseError::new(at, "exponent too large"))?;
            let mut acc = Polynomial::one();
            for _ in 0..exp {
                acc = acc * &base;
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Polynomial, ParseError> {
        let at = self.here();
        let tok = self.toks.get(self.pos).map(|(_, t)| t.clone());
        match tok {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(Polynomial::constant(n))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                let v = self
                    .algebra
                    .get(&name)
                    .ok_or_else(|| ParseError::new(at, format!("unknown identifier `{name}`")))?;
                Ok(Polynomial::from(v))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.sum()?;
                match self.peek() {
                    Some(Tok::RParen) => {
                        self.pos += 1;
                        Ok(inner)
                    }
                    _ => Err(ParseError::new(self.here(), "expected `)`")),
                }
            }
            Some(_) => Err(ParseError::new(at, "expected a number, identifier or `(`")),
            None => Err(ParseError::new(at, "unexpected end of input")),
        }
    }
}

pub(crate) fn parse_polynomial(src: &str, algebra: &Algebra) -> Result<Polynomial, ParseError> {
    let toks = tokenize(src)?;
    if toks.is_empty() {
        return Err(ParseError::new(0, "empty polynomial"));
    }
    let mut p = Parser {
        toks,
        pos: 0,
        end: src.len(),
        algebra,
    };
    let poly = p.sum()?;
    if p.pos != p.toks.len() {
        return Err(ParseError::new(p.here(), "trailing input"));
    }
    Ok(poly)
}

pub(crate) fn parse_word(src: &str, algebra: &Algebra) -> Result<Word, ParseError> {
    let p = parse_polynomial(src, algebra)?;
    match p.terms() {
        [t] if t.coeff.is_one() => Ok(t.word.clone()),
        _ => Err(ParseError::new(0, format!("`{}` is not a word", src.trim()))),
    }
}
