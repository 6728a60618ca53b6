use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::exact::Rational;

use super::monomial::{Monomial, MonomialOrder};
use super::polynomial::Polynomial;

/// Polynomial ring `Q[x_0, ..., x_{n-1}]` with named variables and a monomial order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Ring {
    names: Arc<[String]>,
    order: MonomialOrder,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParsePolynomialError {
    #[error("unexpected character {0:?} at offset {1}")]
    UnexpectedChar(char, usize),
    #[error("unknown variable {0:?}")]
    UnknownVariable(String),
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("unexpected token at offset {0}")]
    UnexpectedToken(usize),
    #[error("division by a non-constant or zero")]
    BadDivision,
    #[error("bad exponent at offset {0}")]
    BadExponent(usize),
    #[error("bad number {0:?}")]
    BadNumber(String),
}

impl Ring {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>, order: MonomialOrder) -> Self {
        Ring { names: names.into_iter().map(Into::into).collect(), order }
    }

    /// Variables `prefix0, ..., prefix{n-1}`.
    pub fn with_prefix(prefix: &str, n: usize, order: MonomialOrder) -> Self {
        Self::new((0..n).map(|i| format!("{prefix}{i}")), order)
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn with_order(&self, order: MonomialOrder) -> Ring {
        Ring { names: self.names.clone(), order }
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn zero(&self) -> Polynomial {
        Polynomial::zero(self.nvars(), self.order)
    }

    pub fn one(&self) -> Polynomial {
        self.constant(Rational::one())
    }

    pub fn constant(&self, c: Rational) -> Polynomial {
        Polynomial::constant(self.nvars(), self.order, c)
    }

    pub fn var(&self, i: usize) -> Polynomial {
        Polynomial::var(self.nvars(), self.order, i)
    }

    pub fn vars(&self) -> Vec<Polynomial> {
        (0..self.nvars()).map(|i| self.var(i)).collect()
    }

    pub fn linear(&self, coeffs: &[Rational], constant: &Rational) -> Polynomial {
        assert_eq!(coeffs.len(), self.nvars());
        Polynomial::linear(self.order, coeffs, constant)
    }

    pub fn monomial(&self, exps: &[u16]) -> Polynomial {
        Polynomial::from_terms(
            self.nvars(),
            self.order,
            vec![(Monomial::from_exps(exps.iter().copied()), Rational::one())],
        )
    }

    /// Brings a polynomial of the same arity under this ring's order.
    pub fn adopt(&self, p: &Polynomial) -> Polynomial {
        assert_eq!(p.nvars(), self.nvars(), "ring arity mismatch");
        p.with_order(self.order)
    }

    pub fn display(&self, p: &Polynomial) -> String {
        p.to_string_with(&self.names)
    }

    pub fn parse(&self, s: &str) -> Result<Polynomial, ParsePolynomialError> {
        let tokens = tokenize(s)?;
        let mut parser = Parser { ring: self, tokens: &tokens, pos: 0 };
        let p = parser.expr()?;
        if parser.pos != tokens.len() {
            return Err(ParsePolynomialError::UnexpectedToken(tokens[parser.pos].1));
        }
        Ok(p)
    }
}

impl fmt::Debug for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QQ[{}; {:?}]", self.names.join(","), self.order)
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Rational),
    Ident(String),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<(Tok, usize)>, ParsePolynomialError> {
    let chars: Vec<(usize, char)> = s.char_indices().collect();
    let mut out = Vec::new();
    let mut k = 0;
    while k < chars.len() {
        let (off, ch) = chars[k];
        if ch.is_whitespace() {
            k += 1;
        } else if ch.is_ascii_digit() || ch == '.' {
            let start = k;
            while k < chars.len() && (chars[k].1.is_ascii_digit() || chars[k].1 == '.') {
                k += 1;
            }
            let text: String = chars[start..k].iter().map(|c| c.1).collect();
            let v: Rational = text.parse().map_err(|_| ParsePolynomialError::BadNumber(text.clone()))?;
            out.push((Tok::Num(v), off));
        } else if ch.is_alphabetic() || ch == '_' {
            let start = k;
            while k < chars.len() && (chars[k].1.is_alphanumeric() || chars[k].1 == '_') {
                k += 1;
            }
            out.push((Tok::Ident(chars[start..k].iter().map(|c| c.1).collect()), off));
        } else if "+-*/^()".contains(ch) {
            out.push((Tok::Op(ch), off));
            k += 1;
        } else {
            return Err(ParsePolynomialError::UnexpectedChar(ch, off));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    ring: &'a Ring,
    tokens: &'a [(Tok, usize)],
    pos: usize,
}

impl Parser<'_> {
    fn peek_op(&self) -> Option<char> {
        match self.tokens.get(self.pos) {
            Some((Tok::Op(c), _)) => Some(*c),
            _ => None,
        }
    }

    fn expr(&mut self) -> Result<Polynomial, ParsePolynomialError> {
        let mut acc = match self.peek_op() {
            Some('-') => {
                self.pos += 1;
                self.term()?.neg()
            }
            Some('+') => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        while let Some(op @ ('+' | '-')) = self.peek_op() {
            self.pos += 1;
            let t = self.term()?;
            acc = if op == '+' { acc.add(&t) } else { acc.sub(&t) };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Polynomial, ParsePolynomialError> {
        let mut acc = self.power()?;
        while let Some(op @ ('*' | '/')) = self.peek_op() {
            self.pos += 1;
            let f = self.power()?;
            if op == '*' {
                acc = acc.mul(&f);
            } else {
                if !f.is_constant() || f.is_zero() {
                    return Err(ParsePolynomialError::BadDivision);
                }
                acc = acc.scale(&f.leading_coeff().unwrap().recip());
            }
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<Polynomial, ParsePolynomialError> {
        let base = self.atom()?;
        if self.peek_op() == Some('^') {
            self.pos += 1;
            match self.tokens.get(self.pos) {
                Some((Tok::Num(n), off)) => {
                    self.pos += 1;
                    let e = n
                        .as_small()
                        .filter(|&(num, den)| den == 1 && (0..=u16::MAX as i64).contains(&num))
                        .ok_or(ParsePolynomialError::BadExponent(*off))?;
                    return Ok(base.pow(e.0 as u32));
                }
                Some((_, off)) => return Err(ParsePolynomialError::BadExponent(*off)),
                None => return Err(ParsePolynomialError::UnexpectedEnd),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Polynomial, ParsePolynomialError> {
        let (tok, off) = self.tokens.get(self.pos).ok_or(ParsePolynomialError::UnexpectedEnd)?;
        self.pos += 1;
        match tok {
            Tok::Num(v) => Ok(self.ring.constant(v.clone())),
            Tok::Ident(name) => self
                .ring
                .index_of(name)
                .map(|i| self.ring.var(i))
                .ok_or_else(|| ParsePolynomialError::UnknownVariable(name.clone())),
            Tok::Op('(') => {
                let e = self.expr()?;
                match self.tokens.get(self.pos) {
                    Some((Tok::Op(')'), _)) => {
                        self.pos += 1;
                        Ok(e)
                    }
                    Some((_, off)) => Err(ParsePolynomialError::UnexpectedToken(*off)),
                    None => Err(ParsePolynomialError::UnexpectedEnd),
                }
            }
            Tok::Op('-') => Ok(self.power()?.neg()),
            _ => Err(ParsePolynomialError::UnexpectedToken(*off)),
        }
    }
}
