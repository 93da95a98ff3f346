//! Recursive-descent parser for polynomial expressions.
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := atom ('^' nat)?
//! atom   := int ('/' nat)? | var | 't' | '(' expr ')'
//! ```
//!
//! Implicit multiplication is rejected. `t` denotes the generator of the
//! base field when it is an extension.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::algebra::{Field, FieldElement, MultiPoly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("exponent must be a non-negative integer")]
    NonIntegerExponent,
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("invalid minimal polynomial: {0}")]
    MinimalPolynomial(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} at line {line}, column {column}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub line: usize,
    pub column: usize,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Dot,
    End,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn tokenize(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let (mut line, mut column) = (1usize, 1usize);
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (l, col) = (line, column);
        let mut push = |tok| out.push(Token { tok, line: l, column: col });
        if c == '\n' {
            chars.next();
            line += 1;
            column = 1;
            continue;
        }
        if c.is_whitespace() {
            chars.next();
            column += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let mut s = String::new();
            while let Some(&d) = chars.peek() {
                if !d.is_ascii_digit() {
                    break;
                }
                s.push(d);
                chars.next();
                column += 1;
            }
            push(Tok::Int(s.parse().expect("digits")));
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let mut s = String::new();
            while let Some(&d) = chars.peek() {
                if !(d.is_alphanumeric() || d == '_') {
                    break;
                }
                s.push(d);
                chars.next();
                column += 1;
            }
            push(Tok::Ident(s));
            continue;
        }
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '.' => Tok::Dot,
            other => {
                return Err(ParseError {
                    kind: ParseErrorKind::Syntax(format!("unexpected character `{other}`")),
                    line,
                    column,
                })
            }
        };
        push(tok);
        chars.next();
        column += 1;
    }
    out.push(Token { tok: Tok::End, line, column });
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    vars: &'a [String],
    field: &'a Field,
}

impl Parser<'_> {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn err(&self, tok: &Token, kind: ParseErrorKind) -> ParseError {
        ParseError { kind, line: tok.line, column: tok.column }
    }

    fn syntax(&self, tok: &Token, msg: impl Into<String>) -> ParseError {
        self.err(tok, ParseErrorKind::Syntax(msg.into()))
    }

    fn n(&self) -> usize {
        self.vars.len()
    }

    fn expr(&mut self) -> Result<MultiPoly, ParseError> {
        let mut acc = MultiPoly::zero(self.n());
        let mut negate = match self.peek().tok {
            Tok::Minus => {
                self.next();
                true
            }
            Tok::Plus => {
                self.next();
                false
            }
            _ => false,
        };
        loop {
            let t = self.term()?;
            acc = if negate { &acc - &t } else { &acc + &t };
            match self.peek().tok {
                Tok::Plus => {
                    self.next();
                    negate = false;
                }
                Tok::Minus => {
                    self.next();
                    negate = true;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<MultiPoly, ParseError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek().tok {
                Tok::Star => {
                    self.next();
                    let f = self.factor()?;
                    acc = &acc * &f;
                }
                Tok::Ident(_) | Tok::Int(_) | Tok::LParen => {
                    let tok = self.peek().clone();
                    return Err(self.syntax(&tok, "implicit multiplication is not allowed; use `*`"));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<MultiPoly, ParseError> {
        let base = self.atom()?;
        if self.peek().tok != Tok::Caret {
            return Ok(base);
        }
        self.next();
        let tok = self.next();
        match &tok.tok {
            Tok::Int(e) => {
                if self.peek().tok == Tok::Slash || self.peek().tok == Tok::Dot {
                    let bad = self.peek().clone();
                    return Err(self.err(&bad, ParseErrorKind::NonIntegerExponent));
                }
                let e: u32 = e.clone().try_into().map_err(|_| self.syntax(&tok, "exponent too large"))?;
                Ok(base.pow(e))
            }
            Tok::Minus => Err(self.err(&tok, ParseErrorKind::NonIntegerExponent)),
            _ => Err(self.err(&tok, ParseErrorKind::NonIntegerExponent)),
        }
    }

    fn atom(&mut self) -> Result<MultiPoly, ParseError> {
        let tok = self.next();
        let n = self.n();
        match tok.tok.clone() {
            Tok::Int(num) => {
                let mut value = BigRational::from_integer(num);
                if self.peek().tok == Tok::Slash {
                    self.next();
                    let dtok = self.next();
                    let Tok::Int(den) = dtok.tok.clone() else {
                        return Err(self.syntax(&dtok, "expected a natural number after `/`"));
                    };
                    if den.is_zero() {
                        return Err(self.syntax(&dtok, "zero denominator"));
                    }
                    value /= BigRational::from_integer(den);
                }
                if self.peek().tok == Tok::Dot {
                    let bad = self.peek().clone();
                    return Err(self.syntax(&bad, "decimal literals are not supported; use p/q"));
                }
                Ok(MultiPoly::constant(n, FieldElement::from_rational(value)))
            }
            Tok::Ident(name) => {
                if let Some(i) = self.vars.iter().position(|v| *v == name) {
                    return Ok(MultiPoly::var(n, i));
                }
                if name == "t" {
                    if let Some(g) = self.field.generator() {
                        return Ok(MultiPoly::constant(n, g));
                    }
                }
                Err(self.err(&tok, ParseErrorKind::UnknownVariable(name)))
            }
            Tok::LParen => {
                let inner = self.expr()?;
                let close = self.next();
                if close.tok != Tok::RParen {
                    return Err(self.syntax(&close, "expected `)`"));
                }
                Ok(inner)
            }
            Tok::End => Err(self.syntax(&tok, "unexpected end of input")),
            other => Err(self.syntax(&tok, format!("unexpected token {other:?}"))),
        }
    }
}

/// Parses `text` as a polynomial in `vars` over `field`.
pub fn parse_poly(text: &str, vars: &[String], field: &Field) -> Result<MultiPoly, ParseError> {
    if let Some(dup) = vars.iter().enumerate().find(|(i, v)| vars[..*i].contains(v)) {
        return Err(ParseError {
            kind: ParseErrorKind::Syntax(format!("duplicate variable name `{}`", dup.1)),
            line: 1,
            column: 1,
        });
    }
    if !field.is_rational() && vars.iter().any(|v| v == "t") {
        return Err(ParseError {
            kind: ParseErrorKind::Syntax("`t` is reserved for the field generator".into()),
            line: 1,
            column: 1,
        });
    }
    let tokens = tokenize(text)?;
    let mut p = Parser { tokens, pos: 0, vars, field };
    let poly = p.expr()?;
    let end = p.peek().clone();
    if end.tok != Tok::End {
        return Err(p.syntax(&end, "trailing input"));
    }
    Ok(poly)
}

/// Parses and requires a homogeneous (or zero) polynomial.
pub fn parse_homogeneous(text: &str, vars: &[String], field: &Field) -> Result<MultiPoly, ParseError> {
    let poly = parse_poly(text, vars, field)?;
    if !poly.is_homogeneous() {
        return Err(ParseError { kind: ParseErrorKind::NotHomogeneous, line: 1, column: 1 });
    }
    Ok(poly)
}

/// Parses a constant expression such as `t`, `-1` or `3/2 - t^2`.
pub fn parse_field_element(text: &str, field: &Field) -> Result<FieldElement, ParseError> {
    let p = parse_poly(text, &[], field)?;
    let c = p.terms().next().map(|(_, c)| c.clone()).unwrap_or_default();
    Ok(c)
}

/// Parses a monic integer minimal polynomial in `t`.
pub fn parse_minpoly(text: &str) -> Result<Vec<BigInt>, ParseError> {
    let vars = vec!["t".to_string()];
    let p = parse_poly(text, &vars, &Field::Rational)?;
    let bad = |msg: &str| ParseError {
        kind: ParseErrorKind::MinimalPolynomial(msg.to_string()),
        line: 1,
        column: 1,
    };
    let deg = p.degree().ok_or_else(|| bad("zero polynomial"))? as usize;
    let mut coeffs = vec![BigInt::zero(); deg + 1];
    for (m, c) in p.terms() {
        let q = c.as_rational().expect("rational coefficients");
        if !q.is_integer() {
            return Err(bad("coefficients must be integers"));
        }
        coeffs[m.exps()[0] as usize] = q.to_integer();
    }
    if !coeffs[deg].is_one() {
        return Err(bad("polynomial must be monic"));
    }
    Ok(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Monomial;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn fermat_binary_cubic() {
        let vars = names(&["z0", "z1"]);
        let p = parse_poly("z0^3 + z1^3", &vars, &Field::Rational).unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(p.coeff(&Monomial::new(vec![3, 0])), FieldElement::one());
        assert_eq!(p.homogeneous_degree(), Some(3));
    }

    #[test]
    fn extension_coefficients() {
        let field = Field::extension(parse_minpoly("t^3 - 4").unwrap()).unwrap();
        let vars = names(&["z0", "z1"]);
        let p = parse_poly("3/2*z0^2*z1 - t*z1^3", &vars, &field).unwrap();
        assert_eq!(p.coeff(&Monomial::new(vec![2, 1])), FieldElement::from_ratio(3, 2));
        assert_eq!(p.coeff(&Monomial::new(vec![0, 3])), -field.generator().unwrap());
    }

    #[test]
    fn errors_carry_positions() {
        let vars = names(&["x", "y"]);
        let e = parse_poly("x +\n  2 y", &vars, &Field::Rational).unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::Syntax(_)));
        assert_eq!((e.line, e.column), (2, 5));

        let e = parse_poly("x*w", &vars, &Field::Rational).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnknownVariable("w".into()));
        assert_eq!(e.column, 3);

        let e = parse_poly("x^1/2", &vars, &Field::Rational).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::NonIntegerExponent);
        let e = parse_poly("x^-1", &vars, &Field::Rational).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::NonIntegerExponent);

        let e = parse_homogeneous("x^2 + y", &vars, &Field::Rational).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::NotHomogeneous);
        assert!(parse_poly("t*x", &vars, &Field::Rational).is_err());
        assert!(parse_poly("(x + y", &vars, &Field::Rational).is_err());
        assert!(parse_poly("1.5*x", &vars, &Field::Rational).is_err());
    }

    #[test]
    fn whitespace_and_order_independent() {
        let vars = names(&["a", "b", "c"]);
        let p = parse_poly("a*b - 3*c^2 + (a + b)^2", &vars, &Field::Rational).unwrap();
        let q = parse_poly("  b^2+(-3)*c^2\n+2*a*b +a^2+ a*b  ", &vars, &Field::Rational).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn minimal_polynomials() {
        assert_eq!(parse_minpoly("t^3 - 4").unwrap(), vec![(-4).into(), 0.into(), 0.into(), 1.into()]);
        assert!(parse_minpoly("2*t^2 - 1").is_err());
        assert!(parse_minpoly("t^2 - 1/2").is_err());
        assert_eq!(parse_field_element("-1", &Field::Rational).unwrap(), FieldElement::from_int(-1));
    }
}
