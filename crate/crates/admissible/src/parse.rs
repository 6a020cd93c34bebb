//! Parser for polynomial expressions such as `x + y + z - 2*i*(x*y + x*z + y*z)`.
//!
//! Grammar: integers and `a/b` literals, the imaginary unit `i`, the
//! variables `x, y, z, x1..x9, z1..z9` (plus `u, v, t` used by the
//! integral-closure frames), `+ - * / ^` and parentheses. The exponent of
//! `^` is a nonnegative integer literal and a divisor must be a nonzero
//! constant.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::gaussian::GaussianRational;
use crate::poly::{sort_vars, MultiPoly};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("parse error at column {col}: {msg}")]
pub struct ParseError {
    pub col: usize,
    pub msg: String,
}

pub fn is_allowed_var(name: &str) -> bool {
    match name {
        "x" | "y" | "z" | "u" | "v" | "t" => true,
        _ => {
            let (head, tail) = name.split_at(1);
            (head == "x" || head == "z") && tail.len() == 1 && matches!(tail.as_bytes()[0], b'1'..=b'9')
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let b = src.as_bytes();
    let mut out = vec![];
    let mut i = 0;
    while i < b.len() {
        let c = b[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let s = i;
            while i < b.len() && (b[i] as char).is_ascii_digit() {
                i += 1;
            }
            out.push((Tok::Num(src[s..i].parse().unwrap()), s + 1));
        } else if c.is_ascii_alphabetic() {
            let s = i;
            while i < b.len() && (b[i] as char).is_ascii_alphanumeric() {
                i += 1;
            }
            out.push((Tok::Ident(src[s..i].to_string()), s + 1));
        } else if "+-*/^()".contains(c) {
            out.push((Tok::Op(c), i + 1));
            i += 1;
        } else {
            return Err(ParseError { col: i + 1, msg: format!("unexpected character '{}'", c) });
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end_col: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }
    fn col(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.1).unwrap_or(self.end_col)
    }
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { col: self.col(), msg: msg.into() })
    }

    fn expr(&mut self) -> Result<MultiPoly, ParseError> {
        let mut acc = self.unary()?;
        while let Some(Tok::Op(c @ ('+' | '-'))) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if c == '+' { &acc + &rhs } else { &acc - &rhs };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<MultiPoly, ParseError> {
        match self.peek() {
            Some(Tok::Op('-')) => {
                self.pos += 1;
                Ok(-&self.term()?)
            }
            Some(Tok::Op('+')) => {
                self.pos += 1;
                self.term()
            }
            _ => self.term(),
        }
    }

    fn term(&mut self) -> Result<MultiPoly, ParseError> {
        let mut acc = self.power()?;
        while let Some(Tok::Op(c @ ('*' | '/'))) = self.peek().cloned() {
            self.pos += 1;
            if c == '*' {
                let rhs = self.power()?;
                acc = &acc * &rhs;
            } else {
                let col = self.col();
                let rhs = self.power()?;
                let constant = rhs.terms().all(|(m, _)| m.degree() == 0);
                if rhs.is_zero() || !constant {
                    return Err(ParseError { col, msg: "divisor must be a nonzero constant".into() });
                }
                acc = acc.scale(&rhs.constant_term().inv());
            }
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<MultiPoly, ParseError> {
        let base = self.atom()?;
        if let Some(Tok::Op('^')) = self.peek() {
            self.pos += 1;
            match self.peek().cloned() {
                Some(Tok::Num(n)) => {
                    self.pos += 1;
                    let e: u32 = n.try_into().map_err(|_| ParseError { col: self.col(), msg: "exponent too large".into() })?;
                    if e > 1000 {
                        return self.err("exponent too large");
                    }
                    Ok(base.pow(e))
                }
                _ => self.err("expected a nonnegative integer exponent"),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<MultiPoly, ParseError> {
        let none: Vec<String> = vec![];
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(MultiPoly::constant(&none, GaussianRational::from_rat(BigRational::from_integer(n))))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if name == "i" {
                    Ok(MultiPoly::constant(&none, GaussianRational::i()))
                } else if is_allowed_var(&name) {
                    let v = vec![name.clone()];
                    Ok(MultiPoly::var(&v, &name))
                } else {
                    self.pos -= 1;
                    self.err(format!("unknown identifier '{}'", name))
                }
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                match self.peek() {
                    Some(Tok::Op(')')) => {
                        self.pos += 1;
                        Ok(e)
                    }
                    _ => self.err("expected ')'"),
                }
            }
            Some(Tok::Op(c)) => self.err(format!("unexpected '{}'", c)),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parse a polynomial. Variables are ordered with `z` last.
pub fn parse_poly(src: &str) -> Result<MultiPoly, ParseError> {
    let toks = lex(src)?;
    if toks.is_empty() {
        return Err(ParseError { col: 1, msg: "empty input".into() });
    }
    let mut p = Parser { toks, pos: 0, end_col: src.len() + 1 };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("unexpected trailing input");
    }
    let mut v = e.vars().to_vec();
    sort_vars(&mut v);
    Ok(e.align(&v))
}

/// Parse, then express over `vars` (which must cover the input's variables).
pub fn parse_poly_in(src: &str, vars: &[String]) -> Result<MultiPoly, ParseError> {
    let p = parse_poly(src)?;
    for v in p.vars() {
        if !vars.contains(v) {
            return Err(ParseError { col: 1, msg: format!("variable {} not allowed here", v) });
        }
    }
    Ok(p.align(vars))
}

pub fn is_zero_poly(p: &MultiPoly) -> bool {
    p.terms().all(|(_, c)| c.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn definite_example_parses_to_seven_terms() {
        let p = parse_poly("x + y + z - 2*i*(x*y + x*z + y*z) - 3*x*y*z").unwrap();
        assert_eq!(p.nterms(), 7);
        assert_eq!(p.to_string(), "x+y+z-2*i*x*y-2*i*x*z-2*i*y*z-3*x*y*z");
        assert_eq!(p.vars(), &["x", "y", "z"]);
    }

    #[test]
    fn errors_carry_columns() {
        let e = parse_poly("x + * y").unwrap_err();
        assert_eq!(e.col, 5);
        assert!(parse_poly("x/y").is_err());
        assert!(parse_poly("w+1").is_err());
        assert!(parse_poly("(x+1").is_err());
        assert!(parse_poly("x^y").is_err());
    }

    #[test]
    fn rationals_and_complex() {
        let p = parse_poly("(1/2+3/4*i)*x - i*y/3 + 2^3").unwrap();
        assert_eq!(p.to_string(), "8+(1/2+3/4*i)*x-1/3*i*y");
        assert_eq!(parse_poly(&p.to_string()).unwrap(), p);
        assert!(is_zero_poly(&parse_poly("x-x").unwrap()));
    }
}
