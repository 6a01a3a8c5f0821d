//! Infix polynomial parser: `+ - * / ^`, parentheses, integer and rational
//! literals. Division is only allowed by nonzero constants.

use num_bigint::BigInt;

use super::field::{Coeff, CoefficientField};
use super::poly::Poly;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
}

struct Lexed {
    toks: Vec<(Tok, usize)>,
    end: usize,
}

fn lex(s: &str) -> std::result::Result<Lexed, (usize, String)> {
    let chars: Vec<char> = s.chars().collect();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            toks.push((Tok::Num(text.parse().unwrap()), start));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            toks.push((Tok::Ident(chars[start..i].iter().collect()), start));
        } else if "+-*/^()".contains(c) {
            toks.push((Tok::Op(c), i));
            i += 1;
        } else {
            return Err((i, format!("unexpected character '{c}'")));
        }
    }
    Ok(Lexed { toks, end: chars.len() })
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
    vars: &'a [String],
    field: &'a CoefficientField,
}

type PResult<T> = std::result::Result<T, (usize, String)>;

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.1).unwrap_or(self.end)
    }

    fn nvars(&self) -> usize {
        self.vars.len()
    }

    fn expr(&mut self) -> PResult<Poly> {
        let mut acc = self.term()?;
        while let Some(Tok::Op(c @ ('+' | '-'))) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if c == '+' { acc.add(&rhs, self.field) } else { acc.sub(&rhs, self.field) };
        }
        Ok(acc)
    }

    fn term(&mut self) -> PResult<Poly> {
        let mut acc = self.unary()?;
        while let Some(Tok::Op(c @ ('*' | '/'))) = self.peek().cloned() {
            let at = self.here();
            self.pos += 1;
            let rhs = self.unary()?;
            if c == '*' {
                acc = acc.mul(&rhs, self.field);
            } else {
                if !rhs.is_constant() || rhs.is_zero() {
                    return Err((at, "division only by nonzero constants".into()));
                }
                let inv = self.field.inv(&rhs.constant_term());
                acc = acc.scale(&inv, self.field);
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> PResult<Poly> {
        match self.peek() {
            Some(Tok::Op('-')) => {
                self.pos += 1;
                Ok(self.unary()?.neg(self.field))
            }
            Some(Tok::Op('+')) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> PResult<Poly> {
        let base = self.atom()?;
        if let Some(Tok::Op('^')) = self.peek() {
            self.pos += 1;
            let at = self.here();
            match self.peek().cloned() {
                Some(Tok::Num(n)) => {
                    self.pos += 1;
                    let e: u32 = n.try_into().map_err(|_| (at, "exponent too large".to_string()))?;
                    Ok(base.pow(e, self.field))
                }
                _ => Err((at, "expected a nonnegative integer exponent".into())),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> PResult<Poly> {
        let at = self.here();
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(Poly::constant(self.nvars(), self.field.normalize(Coeff::from_integer(n))))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                match self.vars.iter().position(|v| *v == name) {
                    Some(i) => Ok(Poly::var(self.nvars(), i)),
                    None => Err((at, format!("undeclared variable '{name}'"))),
                }
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let inner = self.expr()?;
                match self.peek() {
                    Some(Tok::Op(')')) => {
                        self.pos += 1;
                        Ok(inner)
                    }
                    _ => Err((self.here(), "expected ')'".into())),
                }
            }
            Some(Tok::Op(c)) => Err((at, format!("unexpected '{c}'"))),
            None => Err((at, "unexpected end of input".into())),
        }
    }
}

/// Parses `s`; positions in errors are 0-based character offsets.
pub fn parse_poly_at(s: &str, vars: &[String], field: &CoefficientField) -> std::result::Result<Poly, (usize, String)> {
    let Lexed { toks, end } = lex(s)?;
    let mut p = Parser { toks, pos: 0, end, vars, field };
    let out = p.expr()?;
    if p.pos != p.toks.len() {
        return Err((p.here(), "trailing input".into()));
    }
    Ok(out)
}

/// Parses a polynomial; errors report line 1 and a 1-based column.
pub fn parse_poly(s: &str, vars: &[String], field: &CoefficientField) -> Result<Poly> {
    parse_poly_at(s, vars, field).map_err(|(col, msg)| Error::parse(1, col + 1, msg))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vars() -> Vec<String> {
        vec!["x".into(), "y".into()]
    }

    #[test]
    fn parses_and_prints() {
        let f = CoefficientField::Rationals;
        let p = parse_poly("(x+y)^2 - 2*x*y + 3/2", &vars(), &f).unwrap();
        assert_eq!(p.format(&vars()), "x^2 + y^2 + 3/2");
        let q = parse_poly("-x^2*y + x", &vars(), &f).unwrap();
        assert_eq!(parse_poly(&q.format(&vars()), &vars(), &f).unwrap(), q);
    }

    #[test]
    fn positioned_errors() {
        let f = CoefficientField::Rationals;
        match parse_poly("x + z", &vars(), &f) {
            Err(Error::Parse { column, message, .. }) => {
                assert_eq!(column, 5);
                assert!(message.contains("'z'"));
            }
            other => panic!("{other:?}"),
        }
        assert!(parse_poly("x / y", &vars(), &f).is_err());
        assert!(parse_poly("x +", &vars(), &f).is_err());
    }

    #[test]
    fn prime_field_reduction() {
        let f = CoefficientField::Prime(5);
        let p = parse_poly("7*x + 1/2", &vars(), &f).unwrap();
        assert_eq!(p.format(&vars()), "2*x + 3");
    }
}
