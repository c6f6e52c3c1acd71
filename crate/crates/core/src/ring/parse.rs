//! Recursive-descent parser for polynomial text such as `x^2*y - 3/2*x + 1`.

use num_bigint::BigInt;

use crate::error::{Error, Result};

use super::poly::{Poly, RingRef};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Sym(char),
}

struct Parser<'a> {
    ring: &'a RingRef,
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
}

fn err<T>(column: usize, message: impl Into<String>) -> Result<T> {
    Err(Error::Parse {
        line: 1,
        column,
        message: message.into(),
    })
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            toks.push((Tok::Num(s.parse().expect("digits")), col));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            toks.push((Tok::Ident(chars[start..i].iter().collect()), col));
        } else if "+-*/^()".contains(c) {
            toks.push((Tok::Sym(c), col));
            i += 1;
        } else {
            return err(col, format!("unexpected character {c:?}"));
        }
    }
    Ok(toks)
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn column(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(_, c)| *c)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = if self.eat('-') {
            -self.term()?
        } else {
            self.eat('+');
            self.term()?
        };
        loop {
            if self.eat('+') {
                acc = acc + self.term()?;
            } else if self.eat('-') {
                acc = acc - self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.factor()?;
        while self.eat('*') {
            acc = acc * self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Poly> {
        if self.eat('-') {
            return Ok(-self.factor()?);
        }
        let base = self.atom()?;
        if self.eat('^') {
            let col = self.column();
            match self.peek().cloned() {
                Some(Tok::Num(n)) => {
                    self.pos += 1;
                    let e: u32 = n.try_into().or_else(|_| err(col, "exponent too large"))?;
                    Ok(base.pow(e))
                }
                _ => err(col, "expected a non-negative integer exponent"),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Poly> {
        let col = self.column();
        match self.peek().cloned() {
            Some(Tok::Num(num)) => {
                self.pos += 1;
                let den = if self.eat('/') {
                    let dcol = self.column();
                    match self.peek().cloned() {
                        Some(Tok::Num(d)) => {
                            self.pos += 1;
                            (d, dcol)
                        }
                        _ => return err(dcol, "expected a denominator"),
                    }
                } else {
                    (BigInt::from(1), col)
                };
                match self.ring.field().ratio(&num, &den.0) {
                    Some(c) => Ok(Poly::constant(self.ring, c)),
                    None => err(den.1, "denominator vanishes in the coefficient field"),
                }
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                match self.ring.var_index(&name) {
                    Some(i) => Ok(Poly::var(self.ring, i)),
                    None => err(col, format!("unknown variable {name:?}")),
                }
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(')') {
                    return err(self.column(), "expected ')'");
                }
                Ok(inner)
            }
            Some(t) => err(col, format!("unexpected token {t:?}")),
            None => err(col, "unexpected end of input"),
        }
    }
}

pub(crate) fn parse_poly(ring: &RingRef, text: &str) -> Result<Poly> {
    let toks = lex(text)?;
    let mut p = Parser {
        ring,
        toks,
        pos: 0,
        end: text.chars().count() + 1,
    };
    let out = p.expr()?;
    if p.pos != p.toks.len() {
        return err(p.column(), "trailing input");
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{Field, Ring};

    #[test]
    fn grammar() {
        let r = Ring::new(Field::Rational, &["x", "y"]).unwrap();
        let a = parse_poly(&r, "x^2*y - 3*x").unwrap();
        assert_eq!(a.to_string(), "x^2*y - 3*x");
        let b = parse_poly(&r, "(x + y)^2 - 2*x*y").unwrap();
        assert_eq!(b.to_string(), "x^2 + y^2");
        assert_eq!(parse_poly(&r, "-(x)").unwrap().to_string(), "-x");
        assert_eq!(parse_poly(&r, "2/4").unwrap().to_string(), "1/2");
    }

    #[test]
    fn errors_carry_columns() {
        let r = Ring::new(Field::Rational, &["x", "y"]).unwrap();
        match parse_poly(&r, "x + z") {
            Err(Error::Parse { column, .. }) => assert_eq!(column, 5),
            other => panic!("{other:?}"),
        }
        match parse_poly(&r, "x +") {
            Err(Error::Parse { column, .. }) => assert_eq!(column, 4),
            other => panic!("{other:?}"),
        }
        assert!(parse_poly(&r, "x # y").is_err());
        assert!(parse_poly(&r, "1/0").is_err());
        assert!(parse_poly(&r, "x y").is_err());
    }

    #[test]
    fn prime_field_fractions() {
        let r = Ring::new(Field::prime(7).unwrap(), &["x"]).unwrap();
        assert_eq!(parse_poly(&r, "1/2*x").unwrap().to_string(), "-3*x");
        assert!(parse_poly(&r, "1/7").is_err());
    }
}
