//! Reader for polynomial expressions such as `1/2*(x + y^2/6)^2 - 3*x*y`.

use std::sync::Arc;

use num_traits::Zero;

use super::poly::{SparsePoly, VarSet};
use super::rational::{parse_q, Q};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Op(char),
}

fn lex(s: &str) -> Result<Vec<Tok>> {
    let cs: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let st = i;
            while i < cs.len() && cs[i].is_ascii_digit() {
                i += 1;
            }
            out.push(Tok::Num(cs[st..i].iter().collect()));
        } else if c.is_alphabetic() || c == '_' {
            let st = i;
            while i < cs.len() && (cs[i].is_alphanumeric() || cs[i] == '_') {
                i += 1;
            }
            // bracketed index suffix, e.g. t[1,2] or p[3,2:1]
            if i < cs.len() && cs[i] == '[' {
                while i < cs.len() && cs[i] != ']' {
                    i += 1;
                }
                if i == cs.len() {
                    return Err(Error::Invalid(format!("unclosed `[` in `{s}`")));
                }
                i += 1;
            }
            out.push(Tok::Ident(cs[st..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(Error::Invalid(format!("unexpected `{c}` in `{s}`")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    vars: &'a Arc<VarSet>,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<SparsePoly> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<SparsePoly> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.unary()?;
            } else if self.eat('/') {
                let d = self.unary()?;
                if !d.is_constant() || d.constant_term().is_zero() {
                    return Err(Error::Invalid("division by a non-constant or zero".into()));
                }
                acc = acc.scale(&(Q::from_integer(1.into()) / d.constant_term()));
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<SparsePoly> {
        if self.eat('-') {
            return Ok(-&self.unary()?);
        }
        if self.eat('+') {
            return self.unary();
        }
        let base = self.atom()?;
        if self.eat('^') {
            match self.toks.get(self.pos).cloned() {
                Some(Tok::Num(n)) => {
                    self.pos += 1;
                    let e: u32 = n.parse().map_err(|_| Error::Invalid(format!("bad exponent {n}")))?;
                    return Ok(base.pow(e));
                }
                _ => return Err(Error::Invalid("exponent must be a non-negative integer".into())),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<SparsePoly> {
        match self.toks.get(self.pos).cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(SparsePoly::constant(self.vars, parse_q(&n)?))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                SparsePoly::var_named(self.vars, &name)
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(Error::Invalid("missing `)`".into()));
                }
                Ok(e)
            }
            other => Err(Error::Invalid(format!("unexpected token {other:?}"))),
        }
    }
}

/// Parses an expression over `vars`; unknown names are an error.
pub fn parse_poly(s: &str, vars: &Arc<VarSet>) -> Result<SparsePoly> {
    let mut p = Parser { toks: lex(s)?, pos: 0, vars };
    let out = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::Invalid(format!("trailing input in `{s}`")));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::q;

    #[test]
    fn basic_expressions() {
        let v = VarSet::ungraded(&["x", "y", "t[1,2]"]);
        let p = parse_poly("1/2*(x + y^2/6)^2 - 3*x*y", &v).unwrap();
        assert_eq!(p.coeff(&[2, 0, 0]), q(1, 2));
        assert_eq!(p.coeff(&[1, 2, 0]), q(1, 6));
        assert_eq!(p.coeff(&[0, 4, 0]), q(1, 72));
        assert_eq!(p.coeff(&[1, 1, 0]), q(-3, 1));
        let r = parse_poly("-t[1,2]^3/19440", &v).unwrap();
        assert_eq!(r.coeff(&[0, 0, 3]), q(-1, 19440));
    }

    #[test]
    fn errors() {
        let v = VarSet::ungraded(&["x"]);
        assert!(parse_poly("x/x", &v).is_err());
        assert!(parse_poly("w", &v).is_err());
        assert!(parse_poly("(x", &v).is_err());
        assert!(parse_poly("x^y", &v).is_err());
    }
}
