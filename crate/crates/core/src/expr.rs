//! Text syntax for algebra and Lie elements.
//!
//! Algebra expressions combine rationals, basis labels and `t` (for
//! monomial-basis algebras) with `+ - * ^` and parentheses, e.g. `3/2*t^2 - 1`
//! or `(t-1)^2`. Lie expressions are sums of products containing exactly one
//! generator `d[n]` or `c`, e.g. `d[-1]*(t) + c*(1/2)` or `-4*d[0]`.

use std::sync::Arc;

use num_bigint::BigInt;

use crate::algebra::{Algebra, AlgebraElement};
use crate::error::{Error, Result};
use crate::liealg::LieElement;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Sym(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let ch = chars[i];
        if ch.is_whitespace() {
            i += 1;
        } else if ch.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            out.push(Tok::Num(digits.parse().expect("ascii digits")));
        } else if ch.is_alphabetic() || ch == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^()[]".contains(ch) {
            out.push(Tok::Sym(ch));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character {ch:?} in {s:?}")));
        }
    }
    Ok(out)
}

enum Factor {
    Coeff(AlgebraElement),
    Gen(Gen),
}

#[derive(Clone, Copy)]
enum Gen {
    D(i64),
    C,
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    alg: &'a Arc<Algebra>,
    src: &'a str,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str, alg: &'a Arc<Algebra>) -> Result<Self> {
        Ok(Parser { toks: tokenize(src)?, pos: 0, alg, src })
    }

    fn err(&self, what: &str) -> Error {
        Error::Parse(format!("{what} at token {} in {:?}", self.pos, self.src))
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(&format!("expected '{c}'")))
        }
    }

    fn done(&self) -> Result<()> {
        if self.pos == self.toks.len() {
            Ok(())
        } else {
            Err(self.err("trailing input"))
        }
    }

    fn signed_int(&mut self) -> Result<i64> {
        let neg = self.eat('-');
        if !neg {
            self.eat('+');
        }
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                let v: i64 = n.try_into().map_err(|_| self.err("integer too large"))?;
                Ok(if neg { -v } else { v })
            }
            _ => Err(self.err("expected an integer")),
        }
    }

    /// expr := ['-'|'+'] term (('+'|'-') term)*
    fn alg_expr(&mut self) -> Result<AlgebraElement> {
        let neg = self.eat('-');
        if !neg {
            self.eat('+');
        }
        let mut acc = self.alg_term()?;
        if neg {
            acc = acc.neg();
        }
        loop {
            if self.eat('+') {
                acc = acc.add(&self.alg_term()?)?;
            } else if self.eat('-') {
                acc = acc.sub(&self.alg_term()?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn alg_term(&mut self) -> Result<AlgebraElement> {
        let mut acc = self.alg_factor()?;
        while self.eat('*') {
            acc = acc.multiply(&self.alg_factor()?)?;
        }
        Ok(acc)
    }

    fn alg_factor(&mut self) -> Result<AlgebraElement> {
        match self.peek().cloned() {
            Some(Tok::Num(_)) => Ok(AlgebraElement::scalar(self.alg, self.rational()?)),
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let e = self.alg_expr()?;
                self.expect(')')?;
                self.power(e)
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                self.labelled(&name)
            }
            _ => Err(self.err("expected a number, label or '('")),
        }
    }

    fn rational(&mut self) -> Result<Scalar> {
        let Some(Tok::Num(p)) = self.peek().cloned() else {
            return Err(self.err("expected a number"));
        };
        self.pos += 1;
        if self.peek() == Some(&Tok::Sym('/')) {
            if let Some(Tok::Num(q)) = self.toks.get(self.pos + 1).cloned() {
                self.pos += 2;
                if q == BigInt::from(0) {
                    return Err(self.err("zero denominator"));
                }
                return Ok(Scalar::new(p, q));
            }
        }
        Ok(Scalar::from_integer(p))
    }

    fn power(&mut self, base: AlgebraElement) -> Result<AlgebraElement> {
        if !self.eat('^') {
            return Ok(base);
        }
        let e = self.signed_int()?;
        if e < 0 {
            return Err(self.err("negative powers are only allowed on t"));
        }
        let mut acc = AlgebraElement::unit(self.alg);
        for _ in 0..e {
            acc = acc.multiply(&base)?;
        }
        Ok(acc)
    }

    fn labelled(&mut self, name: &str) -> Result<AlgebraElement> {
        if name == "t" && self.alg.has_monomial_basis() {
            let e = if self.eat('^') { self.signed_int()? } else { 1 };
            return AlgebraElement::t_power(self.alg, e);
        }
        match self.alg.index_of_label(name) {
            Some(i) => {
                let b = AlgebraElement::basis(self.alg, i);
                self.power(b)
            }
            None => Err(Error::Parse(format!("unknown basis label {name:?} in {:?}", self.src))),
        }
    }

    fn lie_expr(&mut self) -> Result<LieElement> {
        let neg = self.eat('-');
        if !neg {
            self.eat('+');
        }
        let mut acc = self.lie_term()?;
        if neg {
            acc = acc.neg();
        }
        loop {
            if self.eat('+') {
                acc = acc.add(&self.lie_term()?)?;
            } else if self.eat('-') {
                acc = acc.sub(&self.lie_term()?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn lie_factor(&mut self) -> Result<Factor> {
        match self.peek().cloned() {
            Some(Tok::Ident(name)) if name == "d" => {
                self.pos += 1;
                self.expect('[')?;
                let n = self.signed_int()?;
                self.expect(']')?;
                Ok(Factor::Gen(Gen::D(n)))
            }
            Some(Tok::Ident(name)) if name == "c" => {
                self.pos += 1;
                Ok(Factor::Gen(Gen::C))
            }
            _ => Ok(Factor::Coeff(self.alg_factor()?)),
        }
    }

    fn lie_term(&mut self) -> Result<LieElement> {
        let mut gen = None;
        let mut coeff = AlgebraElement::unit(self.alg);
        loop {
            match self.lie_factor()? {
                Factor::Gen(g) => {
                    if gen.replace(g).is_some() {
                        return Err(self.err("a term may contain only one generator"));
                    }
                }
                Factor::Coeff(f) => coeff = coeff.multiply(&f)?,
            }
            if !self.eat('*') {
                break;
            }
        }
        match gen {
            Some(Gen::D(n)) => LieElement::d(n, coeff),
            Some(Gen::C) => Ok(LieElement::c(coeff)),
            None => Err(self.err("term without a generator d[n] or c")),
        }
    }
}

pub fn parse_algebra_element(s: &str, alg: &Arc<Algebra>) -> Result<AlgebraElement> {
    let mut p = Parser::new(s, alg)?;
    let e = p.alg_expr()?;
    p.done()?;
    Ok(e)
}

pub fn parse_lie_element(s: &str, alg: &Arc<Algebra>) -> Result<LieElement> {
    let mut p = Parser::new(s, alg)?;
    let e = p.lie_expr()?;
    p.done()?;
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::LocalFactor;
    use crate::scalar::{frac, int};

    #[test]
    fn lie_expressions_round_trip() {
        let q = Algebra::rationals();
        for s in ["-4*d[0] + 1/2*c", "d[2]", "d[-1] - 3*d[1] + c"] {
            assert_eq!(parse_lie_element(s, &q).unwrap().to_string(), s);
        }
        let x = parse_lie_element("d[-1]*(1) + c*(1/2)", &q).unwrap();
        assert_eq!(x.to_string(), "d[-1] + 1/2*c");
    }

    #[test]
    fn algebra_expressions() {
        let a = Algebra::product_local(vec![
            LocalFactor { point: int(0), order: 2 },
            LocalFactor { point: int(1), order: 1 },
        ])
        .unwrap();
        let e = parse_algebra_element("(t-1)^2", &a).unwrap();
        assert_eq!(e, parse_algebra_element("t^2 - 2*t + 1", &a).unwrap());
        let x = parse_lie_element("d[-1]*(t) + 2*t^2*c", &a).unwrap();
        assert_eq!(x.c_part().coeff(2), int(2));

        let l = Algebra::laurent(-2, 2).unwrap();
        let inv = parse_algebra_element("1/2*t^-2", &l).unwrap();
        assert_eq!(inv.coeff(0), frac(1, 2));
    }

    #[test]
    fn errors_name_the_problem() {
        let q = Algebra::rationals();
        assert!(matches!(parse_lie_element("d[1]*c", &q), Err(Error::Parse(_))));
        assert!(matches!(parse_lie_element("x", &q), Err(Error::Parse(_))));
        assert!(matches!(parse_lie_element("2", &q), Err(Error::Parse(_))));
        assert!(matches!(parse_algebra_element("1/0", &q), Err(Error::Parse(_))));
    }
}
