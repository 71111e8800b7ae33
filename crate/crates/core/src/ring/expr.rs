//! Arithmetic expressions over named symbols: integers, `+ - * /`, `^` with
//! integer exponents, parentheses, and implicit multiplication (`5t`).
//! Matrix literals are `[[a, b], [c, d]]`.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::Field;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Int(BigInt),
    Sym(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
}

impl Expr {
    /// Evaluates into a field; `lookup` resolves symbols.
    pub fn eval<T: Field>(&self, proto: &T, lookup: &dyn Fn(&str) -> Option<T>) -> Result<T> {
        Ok(match self {
            Expr::Int(n) => {
                let q = BigRational::from_integer(n.clone());
                match i64::try_from(n) {
                    Ok(k) => proto.from_i64_like(k),
                    Err(_) => {
                        // Horner in base 2^32 keeps big literals exact.
                        let (sign, digits) = q.numer().to_u32_digits();
                        let base = proto.from_i64_like(1 << 32);
                        let mut acc = proto.zero_like();
                        for d in digits.iter().rev() {
                            acc = acc.mul(&base).add(&proto.from_i64_like(*d as i64));
                        }
                        if sign == num_bigint::Sign::Minus {
                            acc.neg()
                        } else {
                            acc
                        }
                    }
                }
            }
            Expr::Sym(s) => lookup(s).ok_or_else(|| Error::InvalidInput(format!("unknown symbol `{s}`")))?,
            Expr::Neg(a) => a.eval(proto, lookup)?.neg(),
            Expr::Add(a, b) => a.eval(proto, lookup)?.add(&b.eval(proto, lookup)?),
            Expr::Sub(a, b) => a.eval(proto, lookup)?.sub(&b.eval(proto, lookup)?),
            Expr::Mul(a, b) => a.eval(proto, lookup)?.mul(&b.eval(proto, lookup)?),
            Expr::Div(a, b) => {
                let d = b.eval(proto, lookup)?;
                a.eval(proto, lookup)?.div(&d).ok_or_else(|| Error::NotInvertible(d.to_string()))?
            }
            Expr::Pow(a, e) => {
                let base = a.eval(proto, lookup)?;
                base.pow_i(*e).ok_or_else(|| Error::NotInvertible(base.to_string()))?
            }
        })
    }

    /// Symbols in order of first appearance.
    pub fn symbols(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_symbols(&mut out);
        out
    }

    fn collect_symbols(&self, out: &mut Vec<String>) {
        match self {
            Expr::Int(_) => {}
            Expr::Sym(s) => {
                if !out.contains(s) {
                    out.push(s.clone());
                }
            }
            Expr::Neg(a) | Expr::Pow(a, _) => a.collect_symbols(out),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.collect_symbols(out);
                b.collect_symbols(out);
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Op(char),
}

struct Lexer<'a> {
    src: &'a str,
    toks: Vec<(Tok, usize)>,
    pos: usize,
    origin: (usize, usize),
}

/// Line and column (1-based) of byte `offset` in `src`, relative to `origin`.
pub(crate) fn locate(src: &str, offset: usize, origin: (usize, usize)) -> (usize, usize) {
    let before = &src[..offset.min(src.len())];
    match before.rfind('\n') {
        Some(nl) => (origin.0 + before.matches('\n').count(), before[nl + 1..].chars().count() + 1),
        None => (origin.0, origin.1 + before.chars().count()),
    }
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str, origin: (usize, usize)) -> Result<Self> {
        let mut toks = Vec::new();
        let bytes = src.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            let c = bytes[i] as char;
            if c.is_whitespace() {
                i += 1;
            } else if c.is_ascii_digit() {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                toks.push((Tok::Int(src[start..i].parse().unwrap()), start));
            } else if c.is_alphabetic() || c == '_' {
                let start = i;
                while i < bytes.len() && ((bytes[i] as char).is_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                toks.push((Tok::Ident(src[start..i].to_string()), start));
            } else if "+-*/^()[],".contains(c) {
                toks.push((Tok::Op(c), i));
                i += 1;
            } else {
                let (line, col) = locate(src, i, origin);
                let ch = src[i..].chars().next().unwrap();
                return Err(Error::parse(line, col, format!("unexpected character `{ch}`")));
            }
        }
        Ok(Lexer { src, toks, pos: 0, origin })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        self.pos += 1;
        t
    }

    fn error(&self, msg: impl Into<String>) -> Error {
        let offset = self.toks.get(self.pos).map_or(self.src.len(), |(_, o)| *o);
        let (line, col) = locate(self.src, offset, self.origin);
        Error::parse(line, col, msg)
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected `{c}`")))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Op('+')) => {
                    self.pos += 1;
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(Tok::Op('-')) => {
                    self.pos += 1;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Op('*')) => {
                    self.pos += 1;
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Some(Tok::Op('/')) => {
                    self.pos += 1;
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
                }
                Some(Tok::Int(_) | Tok::Ident(_) | Tok::Op('(')) => {
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.power()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(Tok::Op('-')) => {
                self.pos += 1;
                Ok(Expr::Neg(Box::new(self.unary()?)))
            }
            Some(Tok::Op('+')) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Op('^')) {
            return Ok(base);
        }
        self.pos += 1;
        let e = self.exponent()?;
        Ok(Expr::Pow(Box::new(base), e))
    }

    fn exponent(&mut self) -> Result<i64> {
        let parens = self.peek() == Some(&Tok::Op('('));
        if parens {
            self.pos += 1;
        }
        let neg = match self.peek() {
            Some(Tok::Op('-')) => {
                self.pos += 1;
                true
            }
            Some(Tok::Op('+')) => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        let e = match self.peek() {
            Some(Tok::Int(n)) => i64::try_from(n).map_err(|_| self.error("exponent too large"))?,
            _ => return Err(self.error("expected an integer exponent")),
        };
        self.pos += 1;
        if parens {
            self.expect(')')?;
        }
        Ok(if neg { -e } else { e })
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok(Expr::Int(n))
            }
            Some(Tok::Ident(s)) => {
                self.pos += 1;
                Ok(Expr::Sym(s))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            _ => Err(self.error("expected a number, a symbol or `(`")),
        }
    }

    fn finish(&self) -> Result<()> {
        if self.pos < self.toks.len() {
            Err(self.error("unexpected trailing input"))
        } else {
            Ok(())
        }
    }
}

/// Parses an expression; `origin` is the (line, column) where `src` starts,
/// used for error positions.
pub fn parse_expr_at(src: &str, origin: (usize, usize)) -> Result<Expr> {
    let mut lx = Lexer::new(src, origin)?;
    let e = lx.expr()?;
    lx.finish()?;
    Ok(e)
}

pub fn parse_expr(src: &str) -> Result<Expr> {
    parse_expr_at(src, (1, 1))
}

/// Parses a matrix literal `[[a, b], [c, d]]` into rows of expressions.
pub fn parse_matrix_at(src: &str, origin: (usize, usize)) -> Result<Vec<Vec<Expr>>> {
    let mut lx = Lexer::new(src, origin)?;
    lx.expect('[')?;
    let mut rows = Vec::new();
    loop {
        lx.expect('[')?;
        let mut row = vec![lx.expr()?];
        while lx.peek() == Some(&Tok::Op(',')) {
            lx.pos += 1;
            row.push(lx.expr()?);
        }
        lx.expect(']')?;
        if let Some(first) = rows.first() {
            let first: &Vec<Expr> = first;
            if first.len() != row.len() {
                return Err(lx.error("rows of different lengths"));
            }
        }
        rows.push(row);
        match lx.next() {
            Some(Tok::Op(',')) => continue,
            Some(Tok::Op(']')) => break,
            _ => {
                lx.pos -= 1;
                return Err(lx.error("expected `,` or `]`"));
            }
        }
    }
    lx.finish()?;
    Ok(rows)
}

pub fn parse_matrix(src: &str) -> Result<Vec<Vec<Expr>>> {
    parse_matrix_at(src, (1, 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::rational::rat;

    fn eval_q(s: &str, x: i64) -> BigRational {
        parse_expr(s).unwrap().eval(&rat(0), &|name| (name == "x").then(|| rat(x))).unwrap()
    }

    #[test]
    fn precedence_and_powers() {
        assert_eq!(eval_q("1 + 2*3", 0), rat(7));
        assert_eq!(eval_q("-x^2", 3), rat(-9));
        assert_eq!(eval_q("x^-1", 4), BigRational::new(1.into(), 4.into()));
        assert_eq!(eval_q("x^(-2)", 2), BigRational::new(1.into(), 4.into()));
        assert_eq!(eval_q("5x - 2(x+1)", 3), rat(7));
        assert_eq!(eval_q("1/2*x", 4), rat(2));
        assert_eq!(eval_q("123456789012345678901234567890 - 123456789012345678901234567889", 0), rat(1));
    }

    #[test]
    fn errors_carry_positions() {
        match parse_expr_at("1 +\n  * 2", (5, 10)) {
            Err(Error::Parse { line, col, .. }) => assert_eq!((line, col), (6, 3)),
            other => panic!("{other:?}"),
        }
        assert!(parse_expr("x ^ y").is_err());
        assert!(parse_expr("(1").is_err());
    }

    #[test]
    fn matrices() {
        let m = parse_matrix("[[1, x], [0, x^-1]]").unwrap();
        assert_eq!(m.len(), 2);
        assert_eq!(m[1][1], Expr::Pow(Box::new(Expr::Sym("x".into())), -1));
        assert!(parse_matrix("[[1, 2], [3]]").is_err());
    }
}
