//! Value expressions: parsing, rendering and evaluation.
//!
//! Grammar:
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := '-' factor | rational | const | value | '(' expr ')'
//! value  := NAME '(' args [';' int] ')'
//! args   := signed-int (',' signed-int)*
//! ```
//!
//! Names are `M`, `T`, `t`, `S`, `zeta`, `psi` and `Tconv`; the constants are
//! `log2` and `pi`. A leading `-` on an argument marks an odd signature entry
//! (`M`) or an alternating entry (`zeta`). `Tconv` takes two argument lists
//! separated by `|`, and `psi` takes `;s` after its composition.

use crate::closedforms::Evaluable;
use crate::error::{Error, Result};
use crate::indexcore::{AltIndex, Index};
use crate::lincomb::Q;
use crate::numeval::{bits_for, const_log2, const_pi, eval_value, BigReal, NamedValue};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use std::fmt;

/// Named constants.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Constant {
    Log2,
    Pi,
}

/// Abstract syntax tree of a value expression. Rational literals are nonnegative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ValueExpr {
    Num(Q),
    Const(Constant),
    Value(NamedValue),
    Neg(Box<ValueExpr>),
    Add(Box<ValueExpr>, Box<ValueExpr>),
    Sub(Box<ValueExpr>, Box<ValueExpr>),
    Mul(Box<ValueExpr>, Box<ValueExpr>),
}

/// Extra decimal digits carried when evaluating an expression.
pub const GUARD_DIGITS: u32 = 5;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>> {
    let mut out = Vec::new();
    let b = src.as_bytes();
    let mut i = 0;
    while i < b.len() {
        let c = b[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let st = i;
            while i < b.len() && b[i].is_ascii_digit() {
                i += 1;
            }
            out.push((st, Tok::Int(src[st..i].parse().expect("digits"))));
        } else if c.is_ascii_alphabetic() {
            let st = i;
            while i < b.len() && (b[i].is_ascii_alphanumeric() || b[i] == b'_') {
                i += 1;
            }
            out.push((st, Tok::Ident(src[st..i].to_string())));
        } else if "()+-*/,;|".contains(c) {
            out.push((i, Tok::Sym(c)));
            i += 1;
        } else {
            let ch = src[i..].chars().next().unwrap_or('?');
            return Err(Error::Parse { pos: i, msg: format!("unexpected character {ch:?}") });
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.offset(), msg: msg.into() })
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
            self.err(format!("expected '{c}'"))
        }
    }

    fn expr(&mut self) -> Result<ValueExpr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = ValueExpr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = ValueExpr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<ValueExpr> {
        let mut lhs = self.factor()?;
        while self.eat('*') {
            lhs = ValueExpr::Mul(Box::new(lhs), Box::new(self.factor()?));
        }
        Ok(lhs)
    }

    fn int(&mut self) -> Result<BigInt> {
        match self.peek() {
            Some(Tok::Int(n)) => {
                let n = n.clone();
                self.pos += 1;
                Ok(n)
            }
            _ => self.err("expected an integer"),
        }
    }

    fn signed_int(&mut self) -> Result<(usize, i64)> {
        let at = self.offset();
        let neg = self.eat('-');
        let n = self.int()?;
        let v: i64 = n.try_into().map_err(|_| Error::Parse { pos: at, msg: "integer out of range".into() })?;
        Ok((at, if neg { -v } else { v }))
    }

    fn args(&mut self) -> Result<Vec<(usize, i64)>> {
        let mut v = vec![self.signed_int()?];
        while self.eat(',') {
            v.push(self.signed_int()?);
        }
        Ok(v)
    }

    fn factor(&mut self) -> Result<ValueExpr> {
        if self.eat('-') {
            return Ok(ValueExpr::Neg(Box::new(self.factor()?)));
        }
        if self.eat('(') {
            let e = self.expr()?;
            self.expect(')')?;
            return Ok(e);
        }
        let at = self.offset();
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                if self.eat('/') {
                    let d = self.int()?;
                    if d.is_zero() {
                        return Err(Error::Validation(format!("zero denominator at {at}")));
                    }
                    Ok(ValueExpr::Num(Q::new(n, d)))
                } else {
                    Ok(ValueExpr::Num(Q::from_integer(n)))
                }
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                match name.as_str() {
                    "log2" => return Ok(ValueExpr::Const(Constant::Log2)),
                    "pi" => return Ok(ValueExpr::Const(Constant::Pi)),
                    _ => {}
                }
                self.expect('(')?;
                let v = self.value(&name, at)?;
                self.expect(')')?;
                Ok(ValueExpr::Value(v))
            }
            _ => self.err("expected a number, constant, value or '('"),
        }
    }

    fn value(&mut self, name: &str, at: usize) -> Result<NamedValue> {
        let first = self.args()?;
        let second = if self.eat('|') { Some(self.args()?) } else { None };
        let s = if self.eat(';') { Some(self.signed_int()?) } else { None };
        let invalid = |msg: String| Err(Error::Validation(format!("{name} at {at}: {msg}")));
        if second.is_some() && name != "Tconv" {
            return invalid("only Tconv takes '|'".into());
        }
        if s.is_some() && name != "psi" {
            return invalid("only psi takes ';s'".into());
        }
        let positive = |v: &[(usize, i64)]| -> Result<Vec<u32>> {
            v.iter()
                .map(|&(p, x)| {
                    if x <= 0 {
                        Err(Error::Validation(format!("{name} at {p}: entries must be positive")))
                    } else {
                        Ok(x as u32)
                    }
                })
                .collect()
        };
        let signed: Vec<i64> = first.iter().map(|&(_, x)| x).collect();
        match name {
            "M" => Ok(NamedValue::M(Index::from_signed(&signed).map_err(|e| Error::Validation(e.to_string()))?)),
            "zeta" => {
                Ok(NamedValue::Zeta(AltIndex::from_signed(&signed).map_err(|e| Error::Validation(e.to_string()))?))
            }
            "T" => Ok(NamedValue::T(positive(&first)?)),
            "S" => Ok(NamedValue::S(positive(&first)?)),
            "t" => Ok(NamedValue::SmallT(positive(&first)?)),
            "psi" => match s {
                Some((_, sv)) if sv >= 1 => Ok(NamedValue::Psi(positive(&first)?, sv as u32)),
                Some(_) => invalid("s must be positive".into()),
                None => invalid("psi needs ';s'".into()),
            },
            "Tconv" => match second {
                Some(l) => Ok(NamedValue::Conv(positive(&first)?, positive(&l)?)),
                None => invalid("Tconv needs 'k|l'".into()),
            },
            _ => Err(Error::Validation(format!("unknown name {name:?} at {at}"))),
        }
    }
}

/// Parse a value expression.
pub fn parse(src: &str) -> Result<ValueExpr> {
    let toks = lex(src)?;
    let mut p = Parser { toks, pos: 0, end: src.len() };
    if p.peek().is_none() {
        return p.err("empty expression");
    }
    let e = p.expr()?;
    if p.peek().is_some() {
        return p.err("unexpected trailing input");
    }
    Ok(e)
}

fn join(v: &[u32]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

pub fn render_value(v: &NamedValue) -> String {
    match v {
        NamedValue::Psi(k, s) => format!("psi({};{s})", join(k)),
        _ => v.to_string(),
    }
}

impl ValueExpr {
    fn is_sum(&self) -> bool {
        matches!(self, ValueExpr::Add(..) | ValueExpr::Sub(..))
    }

    fn write(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let paren = |f: &mut fmt::Formatter<'_>, e: &ValueExpr, wrap: bool| -> fmt::Result {
            if wrap {
                write!(f, "(")?;
                e.write(f)?;
                write!(f, ")")
            } else {
                e.write(f)
            }
        };
        match self {
            ValueExpr::Num(x) => write!(f, "{x}"),
            ValueExpr::Const(Constant::Log2) => write!(f, "log2"),
            ValueExpr::Const(Constant::Pi) => write!(f, "pi"),
            ValueExpr::Value(v) => write!(f, "{}", render_value(v)),
            ValueExpr::Neg(e) => {
                write!(f, "-")?;
                paren(f, e, e.is_sum() || matches!(**e, ValueExpr::Mul(..)))
            }
            ValueExpr::Add(a, b) | ValueExpr::Sub(a, b) => {
                a.write(f)?;
                write!(f, "{}", if matches!(self, ValueExpr::Add(..)) { " + " } else { " - " })?;
                paren(f, b, b.is_sum())
            }
            ValueExpr::Mul(a, b) => {
                paren(f, a, a.is_sum())?;
                write!(f, "*")?;
                paren(f, b, b.is_sum() || matches!(**b, ValueExpr::Mul(..)))
            }
        }
    }

    /// Numeric value with absolute error below 10^{−digits}.
    pub fn eval(&self, digits: u32) -> Result<BigReal> {
        let work = digits + GUARD_DIGITS;
        let bits = bits_for(work, 10);
        Ok(match self {
            ValueExpr::Num(x) => BigReal::from_ratio(x, bits),
            ValueExpr::Const(Constant::Log2) => const_log2(work),
            ValueExpr::Const(Constant::Pi) => const_pi(work),
            ValueExpr::Value(v) => eval_value(v, work)?,
            ValueExpr::Neg(e) => -e.eval(digits)?,
            ValueExpr::Add(a, b) => &a.eval(digits)? + &b.eval(digits)?,
            ValueExpr::Sub(a, b) => &a.eval(digits)? - &b.eval(digits)?,
            ValueExpr::Mul(a, b) => {
                // Carry extra digits through products of large factors.
                let (x, y) = (a.eval(digits + 4)?, b.eval(digits + 4)?);
                &x * &y
            }
        })
    }

    /// The only named value, if the expression is a bare value.
    pub fn as_value(&self) -> Option<&NamedValue> {
        match self {
            ValueExpr::Value(v) => Some(v),
            _ => None,
        }
    }
}

impl fmt::Display for ValueExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f)
    }
}

impl Evaluable for ValueExpr {
    fn eval_at(&self, digits: u32) -> Result<BigReal> {
        self.eval(digits)
    }
}

/// `x` truncated to `digits` fractional digits with the error annotation.
pub fn render_digits(x: &BigReal, digits: u32) -> String {
    format!("{} (±1ulp)", x.to_decimal(digits))
}

/// Signed rational to text, used by literal rendering in tests and tools.
pub fn rational_literal(x: &Q) -> ValueExpr {
    if x.is_negative() {
        ValueExpr::Neg(Box::new(ValueExpr::Num(x.abs())))
    } else {
        ValueExpr::Num(x.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lincomb::q;

    #[test]
    fn parse_examples() {
        let e = parse("M(1,2,-3)").unwrap();
        assert_eq!(e, ValueExpr::Value(NamedValue::M(Index::new(vec![1, 2, 3], vec![1, 1, -1]).unwrap())));
        let e = parse("Tconv(2|1,1,1)").unwrap();
        assert_eq!(e, ValueExpr::Value(NamedValue::Conv(vec![2], vec![1, 1, 1])));
        let e = parse("2*T(3) - psi(1;2)").unwrap();
        assert!(e.eval(30).unwrap().abs_lt_pow10(-28));
        assert_eq!(parse("3/6").unwrap(), ValueExpr::Num(crate::lincomb::qf(1, 2)));
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse("M(1,2"), Err(Error::Parse { pos: 5, .. })));
        assert!(matches!(parse("2 + # 3"), Err(Error::Parse { pos: 4, .. })));
        assert!(matches!(parse(""), Err(Error::Parse { .. })));
        assert!(matches!(parse("T(-3)"), Err(Error::Validation(_))));
        assert!(matches!(parse("psi(2)"), Err(Error::Validation(_))));
        assert!(matches!(parse("M(2;3)"), Err(Error::Validation(_))));
        assert!(matches!(parse("Q(2)"), Err(Error::Validation(_))));
        assert!(matches!(parse("1/0"), Err(Error::Validation(_))));
    }

    #[test]
    fn render_round_trip() {
        for s in [
            "M(1,2,-3)",
            "2*T(3) - psi(1;2)",
            "-(log2 + pi)*zeta(-1,2)",
            "1/2*Tconv(2|1,1) - (S(1,2) - t(3))",
            "-log2*-pi",
            "a",
        ] {
            let Ok(e) = parse(s) else { continue };
            assert_eq!(parse(&e.to_string()).unwrap(), e, "{s}");
        }
        assert_eq!(rational_literal(&q(-2)).to_string(), "-2");
    }
}
