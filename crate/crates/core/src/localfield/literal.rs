//! Element literals.
//!
//! One small expression grammar covers every literal form:
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' ['-'] atom)?
//! atom   := integer | 'p' | 't' | 'π' | 'n' | 'O' '(' expr ')' | '(' expr ')'
//! ```
//!
//! `p` (for `Q_p`) or `t` (for `F_p((t))`) is the uniformiser, `O(p^N)` marks
//! the absolute precision, and `n` is the sequence index used by matrix
//! sequences. So `"49/3"`, `"p^-1 * (2 + 3*p) + O(p^5)"` and `"1/(1+p^n)"`
//! all parse.

use num_bigint::BigInt;

use super::{FieldDesc, FieldKind, LFElement, ValResult};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Int(BigInt),
    Uniformizer,
    Index,
    BigO(Box<Expr>),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Sym(char),
}

struct Parser<'a> {
    src: &'a str,
    toks: Vec<(usize, Tok)>,
    pos: usize,
    field: FieldDesc,
}

fn tokenize(src: &str) -> Result<Vec<(usize, Tok)>> {
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (at, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].1.is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().map(|&(_, c)| c).collect();
            out.push((at, Tok::Num(text.parse().unwrap())));
        } else if c.is_alphabetic() {
            let start = i;
            while i < chars.len() && chars[i].1.is_alphanumeric() {
                i += 1;
            }
            let text: String = chars[start..i].iter().map(|&(_, c)| c).collect();
            out.push((at, Tok::Ident(text)));
        } else if "+-*/^()".contains(c) {
            out.push((at, Tok::Sym(c)));
            i += 1;
        } else {
            return Err(Error::Parse {
                literal: src.to_string(),
                position: at,
                message: format!("unexpected character `{c}`"),
            });
        }
    }
    Ok(out)
}

impl<'a> Parser<'a> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        let position = self
            .toks
            .get(self.pos)
            .map(|(at, _)| *at)
            .unwrap_or(self.src.len());
        Err(Error::Parse {
            literal: self.src.to_string(),
            position,
            message: message.into(),
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
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
            self.err(format!("expected `{c}`"))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat('/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat('-') {
            Ok(Expr::Neg(Box::new(self.unary()?)))
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.eat('^') {
            let exponent = if self.eat('-') {
                Expr::Neg(Box::new(self.atom()?))
            } else {
                self.atom()?
            };
            Ok(Expr::Pow(Box::new(base), Box::new(exponent)))
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        let Some(tok) = self.peek().cloned() else {
            return self.err("unexpected end of literal");
        };
        match tok {
            Tok::Num(n) => {
                self.pos += 1;
                Ok(Expr::Int(n))
            }
            Tok::Sym('(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Ident(name) => {
                let expr = match (name.as_str(), self.field.kind) {
                    ("π" | "pi", _) | ("p", FieldKind::Padic) | ("t", FieldKind::Laurent) => {
                        Expr::Uniformizer
                    }
                    ("n", _) => Expr::Index,
                    ("O", _) => {
                        self.pos += 1;
                        self.expect('(')?;
                        let e = self.expr()?;
                        self.expect(')')?;
                        return Ok(Expr::BigO(Box::new(e)));
                    }
                    _ => {
                        return self.err(format!(
                            "unknown symbol `{name}` (uniformiser is `{}` for {})",
                            self.field.uniformizer_symbol(),
                            self.field
                        ))
                    }
                };
                self.pos += 1;
                Ok(expr)
            }
            Tok::Sym(c) => self.err(format!("unexpected `{c}`")),
        }
    }
}

pub fn parse_expression(src: &str, field: FieldDesc) -> Result<Expr> {
    let toks = tokenize(src)?;
    let mut parser = Parser {
        src,
        toks,
        pos: 0,
        field,
    };
    let e = parser.expr()?;
    if parser.pos != parser.toks.len() {
        return parser.err("trailing input");
    }
    Ok(e)
}

impl Expr {
    /// Integer value of an exponent subexpression.
    pub fn eval_int(&self, index: Option<i64>) -> Result<i64> {
        let int_err = || Error::Precondition("exponent must be an integer expression".into());
        Ok(match self {
            Expr::Int(n) => i64::try_from(n).map_err(|_| int_err())?,
            Expr::Index => index
                .ok_or_else(|| Error::Precondition("`n` used outside a sequence literal".into()))?,
            Expr::Neg(e) => -e.eval_int(index)?,
            Expr::Add(a, b) => a.eval_int(index)? + b.eval_int(index)?,
            Expr::Sub(a, b) => a.eval_int(index)? - b.eval_int(index)?,
            Expr::Mul(a, b) => a.eval_int(index)? * b.eval_int(index)?,
            _ => return Err(int_err()),
        })
    }

    pub fn eval(&self, field: FieldDesc, index: Option<i64>) -> Result<LFElement> {
        Ok(match self {
            Expr::Int(n) => LFElement::from_integer(field, n),
            Expr::Uniformizer => field.uniformizer_pow(1),
            Expr::Index => field.from_int(self.eval_int(index)?),
            Expr::BigO(e) => match e.eval(field, index)?.valuation() {
                ValResult::Exact(v) | ValResult::AtLeast(v) => LFElement::zero_like(field, v),
            },
            Expr::Neg(e) => -e.eval(field, index)?,
            Expr::Add(a, b) => a.eval(field, index)? + b.eval(field, index)?,
            Expr::Sub(a, b) => a.eval(field, index)? - b.eval(field, index)?,
            Expr::Mul(a, b) => a.eval(field, index)? * b.eval(field, index)?,
            Expr::Div(a, b) => a.eval(field, index)?.div(&b.eval(field, index)?)?,
            Expr::Pow(base, exp) => {
                let k = exp.eval_int(index)?;
                match **base {
                    Expr::Uniformizer => field.uniformizer_pow(k),
                    _ => base.eval(field, index)?.pow(k)?,
                }
            }
        })
    }

    pub fn uses_index(&self) -> bool {
        match self {
            Expr::Index => true,
            Expr::Int(_) | Expr::Uniformizer => false,
            Expr::BigO(e) | Expr::Neg(e) => e.uses_index(),
            Expr::Add(a, b)
            | Expr::Sub(a, b)
            | Expr::Mul(a, b)
            | Expr::Div(a, b)
            | Expr::Pow(a, b) => a.uses_index() || b.uses_index(),
        }
    }
}

pub fn parse_element(src: &str, field: FieldDesc) -> Result<LFElement> {
    parse_expression(src, field)?.eval(field, None)
}

fn pi_power(sym: &str, k: i64) -> String {
    match k {
        1 => sym.to_string(),
        _ => format!("{sym}^{k}"),
    }
}

/// Expansion form `pi^v * (d0 + d1*pi + ...) + O(pi^N)`; parses back to the same element.
pub fn format_element(x: &LFElement) -> String {
    let field = x.field();
    let sym = field.uniformizer_symbol();
    match x.valuation() {
        ValResult::AtLeast(_) if x.is_exact_zero() => "0".to_string(),
        ValResult::AtLeast(n) => format!("O({})", pi_power(sym, n)),
        ValResult::Exact(v) => {
            let terms: Vec<String> = x
                .digits()
                .iter()
                .enumerate()
                .filter(|(_, &d)| d != 0)
                .map(|(i, &d)| match (i, d) {
                    (0, d) => d.to_string(),
                    (i, 1) => pi_power(sym, i as i64),
                    (i, d) => format!("{d}*{}", pi_power(sym, i as i64)),
                })
                .collect();
            let sum = terms.join(" + ");
            let body = match (v, sum.as_str()) {
                (0, _) => sum.clone(),
                (v, "1") => pi_power(sym, v),
                (v, _) if terms.len() == 1 => format!("{} * {sum}", pi_power(sym, v)),
                (v, _) => format!("{} * ({sum})", pi_power(sym, v)),
            };
            format!("{body} + O({})", pi_power(sym, x.absolute_precision()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_and_expansion_forms() {
        let f = FieldDesc::padic(7).unwrap().with_precision(10).unwrap();
        let x = parse_element("49/3", f).unwrap();
        assert!(x.agrees_with(&f.from_rational(49, 3).unwrap()));
        let y = parse_element("p^2 * (3 + 4*p) + O(p^5)", f).unwrap();
        assert_eq!(y.valuation(), ValResult::Exact(2));
        assert_eq!(y.digits(), vec![3, 4, 0]);
        let z = parse_element("p^-1", f).unwrap();
        assert_eq!(z.valuation(), ValResult::Exact(-1));
        assert!(parse_element("0", f).unwrap().is_exact_zero());
        assert!(parse_element("1/p", f).unwrap().agrees_with(&z));
    }

    #[test]
    fn laurent_symbol() {
        let f = FieldDesc::laurent(3).unwrap().with_precision(6).unwrap();
        let x = parse_element("1 + 2*t^2", f).unwrap();
        assert_eq!(x.digits(), vec![1, 0, 2, 0, 0, 0]);
        assert!(matches!(parse_element("p", f), Err(Error::Parse { .. })));
    }

    #[test]
    fn parse_errors_name_position() {
        let f = FieldDesc::padic(5).unwrap();
        match parse_element("1 + $", f) {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 4),
            other => panic!("{other:?}"),
        }
        match parse_element("(1 + p", f) {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 6),
            other => panic!("{other:?}"),
        }
        assert!(parse_element("1/0", f).is_err());
    }

    #[test]
    fn sequence_index() {
        let f = FieldDesc::padic(5).unwrap();
        let e = parse_expression("1/(1+p^n)", f).unwrap();
        assert!(e.uses_index());
        let x = e.eval(f, Some(3)).unwrap();
        assert!(x.agrees_with(&f.from_rational(1, 126).unwrap()));
        assert!(e.eval(f, None).is_err());
    }

    #[test]
    fn format_round_trip() {
        let f = FieldDesc::padic(5).unwrap().with_precision(12).unwrap();
        for lit in [
            "-7/250",
            "3",
            "p^3 * (1 + 2*p) + O(p^7)",
            "O(p^4)",
            "0",
            "1/p",
        ] {
            let x = parse_element(lit, f).unwrap();
            let back = parse_element(&format_element(&x), f).unwrap();
            assert_eq!(back, x, "{lit} -> {}", format_element(&x));
        }
    }
}
