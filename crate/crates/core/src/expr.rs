//! A small expression language for power series and vector fields.
//!
//! ```text
//! (1 - x^2)·d/dx + (x*y)·d/dy      x*p + q      exp(-x)*q      y''' = y'*y''
//! ```
//!
//! Parsing yields an [`Expr`] tree that each domain evaluates on its own. Lie's
//! `p, q, r` stand for `∂/∂x, ∂/∂y, ∂/∂z` unless the name is bound to a
//! variable or parameter.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{as_nonneg_int, Q};
use crate::series::TruncatedSeries;
use crate::vecfield::TruncatedVectorField;

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(Q),
    Ident(String),
    /// `y^(k)`, written `y'`, `y''`, `y'''` or `y'{k}`.
    Jet(u32),
    /// `d/dx`.
    Partial(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Call(String, Vec<Expr>),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Q),
    Ident(String),
    Jet(u32),
    Partial(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
}

const FUNCTIONS: &[&str] = &["exp"];

fn err(pos: usize, msg: impl Into<String>) -> Error {
    Error::Parse(format!("at {pos}: {}", msg.into()))
}

fn tokenize(src: &str) -> Result<Vec<(usize, Tok)>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let ident_at = |i: usize| -> Option<(String, usize)> {
        let mut j = i;
        if j < chars.len() && (chars[j].is_alphabetic() || chars[j] == '_') {
            j += 1;
            while j < chars.len()
                && (chars[j].is_alphabetic() || chars[j].is_ascii_digit() || chars[j] == '_')
            {
                j += 1;
            }
            Some((chars[i..j].iter().collect(), j))
        } else {
            None
        }
    };
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '0'..='9' => {
                let mut j = i;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                let s: String = chars[i..j].iter().collect();
                let n: num_bigint::BigInt = s.parse().map_err(|_| err(i, "bad number"))?;
                out.push((start, Tok::Num(Q::from_integer(n))));
                i = j;
            }
            '+' => {
                out.push((start, Tok::Plus));
                i += 1;
            }
            '-' | '−' => {
                out.push((start, Tok::Minus));
                i += 1;
            }
            '*' | '·' => {
                out.push((start, Tok::Star));
                i += 1;
            }
            '/' => {
                out.push((start, Tok::Slash));
                i += 1;
            }
            '^' => {
                out.push((start, Tok::Caret));
                i += 1;
            }
            '²' | '³' => {
                out.push((start, Tok::Caret));
                out.push((
                    start,
                    Tok::Num(Q::from_integer(if c == '²' { 2 } else { 3 }.into())),
                ));
                i += 1;
            }
            '(' => {
                out.push((start, Tok::LParen));
                i += 1;
            }
            ')' => {
                out.push((start, Tok::RParen));
                i += 1;
            }
            ',' => {
                out.push((start, Tok::Comma));
                i += 1;
            }
            _ => {
                let Some((name, j)) = ident_at(i) else {
                    return Err(err(i, format!("unexpected character '{c}'")));
                };
                // d/dx
                if name == "d" && j < chars.len() && chars[j] == '/' {
                    if let Some((var, k)) = ident_at(j + 1) {
                        if let Some(v) = var.strip_prefix('d').filter(|v| !v.is_empty()) {
                            out.push((start, Tok::Partial(v.to_string())));
                            i = k;
                            continue;
                        }
                    }
                }
                // y', y'', y'{k}
                if j < chars.len() && chars[j] == '\'' {
                    if name != "y" {
                        return Err(err(i, "primes are only allowed on y"));
                    }
                    let mut k = j;
                    while k < chars.len() && chars[k] == '\'' {
                        k += 1;
                    }
                    let mut order = (k - j) as u32;
                    if order == 1 && k < chars.len() && chars[k] == '{' {
                        let close = chars[k..]
                            .iter()
                            .position(|&ch| ch == '}')
                            .ok_or_else(|| err(k, "unclosed '{'"))?;
                        let s: String = chars[k + 1..k + close].iter().collect();
                        order = s
                            .trim()
                            .parse()
                            .map_err(|_| err(k, "bad derivative order"))?;
                        k += close + 1;
                    }
                    out.push((start, Tok::Jet(order)));
                    i = k;
                    continue;
                }
                out.push((start, Tok::Ident(name)));
                i = j;
            }
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

    fn here(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, t: Tok) -> Result<()> {
        let at = self.here();
        match self.next() {
            Some(ref got) if *got == t => Ok(()),
            Some(got) => Err(err(at, format!("expected {t:?}, found {got:?}"))),
            None => Err(err(at, format!("expected {t:?}, found end of input"))),
        }
    }

    fn sum(&mut self) -> Result<Expr> {
        let mut lhs = self.product()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.product()?));
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.product()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn starts_atom(t: Option<&Tok>) -> bool {
        matches!(
            t,
            Some(Tok::Num(_) | Tok::Ident(_) | Tok::Jet(_) | Tok::Partial(_) | Tok::LParen)
        )
    }

    fn product(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
                }
                t if Self::starts_atom(t) => {
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.power()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                Ok(Expr::Neg(Box::new(self.unary()?)))
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            let exp = self.unary_power()?;
            return Ok(Expr::Pow(Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    /// Exponents may carry a sign: `x^-1` parses (and is rejected later).
    fn unary_power(&mut self) -> Result<Expr> {
        if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            return Ok(Expr::Neg(Box::new(self.unary_power()?)));
        }
        self.power()
    }

    fn atom(&mut self) -> Result<Expr> {
        let at = self.here();
        match self.next() {
            Some(Tok::Num(q)) => Ok(Expr::Num(q)),
            Some(Tok::Jet(k)) => Ok(Expr::Jet(k)),
            Some(Tok::Partial(v)) => Ok(Expr::Partial(v)),
            Some(Tok::Ident(name)) => {
                if FUNCTIONS.contains(&name.as_str()) && self.peek() == Some(&Tok::LParen) {
                    self.pos += 1;
                    let mut args = vec![self.sum()?];
                    while self.peek() == Some(&Tok::Comma) {
                        self.pos += 1;
                        args.push(self.sum()?);
                    }
                    self.expect(Tok::RParen)?;
                    Ok(Expr::Call(name, args))
                } else {
                    Ok(Expr::Ident(name))
                }
            }
            Some(Tok::LParen) => {
                let e = self.sum()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Some(t) => Err(err(at, format!("unexpected {t:?}"))),
            None => Err(err(at, "unexpected end of input")),
        }
    }
}

pub fn parse(src: &str) -> Result<Expr> {
    let toks = tokenize(src)?;
    if toks.is_empty() {
        return Err(err(0, "empty expression"));
    }
    let mut p = Parser {
        toks,
        pos: 0,
        end: src.chars().count(),
    };
    let e = p.sum()?;
    if p.pos < p.toks.len() {
        return Err(err(p.here(), "trailing input"));
    }
    Ok(e)
}

/// Splits `"lhs = rhs"`; errors unless there is exactly one `=`.
pub fn split_equation(src: &str) -> Result<(Expr, Expr)> {
    let parts: Vec<&str> = src.split('=').collect();
    if parts.len() != 2 {
        return Err(Error::Parse(format!("expected one '=' in \"{src}\"")));
    }
    Ok((parse(parts[0])?, parse(parts[1])?))
}

/// Names, parameters and truncation for evaluating expressions.
#[derive(Clone, Debug)]
pub struct Context {
    pub vars: Vec<String>,
    pub params: BTreeMap<String, Q>,
    pub degree: u32,
}

impl Context {
    pub fn new(vars: Vec<String>, degree: u32) -> Self {
        Context {
            vars,
            params: BTreeMap::new(),
            degree,
        }
    }

    pub fn with_param(mut self, name: &str, value: Q) -> Self {
        self.params.insert(name.to_string(), value);
        self
    }

    fn n(&self) -> usize {
        self.vars.len()
    }

    fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    /// `p, q, r` aliases, unless shadowed by a variable or parameter.
    fn lie_alias(&self, name: &str) -> Option<usize> {
        if self.var_index(name).is_some() || self.params.contains_key(name) {
            return None;
        }
        ["p", "q", "r"]
            .iter()
            .position(|s| *s == name)
            .filter(|&i| i < self.n())
    }
}

/// Evaluates to a power series in the context's variables.
pub fn eval_series(e: &Expr, ctx: &Context) -> Result<TruncatedSeries> {
    match eval_value(e, ctx)? {
        Value::Scalar(s) => Ok(s),
        Value::Field(_) => Err(Error::Parse(
            "expected a function, found a vector field".into(),
        )),
    }
}

/// Evaluates to a vector field; a scalar zero is accepted as the zero field.
pub fn eval_field(e: &Expr, ctx: &Context) -> Result<TruncatedVectorField> {
    match eval_value(e, ctx)? {
        Value::Field(v) => Ok(v),
        Value::Scalar(s) if s.is_zero() => Ok(TruncatedVectorField::zero(ctx.n(), ctx.degree)),
        Value::Scalar(_) => Err(Error::Parse(
            "expected a vector field, found a function".into(),
        )),
    }
}

pub fn parse_series(src: &str, ctx: &Context) -> Result<TruncatedSeries> {
    eval_series(&parse(src)?, ctx)
}

pub fn parse_field(src: &str, ctx: &Context) -> Result<TruncatedVectorField> {
    eval_field(&parse(src)?, ctx)
}

/// Evaluates a constant expression (no variables) to a rational.
pub fn eval_constant(e: &Expr, params: &BTreeMap<String, Q>) -> Result<Q> {
    let ctx = Context {
        vars: vec![],
        params: params.clone(),
        degree: 0,
    };
    Ok(eval_series(e, &ctx)?.constant_term())
}

enum Value {
    Scalar(TruncatedSeries),
    Field(TruncatedVectorField),
}

fn exponent(e: &Expr, ctx: &Context) -> Result<u32> {
    let s = eval_series(e, ctx)?;
    if s.terms().any(|(m, _)| m.iter().any(|&k| k > 0)) {
        return Err(Error::Parse("exponent must be a constant".into()));
    }
    as_nonneg_int(&s.constant_term())
        .ok_or_else(|| Error::Parse("exponent must be a nonnegative integer".into()))
}

fn eval_value(e: &Expr, ctx: &Context) -> Result<Value> {
    let (n, d) = (ctx.n(), ctx.degree);
    Ok(match e {
        Expr::Num(q) => Value::Scalar(TruncatedSeries::constant(n, d, q.clone())),
        Expr::Ident(name) => {
            if let Some(i) = ctx.var_index(name) {
                Value::Scalar(TruncatedSeries::var(n, d, i))
            } else if let Some(v) = ctx.params.get(name) {
                Value::Scalar(TruncatedSeries::constant(n, d, v.clone()))
            } else if let Some(i) = ctx.lie_alias(name) {
                Value::Field(TruncatedVectorField::partial(n, d, i))
            } else {
                return Err(Error::Parse(format!("unknown identifier '{name}'")));
            }
        }
        Expr::Partial(v) => {
            let i = ctx
                .var_index(v)
                .ok_or_else(|| Error::Parse(format!("unknown variable in d/d{v}")))?;
            Value::Field(TruncatedVectorField::partial(n, d, i))
        }
        Expr::Jet(k) => {
            return Err(Error::Parse(format!(
                "jet variable of order {k} outside an ODE"
            )))
        }
        Expr::Neg(a) => match eval_value(a, ctx)? {
            Value::Scalar(s) => Value::Scalar(-&s),
            Value::Field(v) => Value::Field(v.scale(&-Q::one())),
        },
        Expr::Add(a, b) | Expr::Sub(a, b) => {
            let sign = if matches!(e, Expr::Add(..)) {
                Q::one()
            } else {
                -Q::one()
            };
            match (eval_value(a, ctx)?, eval_value(b, ctx)?) {
                (Value::Scalar(x), Value::Scalar(y)) => {
                    let mut x = x;
                    x.add_scaled(&y, &sign);
                    Value::Scalar(x)
                }
                (Value::Field(x), Value::Field(y)) => {
                    let mut x = x;
                    x.add_scaled(&y, &sign);
                    Value::Field(x)
                }
                (Value::Field(x), Value::Scalar(s)) if s.is_zero() => Value::Field(x),
                (Value::Scalar(s), Value::Field(y)) if s.is_zero() => Value::Field(y.scale(&sign)),
                _ => {
                    return Err(Error::Parse(
                        "cannot add a function and a vector field".into(),
                    ))
                }
            }
        }
        Expr::Mul(a, b) => match (eval_value(a, ctx)?, eval_value(b, ctx)?) {
            (Value::Scalar(x), Value::Scalar(y)) => Value::Scalar(&x * &y),
            (Value::Scalar(s), Value::Field(v)) | (Value::Field(v), Value::Scalar(s)) => {
                Value::Field(TruncatedVectorField::with_degree(
                    d,
                    v.coeffs().iter().map(|c| &s * c).collect(),
                )?)
            }
            (Value::Field(_), Value::Field(_)) => {
                return Err(Error::Parse("product of two vector fields".into()))
            }
        },
        Expr::Div(a, b) => {
            let den = eval_series(b, ctx)?;
            if den.terms().any(|(m, _)| m.iter().any(|&k| k > 0)) || den.constant_term().is_zero() {
                return Err(Error::Parse("can only divide by a nonzero constant".into()));
            }
            let inv = Q::one() / den.constant_term();
            match eval_value(a, ctx)? {
                Value::Scalar(s) => Value::Scalar(s.scale(&inv)),
                Value::Field(v) => Value::Field(v.scale(&inv)),
            }
        }
        Expr::Pow(a, b) => {
            let k = exponent(b, ctx)?;
            Value::Scalar(eval_series(a, ctx)?.pow(k))
        }
        Expr::Call(name, args) => {
            if name != "exp" || args.len() != 1 {
                return Err(Error::Parse(format!(
                    "unknown function {name}/{}",
                    args.len()
                )));
            }
            let arg = eval_series(&args[0], ctx)?;
            if !arg.constant_term().is_zero() {
                return Err(Error::Parse(
                    "exp argument must vanish at the origin".into(),
                ));
            }
            Value::Scalar(arg.exp()?)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};

    fn ctx2(d: u32) -> Context {
        Context::new(vec!["x".into(), "y".into()], d)
    }

    #[test]
    fn series_round_trip() {
        let c = ctx2(4);
        for src in ["1 - x^2", "x*y", "-y + 3/2*x^2", "0", "-x + 1/3*x*y^2"] {
            assert_eq!(parse_series(src, &c).unwrap().render(&c.vars), src);
        }
    }

    #[test]
    fn field_syntaxes_agree() {
        let c = ctx2(4);
        let a = parse_field("(1 - x^2)·d/dx + (x*y)·d/dy", &c).unwrap();
        let b = parse_field("(1 - x²)*p + x y q", &c).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_string(), "(1 - x^2)·d/dx + (x*y)·d/dy");
        assert_eq!(parse_field(&a.to_string(), &c).unwrap(), a);
        assert_eq!(
            parse_field("−y^2 q", &c).unwrap(),
            parse_field("-(y*y)*q", &c).unwrap()
        );
    }

    #[test]
    fn exp_and_params() {
        let c = ctx2(5).with_param("alpha", qi(2)).with_param("r", qi(3));
        let f = parse_series("x^r*exp(alpha*x)", &c).unwrap();
        let x = TruncatedSeries::var(2, 5, 0);
        assert_eq!(f, &x.pow(3) * &x.scale(&qi(2)).exp().unwrap());
        assert!(parse_series("exp(1 + x)", &c).is_err());
        let half = parse_series("1/2", &c).unwrap();
        assert_eq!(half.constant_term(), q(1, 2));
    }

    #[test]
    fn errors() {
        let c = ctx2(3);
        assert!(matches!(parse("x +"), Err(Error::Parse(_))));
        assert!(matches!(parse("(x"), Err(Error::Parse(_))));
        assert!(matches!(parse_series("z", &c), Err(Error::Parse(_))));
        assert!(matches!(parse_series("x^y", &c), Err(Error::Parse(_))));
        assert!(matches!(parse_series("x/y", &c), Err(Error::Parse(_))));
        assert!(matches!(parse_field("p*q", &c), Err(Error::Parse(_))));
        assert!(matches!(parse_field("x + p", &c), Err(Error::Parse(_))));
        assert!(matches!(parse("x $ y"), Err(Error::Parse(_))));
    }

    #[test]
    fn jets_tokenize() {
        assert_eq!(parse("y'").unwrap(), Expr::Jet(1));
        assert_eq!(parse("y'''").unwrap(), Expr::Jet(3));
        assert_eq!(parse("y'{5}").unwrap(), Expr::Jet(5));
        let (lhs, rhs) = split_equation("y''' = y'*y''").unwrap();
        assert_eq!(lhs, Expr::Jet(3));
        assert_eq!(
            rhs,
            Expr::Mul(Box::new(Expr::Jet(1)), Box::new(Expr::Jet(2)))
        );
    }

    #[test]
    fn precedence() {
        let c = ctx2(4);
        let a = parse_series("-x^2", &c).unwrap();
        assert_eq!(a.coefficient(&[2, 0]), qi(-1));
        let b = parse_series("2^3*x", &c).unwrap();
        assert_eq!(b.coefficient(&[1, 0]), qi(8));
        let z = parse_field("0", &c).unwrap();
        assert!(z.is_zero());
    }
}
