//! Expression grammar shared by the polynomial and smooth front ends.
//!
//! ```text
//! input  := header? body
//! header := "ctx" "(" names? ")" ("args" "(" names? ")")?  |  "args" "(" names? ")"
//! body   := "[" expr ("," expr)* "]"  |  expr
//! expr   := term (("+" | "-") term)*
//! term   := unary ("*" unary)*
//! unary  := "-" unary | power
//! power  := atom ("^" int)?
//! atom   := int ("/" int)? | name | func "(" expr ")" | "(" expr ")"
//! func   := "sin" | "cos" | "exp"
//! ```
//!
//! Variables are `[A-Za-z][A-Za-z0-9]*`. Without a header, context variables
//! come from the caller and the remaining variables, sorted, form the
//! argument block.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, ParseError, Result};
use crate::poly::{Poly, PolyMap, Rational};
use crate::shape::Shape;

const MAX_NESTING: usize = 200;
/// Largest exponent accepted after `^`.
pub const MAX_EXPONENT: u32 = 64;
/// Largest total degree a parsed polynomial may reach while expanding.
pub const MAX_DEGREE: u32 = 256;
const MAX_TERMS: usize = 20_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Exp,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
        }
    }

    fn from_name(s: &str) -> Option<Func> {
        match s {
            "sin" => Some(Func::Sin),
            "cos" => Some(Func::Cos),
            "exp" => Some(Func::Exp),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(Rational),
    /// Name and byte offset of the occurrence.
    Var(String, usize),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    Call(Func, Box<Expr>),
}

impl Expr {
    fn collect_vars<'a>(&'a self, out: &mut Vec<(&'a str, usize)>) {
        match self {
            Expr::Num(_) => {}
            Expr::Var(v, at) => out.push((v, *at)),
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Call(_, a) => a.collect_vars(out),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    fn first_call(&self) -> Option<Func> {
        match self {
            Expr::Num(_) | Expr::Var(..) => None,
            Expr::Call(f, _) => Some(*f),
            Expr::Neg(a) | Expr::Pow(a, _) => a.first_call(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => {
                a.first_call().or_else(|| b.first_call())
            }
        }
    }
}

/// A parsed input: optional variable declarations and one or more
/// component expressions.
#[derive(Clone, Debug, PartialEq)]
pub struct Parsed {
    pub source: String,
    pub ctx: Option<Vec<String>>,
    pub args: Option<Vec<String>>,
    pub body: Vec<Expr>,
    /// Written as `[e1, …]`.
    pub tuple: bool,
}

/// Variable blocks of a parsed map: context first, then arguments.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Layout {
    pub ctx: Vec<String>,
    pub args: Vec<String>,
}

impl Layout {
    pub fn names(&self) -> Vec<String> {
        self.ctx.iter().chain(&self.args).cloned().collect()
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.ctx
            .iter()
            .chain(&self.args)
            .position(|v| v == name)
    }

    /// `R^nc × R^na`, or just `R^na` without a context block.
    pub fn dom(&self) -> Shape {
        let args = Shape::ground_power(self.args.len());
        if self.ctx.is_empty() {
            args
        } else {
            Shape::prod(Shape::ground_power(self.ctx.len()), args)
        }
    }

    /// Names for the direction block of a derivative. Single-letter
    /// variables get the next free letters counting back from `y`
    /// (`x ↦ y`, `(x, y) ↦ (z, w)`); anything else gets a `d` prefix.
    pub fn direction_names(&self) -> Vec<String> {
        let names = self.names();
        if names.iter().all(|n| n.len() == 1) {
            let used: BTreeSet<&str> = names.iter().map(String::as_str).collect();
            let picked: Vec<String> = "yzwvutsrqponmlkjihgfedcba"
                .chars()
                .map(String::from)
                .filter(|c| !used.contains(c.as_str()))
                .take(names.len())
                .collect();
            if picked.len() == names.len() {
                return picked;
            }
        }
        let mut taken: BTreeSet<String> = names.iter().cloned().collect();
        names
            .iter()
            .map(|n| {
                let mut d = format!("d{n}");
                while taken.contains(&d) {
                    d.insert(0, 'd');
                }
                taken.insert(d.clone());
                d
            })
            .collect()
    }
}

pub fn parse(src: &str) -> Result<Parsed, ParseError> {
    let mut p = Parser {
        src,
        pos: 0,
        depth: 0,
    };
    p.input()
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    depth: usize,
}

impl Parser<'_> {
    fn err(&self, msg: impl Into<String>) -> ParseError {
        ParseError::new(msg, self.src, self.pos)
    }

    fn skip_ws(&mut self) {
        let rest = &self.src[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            return Ok(());
        }
        match self.peek() {
            Some(found) => Err(self.err(format!("expected '{c}', found '{found}'"))),
            None => Err(self.err(format!("expected '{c}', found end of input"))),
        }
    }

    fn ident(&mut self) -> Option<(String, usize)> {
        self.skip_ws();
        let start = self.pos;
        let rest = &self.src[start..];
        let mut chars = rest.char_indices();
        match chars.next() {
            Some((_, c)) if c.is_ascii_alphabetic() => {}
            _ => return None,
        }
        let end = chars
            .find(|(_, c)| !c.is_ascii_alphanumeric())
            .map_or(rest.len(), |(i, _)| i);
        self.pos = start + end;
        Some((rest[..end].to_string(), start))
    }

    fn lookahead_ident(&mut self) -> Option<String> {
        let save = self.pos;
        let id = self.ident().map(|(s, _)| s);
        self.pos = save;
        id
    }

    fn names(&mut self) -> Result<Vec<String>, ParseError> {
        self.expect('(')?;
        let mut out: Vec<String> = Vec::new();
        if self.eat(')') {
            return Ok(out);
        }
        loop {
            let at = {
                self.skip_ws();
                self.pos
            };
            let (name, _) = self.ident().ok_or_else(|| self.err("expected a variable name"))?;
            if Func::from_name(&name).is_some() || name == "ctx" || name == "args" {
                return Err(ParseError::new(format!("'{name}' is reserved"), self.src, at));
            }
            if out.contains(&name) {
                return Err(ParseError::new(format!("variable '{name}' declared twice"), self.src, at));
            }
            out.push(name);
            if self.eat(')') {
                return Ok(out);
            }
            self.expect(',')?;
        }
    }

    fn input(&mut self) -> Result<Parsed, ParseError> {
        let mut ctx = None;
        let mut args = None;
        if self.lookahead_ident().as_deref() == Some("ctx") {
            self.ident();
            ctx = Some(self.names()?);
        }
        if self.lookahead_ident().as_deref() == Some("args") {
            self.ident();
            args = Some(self.names()?);
        }
        if let (Some(c), Some(a)) = (&ctx, &args) {
            if let Some(dup) = a.iter().find(|v| c.contains(v)) {
                return Err(self.err(format!("variable '{dup}' is in both ctx and args")));
            }
        }
        let (body, tuple) = if self.eat('[') {
            let mut items = vec![self.expr()?];
            while self.eat(',') {
                items.push(self.expr()?);
            }
            self.expect(']')?;
            (items, true)
        } else {
            (vec![self.expr()?], false)
        };
        self.skip_ws();
        if self.pos != self.src.len() {
            return Err(self.err("unexpected trailing input"));
        }
        Ok(Parsed {
            source: self.src.to_string(),
            ctx,
            args,
            body,
            tuple,
        })
    }

    fn nested<T>(&mut self, f: impl FnOnce(&mut Self) -> Result<T, ParseError>) -> Result<T, ParseError> {
        if self.depth >= MAX_NESTING {
            return Err(self.err("expression nested too deeply"));
        }
        self.depth += 1;
        let out = f(self);
        self.depth -= 1;
        out
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        self.nested(|p| {
            let mut acc = p.term()?;
            loop {
                if p.eat('+') {
                    acc = Expr::Add(Box::new(acc), Box::new(p.term()?));
                } else if p.eat('-') {
                    acc = Expr::Sub(Box::new(acc), Box::new(p.term()?));
                } else {
                    return Ok(acc);
                }
            }
        })
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.unary()?;
        while self.eat('*') {
            acc = Expr::Mul(Box::new(acc), Box::new(self.unary()?));
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat('-') {
            return self.nested(|p| Ok(Expr::Neg(Box::new(p.unary()?))));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        self.skip_ws();
        let at = self.pos;
        let digits = self.digits();
        if digits.is_empty() {
            return Err(self.err("expected a non-negative integer exponent"));
        }
        let k: u32 = digits
            .parse()
            .ok()
            .filter(|k| *k <= MAX_EXPONENT)
            .ok_or_else(|| ParseError::new(format!("exponent must be at most {MAX_EXPONENT}"), self.src, at))?;
        Ok(Expr::Pow(Box::new(base), k))
    }

    fn digits(&mut self) -> &str {
        let start = self.pos;
        let len = self.src[start..]
            .find(|c: char| !c.is_ascii_digit())
            .unwrap_or(self.src.len() - start);
        self.pos += len;
        &self.src[start..start + len]
    }

    fn integer(&mut self) -> Result<BigInt, ParseError> {
        self.skip_ws();
        let at = self.pos;
        let d = self.digits().to_string();
        if d.is_empty() {
            return Err(self.err("expected a number"));
        }
        if d.len() > 1000 {
            return Err(ParseError::new("number literal too long", self.src, at));
        }
        d.parse().map_err(|_| ParseError::new("bad number", self.src, at))
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let num = self.integer()?;
                if self.eat('/') {
                    let at = self.pos;
                    let den = self.integer()?;
                    if den.is_zero() {
                        return Err(ParseError::new("zero denominator", self.src, at));
                    }
                    Ok(Expr::Num(Rational::new(num, den)))
                } else {
                    Ok(Expr::Num(Rational::from_integer(num)))
                }
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let (name, at) = self.ident().expect("peeked a letter");
                if let Some(func) = Func::from_name(&name) {
                    self.expect('(')?;
                    let arg = self.expr()?;
                    self.expect(')')?;
                    return Ok(Expr::Call(func, Box::new(arg)));
                }
                if name == "ctx" || name == "args" {
                    return Err(ParseError::new(format!("'{name}' is reserved"), self.src, at));
                }
                Ok(Expr::Var(name, at))
            }
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(c) => Err(self.err(format!("unexpected '{c}'"))),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

impl Parsed {
    /// Resolves variable blocks. `extra_ctx` names context variables when
    /// the input has no header.
    pub fn layout(&self, extra_ctx: &[String]) -> Result<Layout, ParseError> {
        let mut used = Vec::new();
        for e in &self.body {
            e.collect_vars(&mut used);
        }
        let free: BTreeSet<&str> = used.iter().map(|(v, _)| *v).collect();

        let ctx: Vec<String> = match (&self.ctx, extra_ctx.is_empty()) {
            (Some(c), true) => c.clone(),
            (Some(_), false) => {
                return Err(ParseError::new(
                    "context given both in the expression header and separately",
                    &self.source,
                    0,
                ))
            }
            (None, _) => {
                let mut seen = Vec::new();
                for v in extra_ctx {
                    if seen.contains(v) {
                        return Err(ParseError::new(format!("context variable '{v}' given twice"), &self.source, 0));
                    }
                    seen.push(v.clone());
                }
                seen
            }
        };
        let args: Vec<String> = match &self.args {
            Some(a) => {
                if let Some(dup) = a.iter().find(|v| ctx.contains(v)) {
                    return Err(ParseError::new(format!("variable '{dup}' is in both ctx and args"), &self.source, 0));
                }
                a.clone()
            }
            None => free
                .iter()
                .filter(|v| !ctx.iter().any(|c| c == *v))
                .map(|v| v.to_string())
                .collect(),
        };
        let layout = Layout { ctx, args };
        if let Some((v, at)) = used.iter().find(|(v, _)| layout.index(v).is_none()) {
            return Err(ParseError::new(format!("unknown variable '{v}'"), &self.source, *at));
        }
        Ok(layout)
    }

    fn cod(&self) -> Shape {
        if self.tuple {
            Shape::ground_power(self.body.len())
        } else {
            Shape::Ground
        }
    }
}

fn to_poly(e: &Expr, layout: &Layout, n: usize, src: &str) -> Result<Poly, ParseError> {
    let too_big = || ParseError::new("polynomial too large", src, 0);
    let p = match e {
        Expr::Num(r) => Poly::constant(n, r.clone()),
        Expr::Var(v, at) => {
            let i = layout
                .index(v)
                .ok_or_else(|| ParseError::new(format!("unknown variable '{v}'"), src, *at))?;
            Poly::var(n, i)
        }
        Expr::Neg(a) => -&to_poly(a, layout, n, src)?,
        Expr::Add(a, b) => &to_poly(a, layout, n, src)? + &to_poly(b, layout, n, src)?,
        Expr::Sub(a, b) => &to_poly(a, layout, n, src)? - &to_poly(b, layout, n, src)?,
        Expr::Mul(a, b) => {
            let (pa, pb) = (to_poly(a, layout, n, src)?, to_poly(b, layout, n, src)?);
            let deg = pa.degree().unwrap_or(0) + pb.degree().unwrap_or(0);
            if deg > MAX_DEGREE || pa.len().saturating_mul(pb.len()) > MAX_TERMS {
                return Err(too_big());
            }
            &pa * &pb
        }
        Expr::Pow(a, k) => {
            let pa = to_poly(a, layout, n, src)?;
            if pa.degree().unwrap_or(0).saturating_mul(*k) > MAX_DEGREE {
                return Err(too_big());
            }
            let mut acc = Poly::one(n);
            for _ in 0..*k {
                if acc.len().saturating_mul(pa.len()) > MAX_TERMS {
                    return Err(too_big());
                }
                acc = &acc * &pa;
            }
            acc
        }
        Expr::Call(f, _) => {
            return Err(ParseError::new(
                format!("'{}' is not polynomial; use the smooth model", f.name()),
                src,
                0,
            ))
        }
    };
    if p.len() > MAX_TERMS {
        return Err(too_big());
    }
    Ok(p)
}

/// Parses a polynomial map, with `extra_ctx` naming context variables.
pub fn parse_poly_map(src: &str, extra_ctx: &[String]) -> Result<(PolyMap, Layout)> {
    let parsed = parse(src)?;
    if let Some(f) = parsed.body.iter().find_map(Expr::first_call) {
        let at = src.find(f.name()).unwrap_or(0);
        return Err(ParseError::new(
            format!("'{}' is not polynomial; use the smooth model", f.name()),
            src,
            at,
        )
        .into());
    }
    let layout = parsed.layout(extra_ctx)?;
    let n = layout.ctx.len() + layout.args.len();
    let comps = parsed
        .body
        .iter()
        .map(|e| to_poly(e, &layout, n, src))
        .collect::<Result<Vec<_>, _>>()?;
    let map = PolyMap::new(layout.dom(), parsed.cod(), comps)?;
    Ok((map, layout))
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(r) => f.write_str(&crate::poly::format_rational(r)),
            Expr::Var(v, _) => f.write_str(v),
            Expr::Neg(a) => write!(f, "-({a})"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "({a} * {b})"),
            Expr::Pow(a, k) => write!(f, "({a})^{k}"),
            Expr::Call(func, a) => write!(f, "{}({a})", func.name()),
        }
    }
}

/// Wraps a parse failure of a required input into the crate error.
pub fn parse_error(e: ParseError) -> Error {
    Error::Parse(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{rat, ratio};

    fn poly_str(src: &str, ctx: &[&str]) -> String {
        let ctx: Vec<String> = ctx.iter().map(|s| s.to_string()).collect();
        let (m, layout) = parse_poly_map(src, &ctx).unwrap();
        m.display_with(&layout.names())
    }

    #[test]
    fn canonical_printing() {
        assert_eq!(poly_str("x^2*y+3*x+z+1", &[]), "x^2*y + 3*x + z + 1");
        assert_eq!(poly_str("(x+y)^2 - 2*x*y", &[]), "x^2 + y^2");
        assert_eq!(poly_str("x + 0*y", &[]), "x");
        assert_eq!(poly_str("3/6*x - -x", &[]), "3/2*x");
        assert_eq!(poly_str("[x, x*y, 1]", &[]), "[x, x*y, 1]");
        assert_eq!(poly_str("0", &[]), "0");
    }

    #[test]
    fn layout_rules() {
        let p = parse("x^3*z + w").unwrap();
        let l = p.layout(&["z".to_string()]).unwrap();
        assert_eq!(l.ctx, vec!["z"]);
        assert_eq!(l.args, vec!["w", "x"]);
        assert_eq!(l.dom().to_string(), "(R*(R*R))");

        let p = parse("ctx(z1,z2) args(x1) z1*x1 + z2").unwrap();
        let l = p.layout(&[]).unwrap();
        assert_eq!(l.names(), vec!["z1", "z2", "x1"]);
        assert_eq!(l.dom().to_string(), "((R*R)*R)");

        let err = parse("args(x) x + q").unwrap().layout(&[]).unwrap_err();
        assert_eq!(err.position, 12);
        assert!(err.message.contains("unknown variable 'q'"));
    }

    #[test]
    fn direction_names() {
        let one = Layout { ctx: vec![], args: vec!["x".into()] };
        assert_eq!(one.direction_names(), vec!["y"]);
        let two = Layout { ctx: vec![], args: vec!["x".into(), "y".into()] };
        assert_eq!(two.direction_names(), vec!["z", "w"]);
        let long = Layout { ctx: vec![], args: vec!["x1".into(), "dx1".into()] };
        assert_eq!(long.direction_names(), vec!["ddx1", "dddx1"]);
    }

    #[test]
    fn errors_point_at_the_problem() {
        let e = parse("x + * y").unwrap_err();
        assert_eq!(e.position, 4);
        let e = parse("x^").unwrap_err();
        assert_eq!(e.position, 2);
        let e = parse("1/0").unwrap_err();
        assert_eq!(e.position, 2);
        let e = parse("(x").unwrap_err();
        assert_eq!(e.position, 2);
        assert!(parse("x^65").is_err());
        assert!(parse(&"(".repeat(5000)).is_err());
        assert!(parse(&"-".repeat(5000)).is_err());
        assert!(parse_poly_map("sin(x)", &[]).is_err());
        assert!(parse_poly_map("((x+y+z)^64)^64", &[]).is_err());
    }

    #[test]
    fn rationals() {
        let (m, _) = parse_poly_map("1/3 + 2/3", &[]).unwrap();
        assert_eq!(m.comps()[0].eval(&[]).unwrap(), rat(1));
        let (m, _) = parse_poly_map("-4/6", &[]).unwrap();
        assert_eq!(m.comps()[0].eval(&[]).unwrap(), ratio(-2, 3));
    }
}
