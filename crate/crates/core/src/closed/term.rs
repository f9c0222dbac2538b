//! A small combinator syntax over named ground maps:
//!
//! ```text
//! term := name
//!       | (curry | uncurry | D | L | Lc) "(" term ")"
//!       | (hom | comp | pair | add) "(" term "," term ")"
//!       | (ev | eta | mu | p0 | p1) "(" shape "," shape ")"
//!       | id "(" shape ")"
//! ```
//!
//! `comp(f, g)` runs `f` first. `Lc(f)` linearizes in the second factor of
//! the domain with the first held fixed.

use std::collections::BTreeMap;
use std::fmt;

use super::{ClosedModel, ClosedMorphism};
use crate::category::{Closed, ClosedStructure, Model};
use crate::error::{Error, ParseError, Result};
use crate::shape::Shape;
use crate::smooth::parse_smooth_map;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UnaryOp {
    Curry,
    Uncurry,
    D,
    L,
    Lc,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinaryOp {
    Hom,
    Comp,
    Pair,
    Add,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShapedOp {
    Ev,
    Eta,
    Mu,
    P0,
    P1,
    Id,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClosedTerm {
    Name(String),
    Shaped(ShapedOp, Vec<Shape>),
    Unary(UnaryOp, Box<ClosedTerm>),
    Binary(BinaryOp, Box<ClosedTerm>, Box<ClosedTerm>),
}

impl UnaryOp {
    const ALL: [UnaryOp; 5] = [UnaryOp::Curry, UnaryOp::Uncurry, UnaryOp::D, UnaryOp::L, UnaryOp::Lc];

    fn name(self) -> &'static str {
        match self {
            UnaryOp::Curry => "curry",
            UnaryOp::Uncurry => "uncurry",
            UnaryOp::D => "D",
            UnaryOp::L => "L",
            UnaryOp::Lc => "Lc",
        }
    }
}

impl BinaryOp {
    const ALL: [BinaryOp; 4] = [BinaryOp::Hom, BinaryOp::Comp, BinaryOp::Pair, BinaryOp::Add];

    fn name(self) -> &'static str {
        match self {
            BinaryOp::Hom => "hom",
            BinaryOp::Comp => "comp",
            BinaryOp::Pair => "pair",
            BinaryOp::Add => "add",
        }
    }
}

impl ShapedOp {
    const ALL: [ShapedOp; 6] = [
        ShapedOp::Ev,
        ShapedOp::Eta,
        ShapedOp::Mu,
        ShapedOp::P0,
        ShapedOp::P1,
        ShapedOp::Id,
    ];

    fn name(self) -> &'static str {
        match self {
            ShapedOp::Ev => "ev",
            ShapedOp::Eta => "eta",
            ShapedOp::Mu => "mu",
            ShapedOp::P0 => "p0",
            ShapedOp::P1 => "p1",
            ShapedOp::Id => "id",
        }
    }

    fn arity(self) -> usize {
        if self == ShapedOp::Id {
            1
        } else {
            2
        }
    }
}

impl fmt::Display for ClosedTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClosedTerm::Name(n) => f.write_str(n),
            ClosedTerm::Shaped(op, shapes) => {
                let parts: Vec<String> = shapes.iter().map(Shape::to_string).collect();
                write!(f, "{}({})", op.name(), parts.join(", "))
            }
            ClosedTerm::Unary(op, t) => write!(f, "{}({t})", op.name()),
            ClosedTerm::Binary(op, a, b) => write!(f, "{}({a}, {b})", op.name()),
        }
    }
}

const MAX_NESTING: usize = 128;

struct TermParser<'a> {
    src: &'a str,
    pos: usize,
}

impl TermParser<'_> {
    fn err(&self, msg: impl Into<String>) -> ParseError {
        ParseError::new(msg, self.src, self.pos)
    }

    fn skip_ws(&mut self) {
        let rest = &self.src[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        self.skip_ws();
        if self.src[self.pos..].starts_with(c) {
            self.pos += c.len_utf8();
            Ok(())
        } else {
            Err(self.err(format!("expected '{c}'")))
        }
    }

    fn ident(&mut self) -> Result<&str, ParseError> {
        self.skip_ws();
        let start = self.pos;
        for (i, c) in self.src[start..].char_indices() {
            let ok = c == '_' || c.is_ascii_alphabetic() || (i > 0 && c.is_ascii_digit());
            if !ok {
                break;
            }
            self.pos = start + i + 1;
        }
        if self.pos == start {
            return Err(self.err("expected a name"));
        }
        Ok(&self.src[start..self.pos])
    }

    fn shape(&mut self) -> Result<Shape, ParseError> {
        self.skip_ws();
        let (s, end) = Shape::parse_prefix(self.src, self.pos)?;
        self.pos = end;
        Ok(s)
    }

    fn term(&mut self, depth: usize) -> Result<ClosedTerm, ParseError> {
        if depth > MAX_NESTING {
            return Err(self.err("term nested too deeply"));
        }
        let start = self.pos;
        let name = self.ident()?.to_string();
        if let Some(op) = ShapedOp::ALL.into_iter().find(|o| o.name() == name) {
            self.expect('(')?;
            let mut shapes = vec![self.shape()?];
            for _ in 1..op.arity() {
                self.expect(',')?;
                shapes.push(self.shape()?);
            }
            self.expect(')')?;
            return Ok(ClosedTerm::Shaped(op, shapes));
        }
        if let Some(op) = UnaryOp::ALL.into_iter().find(|o| o.name() == name) {
            self.expect('(')?;
            let t = self.term(depth + 1)?;
            self.expect(')')?;
            return Ok(ClosedTerm::Unary(op, Box::new(t)));
        }
        if let Some(op) = BinaryOp::ALL.into_iter().find(|o| o.name() == name) {
            self.expect('(')?;
            let a = self.term(depth + 1)?;
            self.expect(',')?;
            let b = self.term(depth + 1)?;
            self.expect(')')?;
            return Ok(ClosedTerm::Binary(op, Box::new(a), Box::new(b)));
        }
        self.skip_ws();
        if self.src[self.pos..].starts_with('(') {
            return Err(ParseError::new(format!("unknown combinator '{name}'"), self.src, start));
        }
        Ok(ClosedTerm::Name(name))
    }
}

pub fn parse_closed_term(src: &str) -> Result<ClosedTerm, ParseError> {
    let mut p = TermParser { src, pos: 0 };
    let t = p.term(0)?;
    p.skip_ws();
    if p.pos != src.len() {
        return Err(p.err("trailing input"));
    }
    Ok(t)
}

impl std::str::FromStr for ClosedTerm {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<ClosedTerm, ParseError> {
        parse_closed_term(s)
    }
}

/// Named ground maps a term may refer to.
#[derive(Clone, Default)]
pub struct Definitions {
    maps: BTreeMap<String, ClosedMorphism>,
}

impl Definitions {
    /// Defines `name` as the smooth map written `src`.
    pub fn define(&mut self, name: &str, src: &str) -> Result<()> {
        let (f, _) = parse_smooth_map(src, &[])?;
        self.maps
            .insert(name.to_string(), ClosedMorphism::from_smooth(&f).renamed(name));
        Ok(())
    }

    /// Parses `name=expr`.
    pub fn define_assignment(&mut self, text: &str) -> Result<()> {
        let (name, src) = text
            .split_once('=')
            .ok_or_else(|| Error::Invalid(format!("definition '{text}' is not of the form name=expr")))?;
        self.define(name.trim(), src)
    }

    pub fn get(&self, name: &str) -> Option<&ClosedMorphism> {
        self.maps.get(name)
    }
}

impl ClosedTerm {
    /// The map this term denotes in `m`.
    pub fn build(&self, m: &ClosedModel, defs: &Definitions) -> Result<ClosedMorphism> {
        let f = match self {
            ClosedTerm::Name(n) => defs
                .get(n)
                .cloned()
                .ok_or_else(|| Error::Invalid(format!("undefined map '{n}'")))?,
            ClosedTerm::Shaped(op, s) => match op {
                ShapedOp::Ev => m.eval_map(&s[0], &s[1])?,
                ShapedOp::Eta => m.eta(&s[0], &s[1])?,
                ShapedOp::Mu => m.mu(&s[0], &s[1])?,
                ShapedOp::P0 => m.proj0(&s[0], &s[1])?,
                ShapedOp::P1 => m.proj1(&s[0], &s[1])?,
                ShapedOp::Id => m.identity(&s[0])?,
            },
            ClosedTerm::Unary(op, t) => {
                let f = t.build(m, defs)?;
                match op {
                    UnaryOp::Curry => m.curry(&f)?,
                    UnaryOp::Uncurry => m.uncurry(&f)?,
                    UnaryOp::D => m.differential(&f),
                    UnaryOp::L => m.exp_linearize(&f),
                    UnaryOp::Lc => m.partial_from_total(&f)?,
                }
            }
            ClosedTerm::Binary(op, a, b) => {
                let (f, g) = (a.build(m, defs)?, b.build(m, defs)?);
                match op {
                    BinaryOp::Hom => m.hom_map(&f, &g)?,
                    BinaryOp::Comp => m.compose(&f, &g)?,
                    BinaryOp::Pair => m.pair(&f, &g)?,
                    BinaryOp::Add => m.add(&f, &g)?,
                }
            }
        };
        Ok(f.renamed(self.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_and_prints() {
        let t = parse_closed_term(" comp( curry(f) ,hom(id(R), g)) ").unwrap();
        assert_eq!(t.to_string(), "comp(curry(f), hom(id(R), g))");
        assert_eq!(
            parse_closed_term("mu(R,[R,(R*R)])").unwrap().to_string(),
            "mu(R, [R,(R*R)])"
        );
        for bad in ["", "curry()", "curry(f", "foo(f)", "ev(R)", "f g", "hom(f)", "id(Q)"] {
            assert!(parse_closed_term(bad).is_err(), "{bad}");
        }
        assert_eq!(parse_closed_term("foo(f)").unwrap_err().position, 0);
    }

    #[test]
    fn deep_nesting_is_rejected() {
        let src = format!("{}f{}", "D(".repeat(1000), ")".repeat(1000));
        assert!(parse_closed_term(&src).is_err());
    }

    #[test]
    fn evaluates_derivative_of_cubic() {
        let m = ClosedModel::default();
        let mut defs = Definitions::default();
        defs.define_assignment("f=x^3+x").unwrap();
        let df = parse_closed_term("D(f)").unwrap().build(&m, &defs).unwrap();
        assert_eq!(df.eval_reals(&[2.0, 1.0]).unwrap(), vec![13.0]);
        let back = parse_closed_term("uncurry(L(curry(comp(p1(R, R), f))))")
            .unwrap()
            .build(&m, &defs)
            .unwrap();
        assert_eq!(back.eval_reals(&[5.0, 2.0]).unwrap(), vec![2.0]);
        assert!(parse_closed_term("g").unwrap().build(&m, &defs).is_err());
    }

    fn arb_term() -> impl Strategy<Value = ClosedTerm> {
        let leaf = prop_oneof![
            "[a-z][a-z0-9_]{0,3}"
                .prop_filter("not a combinator", |s| {
                    !["ev", "eta", "mu", "p0", "p1", "id", "curry", "uncurry", "hom", "comp", "pair", "add"]
                        .contains(&s.as_str())
                })
                .prop_map(ClosedTerm::Name),
            (0..6usize).prop_map(|i| {
                let op = ShapedOp::ALL[i];
                ClosedTerm::Shaped(op, vec![Shape::Ground; op.arity()])
            }),
        ];
        leaf.prop_recursive(4, 24, 2, |inner| {
            prop_oneof![
                (0..5usize, inner.clone()).prop_map(|(i, t)| ClosedTerm::Unary(UnaryOp::ALL[i], Box::new(t))),
                (0..4usize, inner.clone(), inner)
                    .prop_map(|(i, a, b)| ClosedTerm::Binary(BinaryOp::ALL[i], Box::new(a), Box::new(b))),
            ]
        })
    }

    proptest! {
        #[test]
        fn print_parse_round_trip(t in arb_term()) {
            prop_assert_eq!(parse_closed_term(&t.to_string()).unwrap(), t);
        }
    }
}
