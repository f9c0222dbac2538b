//! Objects of the categories: binary product trees over a single ground
//! object, the terminal object, and (for closed models) internal homs.
//!
//! Canonical syntax: `R` for the ground object, `1` for the terminal object,
//! `(S*T)` for products and `[C,A]` for the internal hom from `C` to `A`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, ParseError, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Shape {
    Ground,
    Unit,
    Prod(Arc<Shape>, Arc<Shape>),
    /// Internal hom `[C, A]`: maps from `C` to `A`.
    Hom(Arc<Shape>, Arc<Shape>),
}

/// A leaf of a flattened shape.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Leaf {
    Ground,
    Hom(Shape, Shape),
}

impl Shape {
    pub fn ground() -> Shape {
        Shape::Ground
    }

    pub fn unit() -> Shape {
        Shape::Unit
    }

    pub fn prod(a: Shape, b: Shape) -> Shape {
        Shape::Prod(Arc::new(a), Arc::new(b))
    }

    pub fn hom(c: Shape, a: Shape) -> Shape {
        Shape::Hom(Arc::new(c), Arc::new(a))
    }

    /// `A × A`, the domain of a derivative.
    pub fn doubled(&self) -> Shape {
        Shape::prod(self.clone(), self.clone())
    }

    /// The `n`-fold doubling `Pⁿ(A)` with `P(X) = X × X`.
    pub fn doubled_n(&self, n: usize) -> Shape {
        (0..n).fold(self.clone(), |s, _| s.doubled())
    }

    /// Right-nested product of `n` ground objects; `1` when `n = 0`.
    pub fn ground_power(n: usize) -> Shape {
        match n {
            0 => Shape::Unit,
            1 => Shape::Ground,
            _ => Shape::prod(Shape::Ground, Shape::ground_power(n - 1)),
        }
    }

    pub fn split(&self) -> Option<(&Shape, &Shape)> {
        match self {
            Shape::Prod(a, b) => Some((a, b)),
            _ => None,
        }
    }

    pub fn split_or_err(&self, op: &'static str) -> Result<(&Shape, &Shape)> {
        self.split().ok_or_else(|| Error::NotAProduct {
            op,
            found: self.clone(),
        })
    }

    /// Left-to-right leaf list. `Unit` contributes no leaves.
    pub fn flatten(&self) -> Vec<Leaf> {
        let mut out = Vec::new();
        self.flatten_into(&mut out);
        out
    }

    fn flatten_into(&self, out: &mut Vec<Leaf>) {
        match self {
            Shape::Ground => out.push(Leaf::Ground),
            Shape::Unit => {}
            Shape::Prod(a, b) => {
                a.flatten_into(out);
                b.flatten_into(out);
            }
            Shape::Hom(c, a) => out.push(Leaf::Hom((**c).clone(), (**a).clone())),
        }
    }

    pub fn is_first_order(&self) -> bool {
        match self {
            Shape::Ground | Shape::Unit => true,
            Shape::Prod(a, b) => a.is_first_order() && b.is_first_order(),
            Shape::Hom(..) => false,
        }
    }

    /// Number of ground leaves of a first-order shape; the variable count
    /// of maps out of it in the first-order models.
    pub fn arity(&self) -> Result<usize> {
        self.arity_for("arity")
    }

    pub fn arity_for(&self, op: &'static str) -> Result<usize> {
        if !self.is_first_order() {
            return Err(Error::HigherOrder {
                op,
                shape: self.clone(),
            });
        }
        Ok(self.flatten().len())
    }

    pub fn depth(&self) -> usize {
        match self {
            Shape::Ground | Shape::Unit => 0,
            Shape::Prod(a, b) | Shape::Hom(a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    pub fn parse(input: &str) -> Result<Shape, ParseError> {
        let mut p = ShapeParser { input, pos: 0 };
        let shape = p.shape()?;
        p.skip_ws();
        if p.pos != input.len() {
            return Err(ParseError::new("trailing input after shape", input, p.pos));
        }
        Ok(shape)
    }

    /// Reads one shape starting at byte `pos` of `input` and returns it with
    /// the offset just past it.
    pub fn parse_prefix(input: &str, pos: usize) -> Result<(Shape, usize), ParseError> {
        let mut p = ShapeParser { input, pos };
        let shape = p.shape()?;
        Ok((shape, p.pos))
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Shape::Ground => f.write_str("R"),
            Shape::Unit => f.write_str("1"),
            Shape::Prod(a, b) => write!(f, "({a}*{b})"),
            Shape::Hom(c, a) => write!(f, "[{c},{a}]"),
        }
    }
}

impl fmt::Debug for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Shape {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Shape::parse(s)
    }
}

const MAX_NESTING: usize = 256;

struct ShapeParser<'a> {
    input: &'a str,
    pos: usize,
}

impl ShapeParser<'_> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.input[self.pos..].chars().next() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.input[self.pos..].chars().next()
    }

    fn expect(&mut self, want: char) -> Result<(), ParseError> {
        match self.peek() {
            Some(c) if c == want => {
                self.pos += c.len_utf8();
                Ok(())
            }
            Some(c) => Err(ParseError::new(
                format!("expected '{want}', found '{c}'"),
                self.input,
                self.pos,
            )),
            None => Err(ParseError::new(
                format!("expected '{want}', found end of input"),
                self.input,
                self.pos,
            )),
        }
    }

    fn shape(&mut self) -> Result<Shape, ParseError> {
        self.shape_at(0)
    }

    fn shape_at(&mut self, depth: usize) -> Result<Shape, ParseError> {
        if depth > MAX_NESTING {
            return Err(ParseError::new("shape nested too deeply", self.input, self.pos));
        }
        match self.peek() {
            Some('R') => {
                self.pos += 1;
                Ok(Shape::Ground)
            }
            Some('1') => {
                self.pos += 1;
                Ok(Shape::Unit)
            }
            Some('(') => {
                self.pos += 1;
                let a = self.shape_at(depth + 1)?;
                self.expect('*')?;
                let b = self.shape_at(depth + 1)?;
                self.expect(')')?;
                Ok(Shape::prod(a, b))
            }
            Some('[') => {
                self.pos += 1;
                let c = self.shape_at(depth + 1)?;
                self.expect(',')?;
                let a = self.shape_at(depth + 1)?;
                self.expect(']')?;
                Ok(Shape::hom(c, a))
            }
            Some(c) => Err(ParseError::new(
                format!("unexpected '{c}' in shape"),
                self.input,
                self.pos,
            )),
            None => Err(ParseError::new("unexpected end of shape", self.input, self.pos)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn canonical_syntax() {
        let s = Shape::prod(Shape::prod(Shape::Ground, Shape::Ground), Shape::Ground);
        assert_eq!(s.to_string(), "((R*R)*R)");
        assert_eq!(Shape::hom(Shape::Ground, Shape::Unit).to_string(), "[R,1]");
    }

    #[test]
    fn flatten_is_left_to_right() {
        let s: Shape = "((R*1)*(R*[R,R]))".parse().unwrap();
        assert_eq!(
            s.flatten(),
            vec![Leaf::Ground, Leaf::Ground, Leaf::Hom(Shape::Ground, Shape::Ground)]
        );
        assert!(s.arity().is_err());
        assert_eq!("((R*1)*R)".parse::<Shape>().unwrap().arity().unwrap(), 2);
    }

    #[test]
    fn parse_errors_carry_position() {
        let err = Shape::parse("(R*R").unwrap_err();
        assert_eq!(err.position, 4);
        let err = Shape::parse("(R+R)").unwrap_err();
        assert_eq!(err.position, 2);
        assert!(err.to_string().contains('^'));
        assert!(Shape::parse("R R").is_err());
    }

    #[test]
    fn deep_nesting_is_rejected_not_overflowed() {
        let s = "(".repeat(10_000);
        assert!(Shape::parse(&s).is_err());
    }

    pub(crate) fn arb_shape() -> impl Strategy<Value = Shape> {
        let leaf = prop_oneof![Just(Shape::Ground), Just(Shape::Unit)];
        leaf.prop_recursive(4, 16, 2, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Shape::prod(a, b)),
                (inner.clone(), inner).prop_map(|(a, b)| Shape::hom(a, b)),
            ]
        })
    }

    proptest! {
        #[test]
        fn print_parse_round_trip(s in arb_shape()) {
            prop_assert_eq!(Shape::parse(&s.to_string()).unwrap(), s);
        }
    }
}
