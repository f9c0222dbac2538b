//! Rational matrices as a category with biproducts. Every map is linear:
//! `D[f] = π₁f`, `L` is the identity and `L^C[f] = (0 × 1)f`.

use std::fmt;

use num_traits::{One, Signed, Zero};
use rand::Rng as _;

use crate::category::{check_composable, check_same_hom, EqContract, Model};
use crate::combinator::{
    context_split, Differential, LinearizeViaD, Linearizing, LinearizingSystem,
};
use crate::error::{Error, ParseError, Result};
use crate::laws::{Generate, Kind, Rng};
use crate::laws::gen::first_order_shape;
use crate::laws::runner::{build, check_all, Law};
use crate::poly::{format_rational, rat, Rational};
use crate::shape::Shape;

/// A linear map between flattened shapes: `rows[i][j]` is the coefficient
/// of input leaf `j` in output leaf `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixMap {
    dom: Shape,
    cod: Shape,
    rows: Vec<Vec<Rational>>,
}

impl MatrixMap {
    pub fn new(dom: Shape, cod: Shape, rows: Vec<Vec<Rational>>) -> Result<MatrixMap> {
        let (n, m) = (dom.arity()?, cod.arity()?);
        if rows.len() != m {
            return Err(Error::Arity {
                expected: m,
                found: rows.len(),
            });
        }
        if let Some(r) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::Arity {
                expected: n,
                found: r.len(),
            });
        }
        Ok(MatrixMap { dom, cod, rows })
    }

    pub fn dom(&self) -> &Shape {
        &self.dom
    }

    pub fn cod(&self) -> &Shape {
        &self.cod
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    fn ncols(&self) -> usize {
        self.rows.first().map_or_else(|| self.dom.flatten().len(), Vec::len)
    }

    pub fn apply(&self, x: &[Rational]) -> Result<Vec<Rational>> {
        if x.len() != self.ncols() {
            return Err(Error::Arity {
                expected: self.ncols(),
                found: x.len(),
            });
        }
        Ok(self
            .rows
            .iter()
            .map(|r| r.iter().zip(x).fold(rat(0), |acc, (a, b)| acc + a * b))
            .collect())
    }

    /// Parses `[[1,0],[2,3]]` as a map `R × R → R × R`. Entries are
    /// integers or fractions `p/q`.
    pub fn parse(src: &str) -> Result<MatrixMap, ParseError> {
        let rows = MatrixParser { src, pos: 0 }.parse()?;
        let ncols = rows.first().map_or(0, Vec::len);
        let dom = Shape::ground_power(ncols);
        let cod = Shape::ground_power(rows.len());
        Ok(MatrixMap { dom, cod, rows })
    }

    /// `[[a, b], [c, d]]`, the literal syntax [`MatrixMap::parse`] reads.
    pub fn literal(&self) -> String {
        let rows: Vec<String> = self
            .rows
            .iter()
            .map(|r| {
                let cells: Vec<String> = r.iter().map(format_rational).collect();
                format!("[{}]", cells.join(","))
            })
            .collect();
        format!("[{}]", rows.join(","))
    }
}

impl fmt::Display for MatrixMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {} : {}", self.dom, self.cod, self.literal())
    }
}

const MAX_DIM: usize = 256;

struct MatrixParser<'a> {
    src: &'a str,
    pos: usize,
}

impl MatrixParser<'_> {
    fn err(&self, msg: impl Into<String>) -> ParseError {
        ParseError::new(msg, self.src, self.pos)
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if !c.is_ascii_whitespace() {
                break;
            }
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected '{c}'")))
        }
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn parse(mut self) -> Result<Vec<Vec<Rational>>, ParseError> {
        self.expect('[')?;
        let mut rows = Vec::new();
        loop {
            rows.push(self.row()?);
            if rows.len() > MAX_DIM {
                return Err(self.err("matrix too large"));
            }
            if !self.eat(',') {
                break;
            }
        }
        self.expect(']')?;
        self.skip_ws();
        if self.pos != self.src.len() {
            return Err(self.err("trailing input"));
        }
        let width = rows[0].len();
        if rows.iter().any(|r| r.len() != width) {
            return Err(ParseError::new("rows have different lengths", self.src, 0));
        }
        Ok(rows)
    }

    fn row(&mut self) -> Result<Vec<Rational>, ParseError> {
        self.expect('[')?;
        let mut out = Vec::new();
        if self.eat(']') {
            return Ok(out);
        }
        loop {
            out.push(self.entry()?);
            if out.len() > MAX_DIM {
                return Err(self.err("matrix too large"));
            }
            if !self.eat(',') {
                break;
            }
        }
        self.expect(']')?;
        Ok(out)
    }

    fn entry(&mut self) -> Result<Rational, ParseError> {
        self.skip_ws();
        let neg = self.eat('-');
        let num = self.int()?;
        let den = if self.eat('/') {
            let d = self.int()?;
            if d.is_zero() {
                self.pos -= 1;
                return Err(self.err("division by zero"));
            }
            d
        } else {
            num_bigint::BigInt::one()
        };
        let r = Rational::new(num, den);
        Ok(if neg { -r } else { r })
    }

    fn int(&mut self) -> Result<num_bigint::BigInt, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a number"));
        }
        if self.pos - start > 64 {
            return Err(ParseError::new("number too long", self.src, start));
        }
        Ok(self.src[start..self.pos].parse().expect("ascii digits"))
    }
}

/// Rational matrices with direct sums as products.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BiproductModel {
    pub max_leaves: usize,
    /// Entries are drawn from `[-coeff, coeff]`.
    pub coeff: i64,
}

impl Default for BiproductModel {
    fn default() -> Self {
        BiproductModel {
            max_leaves: 3,
            coeff: 2,
        }
    }
}

impl BiproductModel {
    fn build(&self, dom: &Shape, cod: &Shape, cell: impl Fn(usize, usize) -> Rational) -> Result<MatrixMap> {
        let (n, m) = (dom.arity_for("biproduct")?, cod.arity_for("biproduct")?);
        let rows = (0..m).map(|i| (0..n).map(|j| cell(i, j)).collect()).collect();
        Ok(MatrixMap {
            dom: dom.clone(),
            cod: cod.clone(),
            rows,
        })
    }

    /// `D[f] = π₁f`: the block matrix `[0 | f]` on the doubled domain.
    pub fn differential(&self, f: &MatrixMap) -> MatrixMap {
        let n = f.ncols();
        let rows = f
            .rows
            .iter()
            .map(|r| {
                let mut out = vec![rat(0); n];
                out.extend(r.iter().cloned());
                out
            })
            .collect();
        MatrixMap {
            dom: f.dom.doubled(),
            cod: f.cod.clone(),
            rows,
        }
    }

    /// `(0 × 1)f`: the context columns cleared.
    pub fn partial_linearize(&self, context: &Shape, f: &MatrixMap) -> Result<MatrixMap> {
        context_split(self, context, f, "partial_linearize")?;
        let nc = context.arity_for("biproduct")?;
        let mut g = f.clone();
        for r in &mut g.rows {
            for x in &mut r[..nc] {
                *x = rat(0);
            }
        }
        Ok(g)
    }

    pub fn matrix_eq(&self, f: &MatrixMap, g: &MatrixMap) -> Result<bool> {
        check_same_hom(self, "matrix_eq", f, g)?;
        Ok(f.rows == g.rows)
    }
}

impl Model for BiproductModel {
    type Mor = MatrixMap;

    fn name(&self) -> &'static str {
        "biproduct"
    }

    fn dom(&self, f: &MatrixMap) -> Shape {
        f.dom.clone()
    }

    fn cod(&self, f: &MatrixMap) -> Shape {
        f.cod.clone()
    }

    fn identity(&self, a: &Shape) -> Result<MatrixMap> {
        self.build(a, a, |i, j| if i == j { rat(1) } else { rat(0) })
    }

    fn compose(&self, f: &MatrixMap, g: &MatrixMap) -> Result<MatrixMap> {
        check_composable(self, f, g)?;
        let n = f.ncols();
        let rows = g
            .rows
            .iter()
            .map(|gr| {
                (0..n)
                    .map(|j| {
                        gr.iter()
                            .zip(&f.rows)
                            .fold(rat(0), |acc, (a, fr)| acc + a * &fr[j])
                    })
                    .collect()
            })
            .collect();
        Ok(MatrixMap {
            dom: f.dom.clone(),
            cod: g.cod.clone(),
            rows,
        })
    }

    fn pair(&self, f: &MatrixMap, g: &MatrixMap) -> Result<MatrixMap> {
        if f.dom != g.dom {
            return Err(Error::mismatch("pair", &f.dom, &g.dom));
        }
        let rows = f.rows.iter().chain(&g.rows).cloned().collect();
        Ok(MatrixMap {
            dom: f.dom.clone(),
            cod: Shape::prod(f.cod.clone(), g.cod.clone()),
            rows,
        })
    }

    fn proj0(&self, a: &Shape, b: &Shape) -> Result<MatrixMap> {
        let ab = Shape::prod(a.clone(), b.clone());
        self.build(&ab, a, |i, j| if i == j { rat(1) } else { rat(0) })
    }

    fn proj1(&self, a: &Shape, b: &Shape) -> Result<MatrixMap> {
        let na = a.arity_for("biproduct")?;
        let ab = Shape::prod(a.clone(), b.clone());
        self.build(&ab, b, |i, j| if j == na + i { rat(1) } else { rat(0) })
    }

    fn add(&self, f: &MatrixMap, g: &MatrixMap) -> Result<MatrixMap> {
        check_same_hom(self, "add", f, g)?;
        let rows = f
            .rows
            .iter()
            .zip(&g.rows)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect())
            .collect();
        Ok(MatrixMap {
            dom: f.dom.clone(),
            cod: f.cod.clone(),
            rows,
        })
    }

    fn zero(&self, a: &Shape, b: &Shape) -> Result<MatrixMap> {
        self.build(a, b, |_, _| rat(0))
    }

    fn equal(&self, f: &MatrixMap, g: &MatrixMap) -> Result<bool> {
        self.matrix_eq(f, g)
    }

    fn contract(&self) -> EqContract {
        EqContract::Exact
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct BiproductD;

impl Differential<BiproductModel> for BiproductD {
    fn differential(&self, m: &BiproductModel, f: &MatrixMap) -> Result<MatrixMap> {
        Ok(m.differential(f))
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct BiproductL;

impl Linearizing<BiproductModel> for BiproductL {
    fn linearize(&self, _: &BiproductModel, f: &MatrixMap) -> Result<MatrixMap> {
        Ok(f.clone())
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct BiproductLsys;

impl LinearizingSystem<BiproductModel> for BiproductLsys {
    fn linearize_in(&self, m: &BiproductModel, context: &Shape, f: &MatrixMap) -> Result<MatrixMap> {
        m.partial_linearize(context, f)
    }
}

impl Generate for BiproductModel {
    fn gen_shape(&self, rng: &mut Rng, max_leaves: usize) -> Shape {
        first_order_shape(rng, max_leaves.min(self.max_leaves))
    }

    fn gen_mor(
        &self,
        rng: &mut Rng,
        context: Option<&Shape>,
        a: &Shape,
        b: &Shape,
        kind: Kind,
    ) -> Result<MatrixMap> {
        let nc = context.map_or(Ok(0), |c| c.arity_for("biproduct"))?;
        let dom = match context {
            Some(c) => Shape::prod(c.clone(), a.clone()),
            None => a.clone(),
        };
        // Linear maps are additive everywhere; in a slice, additivity or
        // reducedness in the argument block rules out context columns, and
        // constancy rules out argument columns.
        let keep = |j: usize| match (context.is_some(), kind) {
            (_, Kind::Any) => true,
            (false, Kind::Constant) => false,
            (false, _) => true,
            (true, Kind::Constant) => j < nc,
            (true, _) => j >= nc,
        };
        let (n, m) = (dom.arity_for("biproduct")?, b.arity_for("biproduct")?);
        let rows = (0..m)
            .map(|_| {
                (0..n)
                    .map(|j| {
                        if keep(j) {
                            rat(rng.random_range(-self.coeff..=self.coeff))
                        } else {
                            rat(0)
                        }
                    })
                    .collect()
            })
            .collect();
        Ok(MatrixMap {
            dom,
            cod: b.clone(),
            rows,
        })
    }

    fn shrink(&self, f: &MatrixMap) -> Vec<MatrixMap> {
        let mut out = Vec::new();
        for (i, r) in f.rows.iter().enumerate() {
            for (j, x) in r.iter().enumerate() {
                let mut push = |v: Rational| {
                    let mut g = f.clone();
                    g.rows[i][j] = v;
                    out.push(g);
                };
                if !x.is_zero() {
                    push(rat(0));
                }
                if x.abs() > rat(1) {
                    push(if *x > rat(0) { rat(1) } else { rat(-1) });
                }
            }
        }
        out
    }
}

/// Every map is linear: `f = ⟨0, 1⟩D[f]`, and `L` fixes it.
pub fn biproduct_laws<'a>() -> Vec<Law<'a, BiproductModel>> {
    vec![Law::new(
        "BP.linear",
        |m: &BiproductModel, rng: &mut Rng| {
            build(m, rng, |b| {
                let s = b.shapes(2, 5);
                b.mor(&s[0], &s[1])?;
                Ok(())
            })
        },
        |m: &BiproductModel, inst| {
            let f = inst.mor(0);
            check_all(
                m,
                &[
                    ("<0, 1>D[f] = f", LinearizeViaD(BiproductD).linearize(m, f)?, f.clone()),
                    ("L[f] = f", BiproductL.linearize(m, f)?, f.clone()),
                ],
            )
        },
    )]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::Structure;
    use crate::combinator::SystemViaD;

    fn mat(src: &str) -> MatrixMap {
        MatrixMap::parse(src).unwrap()
    }

    #[test]
    fn parse_and_print() {
        let f = mat("[[1,0],[2,3]]");
        assert_eq!(f.dom().to_string(), "(R*R)");
        assert_eq!(f.literal(), "[[1,0],[2,3]]");
        assert_eq!(mat(" [ [ -1/2 , 4/2 ] ] ").literal(), "[[-1/2,2]]");
        assert_eq!(mat("[[]]").dom(), &Shape::Unit);
        for bad in ["", "[", "[[1,2],[3]]", "[[1/0]]", "[[1]]x", "[[a]]", "[]"] {
            assert!(MatrixMap::parse(bad).is_err(), "{bad}");
        }
        assert_eq!(MatrixMap::parse("[[1/0]]").unwrap_err().position, 4);
    }

    #[test]
    fn differential_is_zero_block_then_f() {
        let m = BiproductModel::default();
        let id = m.identity(&Shape::ground_power(2)).unwrap();
        assert_eq!(m.differential(&id).literal(), "[[0,0,1,0],[0,0,0,1]]");
        let f = mat("[[1,2],[3,4]]");
        assert!(m.equal(&LinearizeViaD(BiproductD).linearize(&m, &f).unwrap(), &f).unwrap());
    }

    #[test]
    fn chain_rule_reduces_to_composite() {
        let m = BiproductModel::default();
        let f = mat("[[1,2],[0,1],[5,-1]]");
        let g = mat("[[1,1,1]]");
        let d = BiproductD;
        let head = m
            .pair(
                &m.compose(&m.proj0(f.dom(), f.dom()).unwrap(), &f).unwrap(),
                &d.differential(&m, &f).unwrap(),
            )
            .unwrap();
        let rhs = m.compose(&head, &d.differential(&m, &g).unwrap()).unwrap();
        let lhs = d.differential(&m, &m.compose(&f, &g).unwrap()).unwrap();
        // By hand: D[fg] = [0 0 | 6 2].
        assert_eq!(lhs.literal(), "[[0,0,6,2]]");
        assert!(m.equal(&lhs, &rhs).unwrap());
    }

    #[test]
    fn structure() {
        let m = BiproductModel::default();
        let f = mat("[[1,2]]");
        let g = mat("[[3,4]]");
        assert_eq!(m.pair(&f, &g).unwrap().literal(), "[[1,2],[3,4]]");
        let neg = mat("[[-1,-2]]");
        assert!(m.equal(&m.add(&f, &neg).unwrap(), &m.zero(f.dom(), f.cod()).unwrap()).unwrap());
        let id = m.identity(f.dom()).unwrap();
        assert_eq!(m.compose(&id, &f).unwrap(), f);
        let s = Shape::ground_power(2);
        let tau = m.sym(&Shape::Ground, &Shape::Ground).unwrap();
        assert_eq!(tau.literal(), "[[0,1],[1,0]]");
        assert_eq!(m.oplus(&s).unwrap().literal(), "[[1,0,1,0],[0,1,0,1]]");
    }

    #[test]
    fn partial_linearize_matches_lift_of_d() {
        let m = BiproductModel::default();
        let f = MatrixMap::new(
            Shape::prod(Shape::Ground, Shape::ground_power(2)),
            Shape::Ground,
            vec![vec![rat(5), rat(1), rat(2)]],
        )
        .unwrap();
        let direct = BiproductLsys.linearize_in(&m, &Shape::Ground, &f).unwrap();
        let via = SystemViaD(BiproductD).linearize_in(&m, &Shape::Ground, &f).unwrap();
        assert_eq!(direct.literal(), "[[0,1,2]]");
        assert!(m.equal(&direct, &via).unwrap());
    }
}
