//! An operational Cartesian closed model. Maps are executable functions on
//! [`Value`]s, so curry, uncurry and evaluation are first class; `D` is
//! forward differentiation with iterated dual numbers. Equality is decided
//! by sampling, with function values compared by application.

mod dual;
mod laws;
mod sample;
mod term;
mod value;

use std::fmt;
use std::sync::Arc;

pub use dual::{fresh_tag, DualTower};
pub use laws::{closed_laws, higher_order_corpus};
pub use sample::{Comparison, ValueSampler};
pub use term::{parse_closed_term, ClosedTerm, Definitions};
pub use value::{eval_term, Closure, Value};

use crate::category::{check_composable, check_same_hom, Closed, EqContract, Model};
use crate::combinator::{
    context_split, DViaExp, Differential, Linearizing, LinearizingSystem, SystemViaExp,
};
use crate::error::{Error, Result};
use crate::laws::gen::first_order_shape;
use crate::laws::{Generate, Kind, Rng};
use crate::shape::Shape;
use crate::smooth::{SampledEq, SmoothMap, SmoothModel};

/// A map `dom → cod` given by its executable body.
#[derive(Clone)]
pub struct ClosedMorphism {
    dom: Shape,
    cod: Shape,
    name: Arc<str>,
    body: Closure,
    /// The smooth map this was built from, kept for shrinking.
    ground: Option<Arc<SmoothMap>>,
}

impl ClosedMorphism {
    pub fn new(
        dom: Shape,
        cod: Shape,
        name: impl Into<String>,
        body: impl Fn(&Value) -> Result<Value> + Send + Sync + 'static,
    ) -> ClosedMorphism {
        ClosedMorphism {
            dom,
            cod,
            name: name.into().into(),
            body: Closure::new(body),
            ground: None,
        }
    }

    /// Runs a smooth map on the scalar leaves of its input.
    pub fn from_smooth(f: &SmoothMap) -> ClosedMorphism {
        let names: Vec<String> = (1..=f.dom().flatten().len()).map(|i| format!("x{i}")).collect();
        let comps = f.comps().to_vec();
        let cod = f.cod().clone();
        let out = cod.clone();
        let mut g = ClosedMorphism::new(f.dom().clone(), cod, f.display_with(&names), move |x| {
            let vars = x.scalars()?;
            let mut leaves = comps.iter().map(|c| eval_term(c, &vars));
            Value::from_scalars(&out, &mut leaves)
        });
        g.ground = Some(Arc::new(f.clone()));
        g
    }

    pub fn dom(&self) -> &Shape {
        &self.dom
    }

    pub fn cod(&self) -> &Shape {
        &self.cod
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn renamed(mut self, name: impl Into<String>) -> ClosedMorphism {
        self.name = name.into().into();
        self
    }

    pub fn ground_map(&self) -> Option<&SmoothMap> {
        self.ground.as_deref()
    }

    pub fn apply(&self, x: &Value) -> Result<Value> {
        self.body.call(x)
    }

    /// Evaluates a map with first-order domain at real inputs and returns
    /// the standard parts of the scalar outputs.
    pub fn eval_reals(&self, xs: &[f64]) -> Result<Vec<f64>> {
        let v = self.apply(&Value::from_reals(&self.dom, xs)?)?;
        Ok(v.scalars()?.iter().map(DualTower::value).collect())
    }
}

impl fmt::Display for ClosedMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {} : {}", self.dom, self.cod, self.name)
    }
}

impl fmt::Debug for ClosedMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Executable maps with sampled equality.
#[derive(Clone, Copy, Debug)]
pub struct ClosedModel {
    pub compare: Comparison,
    pub max_leaves: usize,
    /// Generates the ground maps the law corpus is built from.
    pub terms: SmoothModel,
}

impl Default for ClosedModel {
    fn default() -> Self {
        let eq = SampledEq::default();
        let terms = SmoothModel {
            max_depth: 3,
            ..SmoothModel::default()
        };
        ClosedModel {
            compare: Comparison {
                eq,
                hom_args: 10,
                values: ValueSampler {
                    lo: eq.lo,
                    hi: eq.hi,
                    terms,
                    depth: 2,
                },
            },
            max_leaves: 3,
            terms,
        }
    }
}

impl ClosedModel {
    /// Same model with a different sampling tolerance and point count.
    pub fn with_sampling(mut self, tolerance: f64, points: usize) -> ClosedModel {
        self.compare.eq.tolerance = tolerance;
        self.compare.eq.points = points;
        self
    }

    /// `D[f](x, y)`: the `ε` coefficient of `f(x + εy)` for a fresh `ε`.
    pub fn differential(&self, f: &ClosedMorphism) -> ClosedMorphism {
        let g = f.clone();
        ClosedMorphism::new(f.dom.doubled(), f.cod.clone(), format!("D({})", f.name), move |xy| {
            let (x, y) = xy.split()?;
            let t = fresh_tag();
            let moved = x.add(&y.scale(&DualTower::infinitesimal(t)))?;
            Ok(g.apply(&moved)?.extract(t))
        })
    }

    /// `L[f](x)`: the `ε` coefficient of `f(εx)`.
    pub fn exp_linearize(&self, f: &ClosedMorphism) -> ClosedMorphism {
        let g = f.clone();
        ClosedMorphism::new(f.dom.clone(), f.cod.clone(), format!("L({})", f.name), move |x| {
            let t = fresh_tag();
            Ok(g.apply(&x.scale(&DualTower::infinitesimal(t)))?.extract(t))
        })
    }

    /// `L^C[f](c, a)`: the `ε` coefficient of `f(c, εa)`, the derivative in
    /// the second block at 0 with the context held fixed.
    pub fn partial_linearize(&self, context: &Shape, f: &ClosedMorphism) -> Result<ClosedMorphism> {
        context_split(self, context, f, "partial_linearize")?;
        let g = f.clone();
        Ok(ClosedMorphism::new(
            f.dom.clone(),
            f.cod.clone(),
            format!("Lc({})", f.name),
            move |ca| {
                let (c, a) = ca.split()?;
                let t = fresh_tag();
                let moved = Value::pair(c.clone(), a.scale(&DualTower::infinitesimal(t)));
                Ok(g.apply(&moved)?.extract(t))
            },
        ))
    }

    /// `L^C[f] = λ⁻¹(L[λ(f)])` for `f : C × A → B`.
    pub fn partial_from_total(&self, f: &ClosedMorphism) -> Result<ClosedMorphism> {
        let (c, _) = f.dom.split_or_err("partial_from_total")?;
        SystemViaExp(ClosedL).linearize_in(self, c, f)
    }

    /// `D[f] = λ⁻¹(L[λ(⊕f)])`.
    pub fn d_from_exp(&self, f: &ClosedMorphism) -> Result<ClosedMorphism> {
        DViaExp(ClosedL).differential(self, f)
    }

    /// Sampled equality of two parallel maps.
    pub fn sampled_eq(&self, f: &ClosedMorphism, g: &ClosedMorphism) -> Result<bool> {
        check_same_hom(self, "sampled_eq", f, g)?;
        let dev = self
            .compare
            .deviation(&f.dom, &f.cod, |x| f.apply(x), |x| g.apply(x))?;
        Ok(dev <= self.compare.eq.tolerance)
    }

    fn leaf_map(
        &self,
        dom: Shape,
        cod: Shape,
        name: &str,
        body: impl Fn(&Value) -> Result<Value> + Send + Sync + 'static,
    ) -> ClosedMorphism {
        ClosedMorphism::new(dom, cod, name, body)
    }
}

impl Model for ClosedModel {
    type Mor = ClosedMorphism;

    fn name(&self) -> &'static str {
        "closed"
    }

    fn dom(&self, f: &ClosedMorphism) -> Shape {
        f.dom.clone()
    }

    fn cod(&self, f: &ClosedMorphism) -> Shape {
        f.cod.clone()
    }

    fn identity(&self, a: &Shape) -> Result<ClosedMorphism> {
        Ok(self.leaf_map(a.clone(), a.clone(), "1", |x| Ok(x.clone())))
    }

    fn compose(&self, f: &ClosedMorphism, g: &ClosedMorphism) -> Result<ClosedMorphism> {
        check_composable(self, f, g)?;
        let (f2, g2) = (f.clone(), g.clone());
        Ok(ClosedMorphism::new(
            f.dom.clone(),
            g.cod.clone(),
            format!("({} ; {})", f.name, g.name),
            move |x| g2.apply(&f2.apply(x)?),
        ))
    }

    fn pair(&self, f: &ClosedMorphism, g: &ClosedMorphism) -> Result<ClosedMorphism> {
        if f.dom != g.dom {
            return Err(Error::mismatch("pair", &f.dom, &g.dom));
        }
        let (f2, g2) = (f.clone(), g.clone());
        Ok(ClosedMorphism::new(
            f.dom.clone(),
            Shape::prod(f.cod.clone(), g.cod.clone()),
            format!("<{}, {}>", f.name, g.name),
            move |x| Ok(Value::pair(f2.apply(x)?, g2.apply(x)?)),
        ))
    }

    fn proj0(&self, a: &Shape, b: &Shape) -> Result<ClosedMorphism> {
        Ok(self.leaf_map(Shape::prod(a.clone(), b.clone()), a.clone(), "p0", |x| {
            Ok(x.split()?.0.clone())
        }))
    }

    fn proj1(&self, a: &Shape, b: &Shape) -> Result<ClosedMorphism> {
        Ok(self.leaf_map(Shape::prod(a.clone(), b.clone()), b.clone(), "p1", |x| {
            Ok(x.split()?.1.clone())
        }))
    }

    fn add(&self, f: &ClosedMorphism, g: &ClosedMorphism) -> Result<ClosedMorphism> {
        check_same_hom(self, "add", f, g)?;
        let (f2, g2) = (f.clone(), g.clone());
        Ok(ClosedMorphism::new(
            f.dom.clone(),
            f.cod.clone(),
            format!("({} + {})", f.name, g.name),
            move |x| f2.apply(x)?.add(&g2.apply(x)?),
        ))
    }

    fn zero(&self, a: &Shape, b: &Shape) -> Result<ClosedMorphism> {
        let z = Value::zero(b);
        Ok(self.leaf_map(a.clone(), b.clone(), "0", move |_| Ok(z.clone())))
    }

    fn equal(&self, f: &ClosedMorphism, g: &ClosedMorphism) -> Result<bool> {
        self.sampled_eq(f, g)
    }

    fn contract(&self) -> EqContract {
        EqContract::Sampled {
            tolerance: self.compare.eq.tolerance,
            points: self.compare.eq.points,
        }
    }
}

impl Closed for ClosedModel {
    fn curry(&self, f: &ClosedMorphism) -> Result<ClosedMorphism> {
        let (c, a) = f.dom.split_or_err("curry")?;
        let g = f.clone();
        Ok(ClosedMorphism::new(
            a.clone(),
            Shape::hom(c.clone(), f.cod.clone()),
            format!("curry({})", f.name),
            move |x| {
                let (g, x) = (g.clone(), x.clone());
                Ok(Value::closure(move |c| g.apply(&Value::pair(c.clone(), x.clone()))))
            },
        ))
    }

    fn uncurry(&self, g: &ClosedMorphism) -> Result<ClosedMorphism> {
        let Shape::Hom(c, b) = &g.cod else {
            return Err(Error::Invalid(format!(
                "uncurry: expected a function type, found {}",
                g.cod
            )));
        };
        let h = g.clone();
        Ok(ClosedMorphism::new(
            Shape::prod((**c).clone(), g.dom.clone()),
            (**b).clone(),
            format!("uncurry({})", g.name),
            move |ca| {
                let (c, a) = ca.split()?;
                h.apply(a)?.apply(c)
            },
        ))
    }

    fn eval_map(&self, c: &Shape, a: &Shape) -> Result<ClosedMorphism> {
        Ok(self.leaf_map(
            Shape::prod(c.clone(), Shape::hom(c.clone(), a.clone())),
            a.clone(),
            "ev",
            |x| {
                let (c, h) = x.split()?;
                h.apply(c)
            },
        ))
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ClosedD;

impl Differential<ClosedModel> for ClosedD {
    fn differential(&self, m: &ClosedModel, f: &ClosedMorphism) -> Result<ClosedMorphism> {
        Ok(m.differential(f))
    }
}

/// The total linearization read off at 0.
#[derive(Clone, Copy, Debug, Default)]
pub struct ClosedL;

impl Linearizing<ClosedModel> for ClosedL {
    fn linearize(&self, m: &ClosedModel, f: &ClosedMorphism) -> Result<ClosedMorphism> {
        Ok(m.exp_linearize(f))
    }
}

/// Partial linearization with the context held fixed.
#[derive(Clone, Copy, Debug, Default)]
pub struct ClosedLsys;

impl LinearizingSystem<ClosedModel> for ClosedLsys {
    fn linearize_in(&self, m: &ClosedModel, context: &Shape, f: &ClosedMorphism) -> Result<ClosedMorphism> {
        m.partial_linearize(context, f)
    }
}

impl Generate for ClosedModel {
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
    ) -> Result<ClosedMorphism> {
        let f = self.terms.gen_mor(rng, context, a, b, kind)?;
        Ok(ClosedMorphism::from_smooth(&f))
    }

    fn shrink(&self, f: &ClosedMorphism) -> Vec<ClosedMorphism> {
        f.ground_map()
            .map(|g| self.terms.shrink(g).iter().map(ClosedMorphism::from_smooth).collect())
            .unwrap_or_default()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::{ClosedStructure, Structure};
    use crate::expr::parse_poly_map;
    use crate::poly::{PolyD, PolyModel, Rational};
    use num_traits::ToPrimitive;
    use crate::smooth::parse_smooth_map;

    fn ground(src: &str) -> ClosedMorphism {
        ClosedMorphism::from_smooth(&parse_smooth_map(src, &[]).unwrap().0)
    }

    #[test]
    fn derivative_of_cubic() {
        let m = ClosedModel::default();
        let f = ground("x^3+x");
        assert_eq!(m.differential(&f).eval_reals(&[2.0, 1.0]).unwrap(), vec![13.0]);
        assert_eq!(m.d_from_exp(&f).unwrap().eval_reals(&[2.0, 1.0]).unwrap(), vec![13.0]);
    }

    #[test]
    fn identity_and_projection_derivatives() {
        let m = ClosedModel::default();
        let id = m.identity(&Shape::Ground).unwrap();
        assert!(m.equal(&m.differential(&id), &m.proj1(&Shape::Ground, &Shape::Ground).unwrap()).unwrap());
        let s = Shape::ground_power(2);
        let p0 = m.proj0(&Shape::Ground, &Shape::Ground).unwrap();
        let rhs = m.compose(&m.proj1(&s, &s).unwrap(), &p0).unwrap();
        assert!(m.equal(&m.d_from_exp(&p0).unwrap(), &rhs).unwrap());
    }

    #[test]
    fn sine_linearizes_to_identity() {
        let m = ClosedModel::default();
        let f = ground("sin(x)");
        assert!(m.equal(&m.exp_linearize(&f), &m.identity(&Shape::Ground).unwrap()).unwrap());
    }

    #[test]
    fn partial_linearization_examples() {
        let m = ClosedModel::default();
        let f = ground("ctx(c) args(a) c*a + a^3");
        let expected = ground("ctx(c) args(a) c*a");
        assert!(m.equal(&m.partial_from_total(&f).unwrap(), &expected).unwrap());
        assert!(m.equal(&m.partial_linearize(&Shape::Ground, &f).unwrap(), &expected).unwrap());
        let g = ground("ctx(c) args(a) c^2");
        let zero = m.zero(g.dom(), g.cod()).unwrap();
        assert!(m.equal(&m.partial_from_total(&g).unwrap(), &zero).unwrap());
    }

    #[test]
    fn curry_round_trip_and_eta() {
        let m = ClosedModel::default();
        let f = ground("c*a");
        let back = m.uncurry(&m.curry(&f).unwrap()).unwrap();
        assert!(m.equal(&back, &f).unwrap());
        let (r, rr) = (Shape::Ground, Shape::ground_power(2));
        let ev = m.eval_map(&r, &rr).unwrap();
        assert!(m.equal(&m.uncurry(&m.curry(&ev).unwrap()).unwrap(), &ev).unwrap());
        let eta = m.eta(&r, &Shape::hom(r.clone(), rr.clone())).unwrap();
        let mu = m.mu(&r, &rr).unwrap();
        let id = m.identity(&Shape::hom(r.clone(), rr.clone())).unwrap();
        assert!(m.equal(&m.compose(&eta, &mu).unwrap(), &id).unwrap());
    }

    #[test]
    fn sampled_equality_separates_function_values() {
        let m = ClosedModel::default();
        let f = ground("c*a + a^3");
        let lf = m.curry(&m.partial_from_total(&f).unwrap()).unwrap();
        let cf = m.curry(&f).unwrap();
        assert!(!m.equal(&lf, &cf).unwrap());
        let lcf = m.exp_linearize(&cf);
        assert!(!m.equal(&lcf, &cf).unwrap());
        assert!(m.equal(&lcf, &lf).unwrap());
    }

    #[test]
    fn hom_map_identity() {
        let m = ClosedModel::default();
        let r = Shape::Ground;
        let one = m.identity(&r).unwrap();
        let hom = m.hom_map(&one, &one).unwrap();
        assert!(m.equal(&hom, &m.identity(&Shape::hom(r.clone(), r)).unwrap()).unwrap());
    }

    #[test]
    fn dual_numbers_match_the_polynomial_differential() {
        let m = ClosedModel::default();
        let src = "x^2*y - 3*x*y^3 + 2*x + 1";
        let (p, _) = parse_poly_map(src, &[]).unwrap();
        let dp = PolyD.differential(&PolyModel::default(), &p).unwrap();
        let dc = m.differential(&ground(src));
        for pt in [[0.5, -1.0, 2.0, 0.25], [1.0, 2.0, -3.0, 0.5], [-0.125, 0.75, 1.0, 1.0]] {
            let q: Vec<Rational> = pt.iter().map(|x| Rational::from_float(*x).unwrap()).collect();
            let exact: Vec<f64> = dp.eval(&q).unwrap().iter().map(|r| r.to_f64().unwrap()).collect();
            assert_eq!(dc.eval_reals(&pt).unwrap(), exact);
        }
    }

    #[test]
    fn second_derivative_is_symmetric() {
        let m = ClosedModel::default();
        let f = ground("sin(x*y) + x^3*y");
        let ddf = m.differential(&m.differential(&f));
        let a = Shape::ground_power(2);
        let c = m.interchange(&a, &a, &a, &a).unwrap();
        assert!(m.equal(&m.compose(&c, &ddf).unwrap(), &ddf).unwrap());
    }
}
