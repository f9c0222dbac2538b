//! Random values of any shape, and sampled comparison of values. Function
//! values are drawn as smooth terms in the scalars they can observe: the
//! scalars captured from enclosing closures plus the scalar features of
//! their argument.

use std::sync::Arc;

use rand::{Rng as _, SeedableRng};

use super::dual::DualTower;
use super::value::{eval_term, Value};
use crate::error::{Error, Result};
use crate::laws::gen::splitmix64;
use crate::laws::Rng;
use crate::shape::Shape;
use crate::smooth::{SampledEq, SmoothModel, T};

enum Tree {
    Ground(T),
    Unit,
    Pair(Box<Tree>, Box<Tree>),
    Hom(Arc<SampleFn>),
}

struct SampleFn {
    arg: Shape,
    body: Tree,
}

/// The fixed argument a function-typed leaf is applied to when its
/// features are read.
fn probe(shape: &Shape) -> Value {
    match shape {
        Shape::Ground => Value::scalar(0.5),
        Shape::Unit => Value::Unit,
        Shape::Prod(a, b) => Value::pair(probe(a), probe(b)),
        Shape::Hom(_, a) => {
            let p = probe(a);
            Value::closure(move |_| Ok(p.clone()))
        }
    }
}

fn feature_count(shape: &Shape) -> usize {
    match shape {
        Shape::Ground => 1,
        Shape::Unit => 0,
        Shape::Prod(a, b) => feature_count(a) + feature_count(b),
        Shape::Hom(_, a) => feature_count(a),
    }
}

/// Scalars observable in `v`: its scalar leaves, and the features of each
/// function leaf applied to the probe.
fn features(v: &Value, shape: &Shape, out: &mut Vec<DualTower>) -> Result<()> {
    match shape {
        Shape::Ground => out.push(v.as_scalar()?.clone()),
        Shape::Unit => {}
        Shape::Prod(a, b) => {
            let (x, y) = v.split()?;
            features(x, a, out)?;
            features(y, b, out)?;
        }
        Shape::Hom(c, a) => features(&v.apply(&probe(c))?, a, out)?,
    }
    Ok(())
}

/// Draws values of any shape. Scalars are uniform on `[lo, hi]`.
#[derive(Clone, Copy, Debug)]
pub struct ValueSampler {
    pub lo: f64,
    pub hi: f64,
    pub terms: SmoothModel,
    /// Depth of the terms inside sampled functions.
    pub depth: usize,
}

impl ValueSampler {
    fn tree(&self, shape: &Shape, nvars: usize, rng: &mut Rng) -> Tree {
        match shape {
            Shape::Ground => Tree::Ground(self.terms.random_term(rng, nvars, self.depth)),
            Shape::Unit => Tree::Unit,
            Shape::Prod(a, b) => Tree::Pair(
                Box::new(self.tree(a, nvars, rng)),
                Box::new(self.tree(b, nvars, rng)),
            ),
            Shape::Hom(c, a) => Tree::Hom(Arc::new(self.function(c, a, nvars, rng))),
        }
    }

    fn function(&self, c: &Shape, a: &Shape, outer: usize, rng: &mut Rng) -> SampleFn {
        SampleFn {
            arg: c.clone(),
            body: self.tree(a, outer + feature_count(c), rng),
        }
    }

    pub fn value(&self, shape: &Shape, rng: &mut Rng) -> Value {
        match shape {
            Shape::Ground => Value::scalar(rng.random_range(self.lo..=self.hi)),
            Shape::Unit => Value::Unit,
            Shape::Prod(a, b) => {
                let x = self.value(a, rng);
                Value::pair(x, self.value(b, rng))
            }
            Shape::Hom(c, a) => materialize(Arc::new(self.function(c, a, 0, rng)), Vec::new()),
        }
    }
}

fn materialize(sf: Arc<SampleFn>, outer: Vec<DualTower>) -> Value {
    Value::closure(move |x| {
        let mut vars = outer.clone();
        features(x, &sf.arg, &mut vars)?;
        Ok(build(&sf.body, &vars))
    })
}

fn build(tree: &Tree, vars: &[DualTower]) -> Value {
    match tree {
        Tree::Ground(t) => Value::Scalar(eval_term(t, vars)),
        Tree::Unit => Value::Unit,
        Tree::Pair(a, b) => Value::pair(build(a, vars), build(b, vars)),
        Tree::Hom(sf) => materialize(sf.clone(), vars.to_vec()),
    }
}

fn stream(seed: u64, salt: u64, i: usize) -> Rng {
    Rng::seed_from_u64(splitmix64(seed ^ splitmix64((salt << 32) ^ i as u64)))
}

/// Sampled equality of values and maps. Function values are compared by
/// applying both to `hom_args` sampled arguments, recursively.
#[derive(Clone, Copy, Debug)]
pub struct Comparison {
    pub eq: SampledEq,
    pub hom_args: usize,
    pub values: ValueSampler,
}

impl Comparison {
    /// Point `i` of the sample for inputs of `shape`.
    pub fn point(&self, shape: &Shape, i: usize) -> Value {
        self.values.value(shape, &mut stream(self.eq.seed, 0, i))
    }

    /// Largest scaled deviation between `a` and `b` at `shape`, or `None`
    /// when some compared scalar is not finite.
    pub fn value_deviation(&self, shape: &Shape, a: &Value, b: &Value, key: u64) -> Result<Option<f64>> {
        match shape {
            Shape::Ground => {
                let (x, y) = (a.as_scalar()?.value(), b.as_scalar()?.value());
                if !(x.is_finite() && y.is_finite()) {
                    return Ok(None);
                }
                Ok(Some((x - y).abs() / 1f64.max(x.abs()).max(y.abs())))
            }
            Shape::Unit => Ok(Some(0.0)),
            Shape::Prod(s, t) => {
                let ((a0, a1), (b0, b1)) = (a.split()?, b.split()?);
                let Some(d0) = self.value_deviation(s, a0, b0, splitmix64(key ^ 1))? else {
                    return Ok(None);
                };
                let Some(d1) = self.value_deviation(t, a1, b1, splitmix64(key ^ 2))? else {
                    return Ok(None);
                };
                Ok(Some(d0.max(d1)))
            }
            Shape::Hom(c, x) => {
                let mut worst = 0f64;
                for j in 0..self.hom_args {
                    let arg = self.values.value(c, &mut stream(key, 1, j));
                    let (fa, fb) = (a.apply(&arg)?, b.apply(&arg)?);
                    match self.value_deviation(x, &fa, &fb, splitmix64(key ^ (j as u64 + 3)))? {
                        Some(d) => worst = worst.max(d),
                        None => return Ok(None),
                    }
                }
                Ok(Some(worst))
            }
        }
    }

    /// Largest deviation between `f` and `g` over the sample; points where
    /// either side is not finite are redrawn, up to five times the sample
    /// size.
    pub fn deviation(
        &self,
        dom: &Shape,
        cod: &Shape,
        f: impl Fn(&Value) -> Result<Value>,
        g: impl Fn(&Value) -> Result<Value>,
    ) -> Result<f64> {
        let (mut worst, mut good, mut tried) = (0f64, 0, 0);
        while good < self.eq.points {
            if tried >= 5 * self.eq.points.max(1) {
                return Err(Error::Sampling(format!(
                    "only {good} of {} points gave finite values",
                    self.eq.points
                )));
            }
            let x = self.point(dom, tried);
            let key = splitmix64(self.eq.seed ^ 0x9e37 ^ tried as u64);
            tried += 1;
            if let Some(d) = self.value_deviation(cod, &f(&x)?, &g(&x)?, key)? {
                good += 1;
                worst = worst.max(d);
            }
        }
        Ok(worst)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn comparison() -> Comparison {
        Comparison {
            eq: SampledEq::default(),
            hom_args: 10,
            values: ValueSampler {
                lo: -1.0,
                hi: 1.0,
                terms: SmoothModel::default(),
                depth: 2,
            },
        }
    }

    #[test]
    fn sampled_functions_are_deterministic() {
        let cmp = comparison();
        let s: Shape = "[(R*R),[R,R]]".parse().unwrap();
        let (f, g) = (cmp.point(&s, 3), cmp.point(&s, 3));
        let arg = Value::pair(Value::scalar(0.2), Value::scalar(-0.7));
        let inner = Value::scalar(0.1);
        let a = f.apply(&arg).unwrap().apply(&inner).unwrap();
        let b = g.apply(&arg).unwrap().apply(&inner).unwrap();
        assert_eq!(a.as_scalar().unwrap().value(), b.as_scalar().unwrap().value());
    }

    #[test]
    fn function_values_compare_by_application() {
        let cmp = comparison();
        let s: Shape = "[R,R]".parse().unwrap();
        let double = Value::closure(|x| x.add(x));
        let twice = Value::closure(|x| Ok(x.scale(&DualTower::real(2.0))));
        let square = Value::closure(|x| {
            let v = x.as_scalar()?;
            Ok(Value::Scalar(v.mul(v)))
        });
        assert_eq!(cmp.value_deviation(&s, &double, &twice, 7).unwrap(), Some(0.0));
        assert!(cmp.value_deviation(&s, &double, &square, 7).unwrap().unwrap() > 1e-3);
    }
}
