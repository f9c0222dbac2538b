//! Runtime values of the closed model: scalars carrying dual towers, pairs,
//! the unit, and closures.

use std::fmt;
use std::sync::Arc;

use num_traits::ToPrimitive;

use super::dual::DualTower;
use crate::error::{Error, Result};
use crate::expr::Func;
use crate::shape::Shape;
use crate::smooth::Term;

type Body = dyn Fn(&Value) -> Result<Value> + Send + Sync;

/// A function value. Closures capture their environment by value and are
/// pure, so they can be applied from any thread.
#[derive(Clone)]
pub struct Closure(Arc<Body>);

impl Closure {
    pub fn new(f: impl Fn(&Value) -> Result<Value> + Send + Sync + 'static) -> Closure {
        Closure(Arc::new(f))
    }

    pub fn call(&self, x: &Value) -> Result<Value> {
        (self.0)(x)
    }
}

#[derive(Clone)]
pub enum Value {
    Scalar(DualTower),
    Unit,
    Pair(Arc<Value>, Arc<Value>),
    Closure(Closure),
}

impl Value {
    pub fn scalar(x: f64) -> Value {
        Value::Scalar(DualTower::real(x))
    }

    pub fn pair(a: Value, b: Value) -> Value {
        Value::Pair(Arc::new(a), Arc::new(b))
    }

    pub fn closure(f: impl Fn(&Value) -> Result<Value> + Send + Sync + 'static) -> Value {
        Value::Closure(Closure::new(f))
    }

    pub fn as_scalar(&self) -> Result<&DualTower> {
        match self {
            Value::Scalar(d) => Ok(d),
            _ => Err(Error::NonScalar),
        }
    }

    pub fn split(&self) -> Result<(&Value, &Value)> {
        match self {
            Value::Pair(a, b) => Ok((a, b)),
            _ => Err(Error::Invalid("expected a pair value".into())),
        }
    }

    pub fn apply(&self, arg: &Value) -> Result<Value> {
        match self {
            Value::Closure(f) => f.call(arg),
            _ => Err(Error::Invalid("applied a value that is not a function".into())),
        }
    }

    /// The zero of `shape`; at function types, the constant zero function.
    pub fn zero(shape: &Shape) -> Value {
        match shape {
            Shape::Ground => Value::scalar(0.0),
            Shape::Unit => Value::Unit,
            Shape::Prod(a, b) => Value::pair(Value::zero(a), Value::zero(b)),
            Shape::Hom(_, a) => {
                let z = Value::zero(a);
                Value::closure(move |_| Ok(z.clone()))
            }
        }
    }

    /// Pointwise sum.
    pub fn add(&self, other: &Value) -> Result<Value> {
        Ok(match (self, other) {
            (Value::Scalar(a), Value::Scalar(b)) => Value::Scalar(a.add(b)),
            (Value::Unit, Value::Unit) => Value::Unit,
            (Value::Pair(a, b), Value::Pair(c, d)) => Value::pair(a.add(c)?, b.add(d)?),
            (Value::Closure(f), Value::Closure(g)) => {
                let (f, g) = (f.clone(), g.clone());
                Value::closure(move |x| f.call(x)?.add(&g.call(x)?))
            }
            _ => return Err(Error::Invalid("added values of different shapes".into())),
        })
    }

    /// Multiplies every scalar leaf by `k`, after application at function
    /// types.
    pub fn scale(&self, k: &DualTower) -> Value {
        match self {
            Value::Scalar(a) => Value::Scalar(k.mul(a)),
            Value::Unit => Value::Unit,
            Value::Pair(a, b) => Value::pair(a.scale(k), b.scale(k)),
            Value::Closure(f) => {
                let (f, k) = (f.clone(), k.clone());
                Value::closure(move |x| Ok(f.call(x)?.scale(&k)))
            }
        }
    }

    /// The `ε_t` coefficient of every scalar leaf, after application at
    /// function types.
    pub fn extract(&self, t: u64) -> Value {
        match self {
            Value::Scalar(a) => Value::Scalar(a.extract(t)),
            Value::Unit => Value::Unit,
            Value::Pair(a, b) => Value::pair(a.extract(t), b.extract(t)),
            Value::Closure(f) => {
                let f = f.clone();
                Value::closure(move |x| Ok(f.call(x)?.extract(t)))
            }
        }
    }

    /// Scalar leaves left to right; errors at a closure.
    pub fn scalars(&self) -> Result<Vec<DualTower>> {
        let mut out = Vec::new();
        self.collect_scalars(&mut out)?;
        Ok(out)
    }

    fn collect_scalars(&self, out: &mut Vec<DualTower>) -> Result<()> {
        match self {
            Value::Scalar(a) => out.push(a.clone()),
            Value::Unit => {}
            Value::Pair(a, b) => {
                a.collect_scalars(out)?;
                b.collect_scalars(out)?;
            }
            Value::Closure(_) => return Err(Error::NonScalar),
        }
        Ok(())
    }

    /// Rebuilds a first-order value of `shape` from its scalar leaves.
    pub fn from_scalars(shape: &Shape, leaves: &mut impl Iterator<Item = DualTower>) -> Result<Value> {
        Ok(match shape {
            Shape::Ground => Value::Scalar(leaves.next().ok_or(Error::Arity {
                expected: 1,
                found: 0,
            })?),
            Shape::Unit => Value::Unit,
            Shape::Prod(a, b) => {
                let x = Value::from_scalars(a, leaves)?;
                Value::pair(x, Value::from_scalars(b, leaves)?)
            }
            Shape::Hom(_, _) => {
                return Err(Error::HigherOrder {
                    op: "from_scalars",
                    shape: shape.clone(),
                })
            }
        })
    }

    pub fn from_reals(shape: &Shape, xs: &[f64]) -> Result<Value> {
        let n = shape.arity_for("from_reals")?;
        if xs.len() != n {
            return Err(Error::Arity {
                expected: n,
                found: xs.len(),
            });
        }
        Value::from_scalars(shape, &mut xs.iter().map(|x| DualTower::real(*x)))
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Scalar(a) => write!(f, "{}", a.value()),
            Value::Unit => f.write_str("()"),
            Value::Pair(a, b) => write!(f, "({a}, {b})"),
            Value::Closure(_) => f.write_str("<closure>"),
        }
    }
}

impl fmt::Debug for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Scalar(a) => write!(f, "{a:?}"),
            Value::Pair(a, b) => write!(f, "({a:?}, {b:?})"),
            other => write!(f, "{other}"),
        }
    }
}

/// Evaluates a smooth term over dual towers.
pub fn eval_term(t: &Term, vars: &[DualTower]) -> DualTower {
    match t {
        Term::Const(r) => DualTower::real(r.to_f64().unwrap_or(f64::NAN)),
        Term::Var(i) => vars[*i].clone(),
        Term::Add(a, b) => eval_term(a, vars).add(&eval_term(b, vars)),
        Term::Mul(a, b) => eval_term(a, vars).mul(&eval_term(b, vars)),
        Term::Neg(a) => eval_term(a, vars).neg(),
        Term::Pow(a, k) => eval_term(a, vars).powi(*k),
        Term::Call(f, a) => {
            let x = eval_term(a, vars);
            match f {
                Func::Sin => x.sin(),
                Func::Cos => x.cos(),
                Func::Exp => x.exp(),
            }
        }
    }
}
