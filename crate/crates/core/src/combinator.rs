//! Differential and linearizing combinators as capabilities on a model, and
//! the generic constructions converting between them.

use std::sync::Arc;

use crate::category::{Closed, Model, Slice, Structure};
use crate::error::{Error, Result};
use crate::shape::Shape;

/// `D[f] : A × A → B` for `f : A → B`.
pub trait Differential<M: Model + ?Sized>: Sync {
    fn differential(&self, m: &M, f: &M::Mor) -> Result<M::Mor>;
}

/// `L[f] : A → B` for `f : A → B`.
pub trait Linearizing<M: Model + ?Sized>: Sync {
    fn linearize(&self, m: &M, f: &M::Mor) -> Result<M::Mor>;
}

/// A linearizing combinator in every simple slice: `L^C[f]` for
/// `f : C × A → B`.
pub trait LinearizingSystem<M: Model + ?Sized>: Sync {
    fn linearize_in(&self, m: &M, context: &Shape, f: &M::Mor) -> Result<M::Mor>;
}

/// Wraps a closure as a [`Differential`] combinator.
pub struct DifferentialFn<F>(pub F);

impl<M, F> Differential<M> for DifferentialFn<F>
where
    M: Model + ?Sized,
    F: Fn(&M, &M::Mor) -> Result<M::Mor> + Sync,
{
    fn differential(&self, m: &M, f: &M::Mor) -> Result<M::Mor> {
        (self.0)(m, f)
    }
}

/// Wraps a closure as a [`Linearizing`] combinator.
pub struct LinearizeFn<F>(pub F);

impl<M, F> Linearizing<M> for LinearizeFn<F>
where
    M: Model + ?Sized,
    F: Fn(&M, &M::Mor) -> Result<M::Mor> + Sync,
{
    fn linearize(&self, m: &M, f: &M::Mor) -> Result<M::Mor> {
        (self.0)(m, f)
    }
}

/// Wraps a closure as a [`LinearizingSystem`].
pub struct SystemFn<F>(pub F);

impl<M, F> LinearizingSystem<M> for SystemFn<F>
where
    M: Model + ?Sized,
    F: Fn(&M, &Shape, &M::Mor) -> Result<M::Mor> + Sync,
{
    fn linearize_in(&self, m: &M, context: &Shape, f: &M::Mor) -> Result<M::Mor> {
        (self.0)(m, context, f)
    }
}

impl<M: Model + ?Sized, T: Linearizing<M> + ?Sized> Linearizing<M> for &T {
    fn linearize(&self, m: &M, f: &M::Mor) -> Result<M::Mor> {
        (**self).linearize(m, f)
    }
}

impl<M: Model + ?Sized, T: LinearizingSystem<M> + ?Sized> LinearizingSystem<M> for &T {
    fn linearize_in(&self, m: &M, context: &Shape, f: &M::Mor) -> Result<M::Mor> {
        (**self).linearize_in(m, context, f)
    }
}

impl<M: Model + ?Sized, T: Differential<M> + ?Sized> Differential<M> for &T {
    fn differential(&self, m: &M, f: &M::Mor) -> Result<M::Mor> {
        (**self).differential(m, f)
    }
}

impl<M: Model + ?Sized, T: Differential<M> + Send + ?Sized> Differential<M> for Arc<T> {
    fn differential(&self, m: &M, f: &M::Mor) -> Result<M::Mor> {
        (**self).differential(m, f)
    }
}

impl<M: Model + ?Sized, T: Linearizing<M> + Send + ?Sized> Linearizing<M> for Arc<T> {
    fn linearize(&self, m: &M, f: &M::Mor) -> Result<M::Mor> {
        (**self).linearize(m, f)
    }
}

impl<M: Model + ?Sized, T: LinearizingSystem<M> + Send + ?Sized> LinearizingSystem<M> for Arc<T> {
    fn linearize_in(&self, m: &M, context: &Shape, f: &M::Mor) -> Result<M::Mor> {
        (**self).linearize_in(m, context, f)
    }
}

/// Shared, type-erased combinators, as handed to the law suites.
pub type DynD<M> = Arc<dyn Differential<M> + Send + Sync>;
pub type DynL<M> = Arc<dyn Linearizing<M> + Send + Sync>;
pub type DynSys<M> = Arc<dyn LinearizingSystem<M> + Send + Sync>;

/// Splits `dom f` as `C × A`, checking `C` against the declared context.
pub fn context_split<M: Model + ?Sized>(
    m: &M,
    context: &Shape,
    f: &M::Mor,
    op: &'static str,
) -> Result<Shape> {
    let dom = m.dom(f);
    let (c, a) = dom.split_or_err(op)?;
    if c != context {
        return Err(Error::mismatch(op, c, context));
    }
    Ok(a.clone())
}

/// `L_D[f] = ⟨0, 1⟩D[f]`
pub struct LinearizeViaD<D>(pub D);

impl<M: Model + ?Sized, D: Differential<M>> Linearizing<M> for LinearizeViaD<D> {
    fn linearize(&self, m: &M, f: &M::Mor) -> Result<M::Mor> {
        let a = m.dom(f);
        m.compose(&m.zero_one(&a, &a)?, &self.0.differential(m, f)?)
    }
}

/// `L^C_D[f] = ℓ D[f]` with `ℓ = ℓ_{C,A,C,A}`.
pub struct SystemViaD<D>(pub D);

impl<M: Model + ?Sized, D: Differential<M>> LinearizingSystem<M> for SystemViaD<D> {
    fn linearize_in(&self, m: &M, context: &Shape, f: &M::Mor) -> Result<M::Mor> {
        let a = context_split(m, context, f, "L^C via D")?;
        let lift = m.lift(context, &a, context, &a)?;
        m.compose(&lift, &self.0.differential(m, f)?)
    }
}

/// `D_L[f] = L^A[⊕_A f]`
pub struct DViaSystem<S>(pub S);

impl<M: Model + ?Sized, S: LinearizingSystem<M>> Differential<M> for DViaSystem<S> {
    fn differential(&self, m: &M, f: &M::Mor) -> Result<M::Mor> {
        let a = m.dom(f);
        self.0.linearize_in(m, &a, &m.compose(&m.oplus(&a)?, f)?)
    }
}

/// `L[f] = ⟨0, 1⟩L^⊤[π₁f]`
pub struct TotalViaSystem<S>(pub S);

impl<M: Model + ?Sized, S: LinearizingSystem<M>> Linearizing<M> for TotalViaSystem<S> {
    fn linearize(&self, m: &M, f: &M::Mor) -> Result<M::Mor> {
        let a = m.dom(f);
        let top = Shape::Unit;
        let lifted = m.compose(&m.proj1(&top, &a)?, f)?;
        let lin = self.0.linearize_in(m, &top, &lifted)?;
        m.compose(&m.zero_one(&top, &a)?, &lin)
    }
}

/// `D^C[f] = ⟨1 × π₀, 0 × π₁⟩D[f]`, the differential combinator of the
/// slice over `C`.
pub struct ContextD<D>(pub D);

impl<M: Model, D: Differential<M>> Differential<Slice<M>> for ContextD<D> {
    fn differential(&self, s: &Slice<M>, f: &M::Mor) -> Result<M::Mor> {
        let m = s.base();
        let c = s.context();
        let a = context_split(m, c, f, "D^C")?;
        let aa = a.doubled();
        let first = m.times(&m.identity(c)?, &m.proj0(&a, &a)?)?;
        let second = m.times(&m.zero(c, c)?, &m.proj1(&a, &a)?)?;
        debug_assert_eq!(m.dom(&first), Shape::prod(c.clone(), aa));
        m.compose(&m.pair(&first, &second)?, &self.0.differential(m, f)?)
    }
}

/// `L^C` viewed as a plain linearizing combinator on the slice over `C`.
pub struct AtContext<S>(pub S);

impl<M: Model, S: LinearizingSystem<M>> Linearizing<Slice<M>> for AtContext<S> {
    fn linearize(&self, s: &Slice<M>, f: &M::Mor) -> Result<M::Mor> {
        self.0.linearize_in(s.base(), s.context(), f)
    }
}

/// A total `L` on the base viewed as a system by ignoring the context split.
/// Only used to build broken systems for testing.
pub struct IgnoreContext<L>(pub L);

impl<M: Model + ?Sized, L: Linearizing<M>> LinearizingSystem<M> for IgnoreContext<L> {
    fn linearize_in(&self, m: &M, context: &Shape, f: &M::Mor) -> Result<M::Mor> {
        context_split(m, context, f, "L^C")?;
        self.0.linearize(m, f)
    }
}

/// Splits `dom f` as `C × (A × B)`.
pub fn nested_split<M: Model + ?Sized>(m: &M, f: &M::Mor) -> Result<(Shape, Shape, Shape)> {
    let dom = m.dom(f);
    let (c, ab) = dom.split_or_err("partial linearization")?;
    let (a, b) = ab.split_or_err("partial linearization")?;
    Ok((c.clone(), a.clone(), b.clone()))
}

/// `L^C_0[f] = β L^{C×B}[β⁻¹f]` for `f : C × (A × B) → D`.
pub fn partial_first<M: Model + ?Sized, S: LinearizingSystem<M> + ?Sized>(
    m: &M,
    sys: &S,
    f: &M::Mor,
) -> Result<M::Mor> {
    let (c, a, b) = nested_split(m, f)?;
    let cb = Shape::prod(c.clone(), b.clone());
    let inner = m.compose(&m.beta_inv(&c, &a, &b)?, f)?;
    m.compose(&m.beta(&c, &a, &b)?, &sys.linearize_in(m, &cb, &inner)?)
}

/// `L^C_1[f] = α L^{C×A}[α⁻¹f]` for `f : C × (A × B) → D`.
pub fn partial_second<M: Model + ?Sized, S: LinearizingSystem<M> + ?Sized>(
    m: &M,
    sys: &S,
    f: &M::Mor,
) -> Result<M::Mor> {
    let (c, a, b) = nested_split(m, f)?;
    let ca = Shape::prod(c.clone(), a.clone());
    let inner = m.compose(&m.alpha_inv(&c, &a, &b)?, f)?;
    m.compose(&m.alpha(&c, &a, &b)?, &sys.linearize_in(m, &ca, &inner)?)
}

/// Both partial linearizations `(L^C_0[f], L^C_1[f])`.
pub fn partial_pair<M: Model + ?Sized, S: LinearizingSystem<M> + ?Sized>(
    m: &M,
    sys: &S,
    f: &M::Mor,
) -> Result<(M::Mor, M::Mor)> {
    Ok((partial_first(m, sys, f)?, partial_second(m, sys, f)?))
}

/// `L^C[f] = λ⁻¹(L[λ(f)])`, the system induced by an exponentiable `L`.
pub struct SystemViaExp<L>(pub L);

impl<M: Closed + ?Sized, L: Linearizing<M>> LinearizingSystem<M> for SystemViaExp<L> {
    fn linearize_in(&self, m: &M, context: &Shape, f: &M::Mor) -> Result<M::Mor> {
        context_split(m, context, f, "L^C via curry")?;
        m.uncurry(&self.0.linearize(m, &m.curry(f)?)?)
    }
}

/// `D_L[f] = λ⁻¹(L[λ(⊕_A f)])`
pub struct DViaExp<L>(pub L);

impl<M: Closed + ?Sized, L: Linearizing<M>> Differential<M> for DViaExp<L> {
    fn differential(&self, m: &M, f: &M::Mor) -> Result<M::Mor> {
        let a = m.dom(f);
        let sum = m.compose(&m.oplus(&a)?, f)?;
        m.uncurry(&self.0.linearize(m, &m.curry(&sum)?)?)
    }
}

/// `L₀[f] = τλ⁻¹(L[λ(τf)])` for `f : A × B → C`.
pub fn exp_first<M: Closed + ?Sized, L: Linearizing<M> + ?Sized>(
    m: &M,
    l: &L,
    f: &M::Mor,
) -> Result<M::Mor> {
    let dom = m.dom(f);
    let (a, b) = dom.split_or_err("L₀")?;
    let tf = m.compose(&m.sym(b, a)?, f)?;
    let inner = m.uncurry(&l.linearize(m, &m.curry(&tf)?)?)?;
    m.compose(&m.sym(a, b)?, &inner)
}

/// `L₁[f] = λ⁻¹(L[λ(f)])` for `f : A × B → C`.
pub fn exp_second<M: Closed + ?Sized, L: Linearizing<M> + ?Sized>(
    m: &M,
    l: &L,
    f: &M::Mor,
) -> Result<M::Mor> {
    m.dom(f).split_or_err("L₁")?;
    m.uncurry(&l.linearize(m, &m.curry(f)?)?)
}
