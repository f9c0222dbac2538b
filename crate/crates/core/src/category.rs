//! The Cartesian left additive interface every model implements, the
//! structural maps built generically from it, and the simple slice
//! construction.
//!
//! Composition is diagrammatic throughout: `compose(f, g)` runs `f` first.

use std::fmt;

use crate::error::{Error, Result};
use crate::shape::Shape;

/// How a model decides equality of morphisms.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum EqContract {
    /// Canonical-form comparison; a total decision procedure.
    Exact,
    /// Seeded comparison at sample points with a combined absolute/relative tolerance.
    Sampled { tolerance: f64, points: usize },
}

impl fmt::Display for EqContract {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EqContract::Exact => f.write_str("exact"),
            EqContract::Sampled { tolerance, points } => {
                write!(f, "sampled:{tolerance:e},{points}")
            }
        }
    }
}

/// A Cartesian left additive category.
///
/// Hom-sets are commutative monoids under [`Model::add`] / [`Model::zero`],
/// precomposition preserves them, and projections are additive. None of this
/// is assumed by the law suite; it is checked.
pub trait Model: Sync + Send {
    type Mor: Clone + fmt::Display + Send + Sync;

    /// Short identifier used in reports (`poly`, `smooth`, ...).
    fn name(&self) -> &'static str;

    fn dom(&self, f: &Self::Mor) -> Shape;
    fn cod(&self, f: &Self::Mor) -> Shape;

    fn identity(&self, a: &Shape) -> Result<Self::Mor>;
    fn compose(&self, f: &Self::Mor, g: &Self::Mor) -> Result<Self::Mor>;
    fn pair(&self, f: &Self::Mor, g: &Self::Mor) -> Result<Self::Mor>;
    /// `π₀ : A × B → A`
    fn proj0(&self, a: &Shape, b: &Shape) -> Result<Self::Mor>;
    /// `π₁ : A × B → B`
    fn proj1(&self, a: &Shape, b: &Shape) -> Result<Self::Mor>;
    fn add(&self, f: &Self::Mor, g: &Self::Mor) -> Result<Self::Mor>;
    fn zero(&self, a: &Shape, b: &Shape) -> Result<Self::Mor>;

    /// Equality under this model's [`EqContract`].
    fn equal(&self, f: &Self::Mor, g: &Self::Mor) -> Result<bool>;
    fn contract(&self) -> EqContract;
}

pub(crate) fn check_same_hom<M: Model + ?Sized>(
    m: &M,
    op: &'static str,
    f: &M::Mor,
    g: &M::Mor,
) -> Result<()> {
    let (df, dg) = (m.dom(f), m.dom(g));
    if df != dg {
        return Err(Error::mismatch(op, &df, &dg));
    }
    let (cf, cg) = (m.cod(f), m.cod(g));
    if cf != cg {
        return Err(Error::mismatch(op, &cf, &cg));
    }
    Ok(())
}

pub(crate) fn check_composable<M: Model + ?Sized>(m: &M, f: &M::Mor, g: &M::Mor) -> Result<()> {
    let (cf, dg) = (m.cod(f), m.dom(g));
    if cf != dg {
        return Err(Error::mismatch("compose", &cf, &dg));
    }
    Ok(())
}

/// Structural maps and predicates derived from the [`Model`] primitives.
pub trait Structure: Model {
    /// Left-to-right composite of a nonempty chain.
    fn chain(&self, maps: &[&Self::Mor]) -> Result<Self::Mor> {
        let (first, rest) = maps
            .split_first()
            .ok_or_else(|| Error::Invalid("empty composite".into()))?;
        rest.iter()
            .try_fold((*first).clone(), |acc, g| self.compose(&acc, g))
    }

    fn sum(&self, f: &Self::Mor, g: &Self::Mor) -> Result<Self::Mor> {
        self.add(f, g)
    }

    /// `f × g = ⟨π₀f, π₁g⟩`
    fn times(&self, f: &Self::Mor, g: &Self::Mor) -> Result<Self::Mor> {
        let (a, b) = (self.dom(f), self.dom(g));
        let left = self.compose(&self.proj0(&a, &b)?, f)?;
        let right = self.compose(&self.proj1(&a, &b)?, g)?;
        self.pair(&left, &right)
    }

    /// `⟨0, 1⟩ : A → B × A`
    fn zero_one(&self, b: &Shape, a: &Shape) -> Result<Self::Mor> {
        self.pair(&self.zero(a, b)?, &self.identity(a)?)
    }

    /// `⟨1, 0⟩ : A → A × B`
    fn one_zero(&self, a: &Shape, b: &Shape) -> Result<Self::Mor> {
        self.pair(&self.identity(a)?, &self.zero(a, b)?)
    }

    /// `τ = ⟨π₁, π₀⟩ : A × B → B × A`
    fn sym(&self, a: &Shape, b: &Shape) -> Result<Self::Mor> {
        self.pair(&self.proj1(a, b)?, &self.proj0(a, b)?)
    }

    /// `c = ⟨π₀ × π₀, π₁ × π₁⟩ : (A × B) × (C × D) → (A × C) × (B × D)`
    fn interchange(&self, a: &Shape, b: &Shape, c: &Shape, d: &Shape) -> Result<Self::Mor> {
        let first = self.times(&self.proj0(a, b)?, &self.proj0(c, d)?)?;
        let second = self.times(&self.proj1(a, b)?, &self.proj1(c, d)?)?;
        self.pair(&first, &second)
    }

    /// `ℓ = ⟨1, 0⟩ × ⟨0, 1⟩ : A × D → (A × B) × (C × D)`
    fn lift(&self, a: &Shape, b: &Shape, c: &Shape, d: &Shape) -> Result<Self::Mor> {
        self.times(&self.one_zero(a, b)?, &self.zero_one(c, d)?)
    }

    /// `α = ⟨1 × π₀, π₁π₁⟩ : C × (A × B) → (C × A) × B`
    fn alpha(&self, c: &Shape, a: &Shape, b: &Shape) -> Result<Self::Mor> {
        let ab = Shape::prod(a.clone(), b.clone());
        let first = self.times(&self.identity(c)?, &self.proj0(a, b)?)?;
        let second = self.compose(&self.proj1(c, &ab)?, &self.proj1(a, b)?)?;
        self.pair(&first, &second)
    }

    /// `α⁻¹ : (C × A) × B → C × (A × B)`
    fn alpha_inv(&self, c: &Shape, a: &Shape, b: &Shape) -> Result<Self::Mor> {
        let ca = Shape::prod(c.clone(), a.clone());
        let p0 = self.proj0(&ca, b)?;
        let to_c = self.compose(&p0, &self.proj0(c, a)?)?;
        let to_a = self.compose(&p0, &self.proj1(c, a)?)?;
        let to_b = self.proj1(&ca, b)?;
        self.pair(&to_c, &self.pair(&to_a, &to_b)?)
    }

    /// `β = ⟨1 × π₁, π₁π₀⟩ : C × (A × B) → (C × B) × A`
    fn beta(&self, c: &Shape, a: &Shape, b: &Shape) -> Result<Self::Mor> {
        let ab = Shape::prod(a.clone(), b.clone());
        let first = self.times(&self.identity(c)?, &self.proj1(a, b)?)?;
        let second = self.compose(&self.proj1(c, &ab)?, &self.proj0(a, b)?)?;
        self.pair(&first, &second)
    }

    /// `β⁻¹ : (C × B) × A → C × (A × B)`
    fn beta_inv(&self, c: &Shape, a: &Shape, b: &Shape) -> Result<Self::Mor> {
        let cb = Shape::prod(c.clone(), b.clone());
        let p0 = self.proj0(&cb, a)?;
        let to_c = self.compose(&p0, &self.proj0(c, b)?)?;
        let to_b = self.compose(&p0, &self.proj1(c, b)?)?;
        let to_a = self.proj1(&cb, a)?;
        self.pair(&to_c, &self.pair(&to_a, &to_b)?)
    }

    /// `⊕_A = π₀ + π₁ : A × A → A`
    fn oplus(&self, a: &Shape) -> Result<Self::Mor> {
        self.add(&self.proj0(a, a)?, &self.proj1(a, a)?)
    }

    /// Substitution functor `h*(f) = (h × 1)f` for `h : C' → C`, `f : C × A → B`.
    fn substitute(&self, h: &Self::Mor, f: &Self::Mor) -> Result<Self::Mor> {
        let dom = self.dom(f);
        let (ctx, a) = dom.split_or_err("substitute")?;
        let ch = self.cod(h);
        if &ch != ctx {
            return Err(Error::mismatch("substitute", &ch, ctx));
        }
        let hx1 = self.times(h, &self.identity(a)?)?;
        self.compose(&hx1, f)
    }

    /// `0f = f` with `0 : A → A`.
    fn is_constant(&self, f: &Self::Mor) -> Result<bool> {
        let a = self.dom(f);
        self.equal(&self.compose(&self.zero(&a, &a)?, f)?, f)
    }

    /// `0f = 0`.
    fn is_reduced(&self, f: &Self::Mor) -> Result<bool> {
        let (a, b) = (self.dom(f), self.cod(f));
        self.equal(&self.compose(&self.zero(&a, &a)?, f)?, &self.zero(&a, &b)?)
    }

    /// `⊕f = π₀f + π₁f`; equivalent to `(g + h)f = gf + hf` for all `g, h`.
    fn is_semi_additive(&self, f: &Self::Mor) -> Result<bool> {
        let a = self.dom(f);
        let lhs = self.compose(&self.oplus(&a)?, f)?;
        let rhs = self.add(
            &self.compose(&self.proj0(&a, &a)?, f)?,
            &self.compose(&self.proj1(&a, &a)?, f)?,
        )?;
        self.equal(&lhs, &rhs)
    }

    fn is_additive(&self, f: &Self::Mor) -> Result<bool> {
        Ok(self.is_reduced(f)? && self.is_semi_additive(f)?)
    }

    /// `⟨π₀, 0⟩f = f` for `f : C × A → B`.
    fn is_constant_in_context(&self, f: &Self::Mor) -> Result<bool> {
        let dom = self.dom(f);
        let (c, a) = dom.split_or_err("is_constant_in_context")?;
        let p0_0 = self.pair(&self.proj0(c, a)?, &self.zero(&dom, a)?)?;
        self.equal(&self.compose(&p0_0, f)?, f)
    }

    /// `⟨π₀, 0⟩f = 0` and `(1 × ⊕)f = (1 × π₀)f + (1 × π₁)f`.
    fn is_additive_in_context(&self, f: &Self::Mor) -> Result<bool> {
        let dom = self.dom(f);
        let (c, a) = dom.split_or_err("is_additive_in_context")?;
        let b = self.cod(f);
        let p0_0 = self.pair(&self.proj0(c, a)?, &self.zero(&dom, a)?)?;
        if !self.equal(&self.compose(&p0_0, f)?, &self.zero(&dom, &b)?)? {
            return Ok(false);
        }
        let one = self.identity(c)?;
        let lhs = self.compose(&self.times(&one, &self.oplus(a)?)?, f)?;
        let rhs = self.add(
            &self.compose(&self.times(&one, &self.proj0(a, a)?)?, f)?,
            &self.compose(&self.times(&one, &self.proj1(a, a)?)?, f)?,
        )?;
        self.equal(&lhs, &rhs)
    }
}

impl<M: Model + ?Sized> Structure for M {}

/// The simple slice over a context `C`: maps `A → B` are base maps
/// `C × A → B`, identities are `π₁`, and the composite of `f` and `g` is
/// `⟨π₀, f⟩g`. Sums, zeros and equality are the base ones.
#[derive(Clone, Debug)]
pub struct Slice<M> {
    base: M,
    context: Shape,
}

impl<M: Model> Slice<M> {
    pub fn new(base: M, context: Shape) -> Self {
        Slice { base, context }
    }

    pub fn base(&self) -> &M {
        &self.base
    }

    pub fn context(&self) -> &Shape {
        &self.context
    }

    fn inner_dom(&self, f: &M::Mor, op: &'static str) -> Result<Shape> {
        let dom = self.base.dom(f);
        let (c, a) = dom.split_or_err(op)?;
        if c != &self.context {
            return Err(Error::mismatch(op, c, &self.context));
        }
        Ok(a.clone())
    }

    fn lifted(&self, a: &Shape) -> Shape {
        Shape::prod(self.context.clone(), a.clone())
    }

    /// `𝕏[⊤] ≅ 𝕏`, forward direction: `f ↦ π₁f`.
    pub fn from_base(&self, f: &M::Mor) -> Result<M::Mor> {
        let a = self.base.dom(f);
        self.base.compose(&self.base.proj1(&self.context, &a)?, f)
    }
}

impl<M: Model> Slice<M> {
    /// `𝕏[⊤] ≅ 𝕏`, backward direction: `f ↦ ⟨0, 1⟩f`. Only an inverse of
    /// [`Slice::from_base`] when the context is `⊤`.
    pub fn to_base(&self, f: &M::Mor) -> Result<M::Mor> {
        let a = self.inner_dom(f, "to_base")?;
        self.base.compose(&self.base.zero_one(&self.context, &a)?, f)
    }
}

impl<M: Model> Model for Slice<M> {
    type Mor = M::Mor;

    fn name(&self) -> &'static str {
        self.base.name()
    }

    fn dom(&self, f: &M::Mor) -> Shape {
        let dom = self.base.dom(f);
        match dom.split() {
            Some((_, a)) => a.clone(),
            None => dom,
        }
    }

    fn cod(&self, f: &M::Mor) -> Shape {
        self.base.cod(f)
    }

    fn identity(&self, a: &Shape) -> Result<M::Mor> {
        self.base.proj1(&self.context, a)
    }

    fn compose(&self, f: &M::Mor, g: &M::Mor) -> Result<M::Mor> {
        let a = self.inner_dom(f, "slice compose")?;
        let b = self.inner_dom(g, "slice compose")?;
        let cf = self.base.cod(f);
        if cf != b {
            return Err(Error::mismatch("slice compose", &cf, &b));
        }
        let head = self.base.pair(&self.base.proj0(&self.context, &a)?, f)?;
        self.base.compose(&head, g)
    }

    fn pair(&self, f: &M::Mor, g: &M::Mor) -> Result<M::Mor> {
        self.inner_dom(f, "slice pair")?;
        self.base.pair(f, g)
    }

    fn proj0(&self, a: &Shape, b: &Shape) -> Result<M::Mor> {
        let ab = Shape::prod(a.clone(), b.clone());
        self.base
            .compose(&self.base.proj1(&self.context, &ab)?, &self.base.proj0(a, b)?)
    }

    fn proj1(&self, a: &Shape, b: &Shape) -> Result<M::Mor> {
        let ab = Shape::prod(a.clone(), b.clone());
        self.base
            .compose(&self.base.proj1(&self.context, &ab)?, &self.base.proj1(a, b)?)
    }

    fn add(&self, f: &M::Mor, g: &M::Mor) -> Result<M::Mor> {
        self.base.add(f, g)
    }

    fn zero(&self, a: &Shape, b: &Shape) -> Result<M::Mor> {
        self.base.zero(&self.lifted(a), b)
    }

    fn equal(&self, f: &M::Mor, g: &M::Mor) -> Result<bool> {
        self.base.equal(f, g)
    }

    fn contract(&self) -> EqContract {
        self.base.contract()
    }
}

/// Cartesian closed structure: currying `λ`, uncurrying `λ⁻¹` and evaluation.
pub trait Closed: Model {
    /// `λ(f) : A → [C, B]` for `f : C × A → B`.
    fn curry(&self, f: &Self::Mor) -> Result<Self::Mor>;
    /// `λ⁻¹(g) = (1 × g)ε : C × A → B` for `g : A → [C, B]`.
    fn uncurry(&self, g: &Self::Mor) -> Result<Self::Mor>;
    /// `ε : C × [C, A] → A`
    fn eval_map(&self, c: &Shape, a: &Shape) -> Result<Self::Mor>;
}

fn hom_parts(s: &Shape, op: &'static str) -> Result<(Shape, Shape)> {
    match s {
        Shape::Hom(c, a) => Ok(((**c).clone(), (**a).clone())),
        other => Err(Error::Invalid(format!(
            "{op}: expected a function type, found {other}"
        ))),
    }
}

/// The internal-hom monad, functorial action and the isomorphisms used in
/// the closed setting, all built from curry and evaluation.
pub trait ClosedStructure: Closed + Structure {
    /// `η = λ(π₁) : A → [C, A]`
    fn eta(&self, c: &Shape, a: &Shape) -> Result<Self::Mor> {
        self.curry(&self.proj1(c, a)?)
    }

    /// `μ = λ(⟨π₀, ε⟩ε) : [C, [C, A]] → [C, A]`
    fn mu(&self, c: &Shape, a: &Shape) -> Result<Self::Mor> {
        let ca = Shape::hom(c.clone(), a.clone());
        let cca = Shape::hom(c.clone(), ca.clone());
        let head = self.pair(&self.proj0(c, &cca)?, &self.eval_map(c, &ca)?)?;
        self.curry(&self.compose(&head, &self.eval_map(c, a)?)?)
    }

    /// `[f, g] = λ((f × 1)εg) : [D, A] → [C, B]` for `f : C → D`, `g : A → B`.
    fn hom_map(&self, f: &Self::Mor, g: &Self::Mor) -> Result<Self::Mor> {
        let d = self.cod(f);
        let a = self.dom(g);
        let da = Shape::hom(d.clone(), a.clone());
        let fx1 = self.times(f, &self.identity(&da)?)?;
        self.curry(&self.chain(&[&fx1, &self.eval_map(&d, &a)?, g])?)
    }

    /// `θ = λ(⟨(1 × π₀)ε, (1 × π₁)ε⟩) : [C, A] × [C, B] → [C, A × B]`
    fn theta(&self, c: &Shape, a: &Shape, b: &Shape) -> Result<Self::Mor> {
        let (ca, cb) = (Shape::hom(c.clone(), a.clone()), Shape::hom(c.clone(), b.clone()));
        let one = self.identity(c)?;
        let left = self.compose(&self.times(&one, &self.proj0(&ca, &cb)?)?, &self.eval_map(c, a)?)?;
        let right = self.compose(&self.times(&one, &self.proj1(&ca, &cb)?)?, &self.eval_map(c, b)?)?;
        self.curry(&self.pair(&left, &right)?)
    }

    /// `θ⁻¹ = ⟨[1, π₀], [1, π₁]⟩ : [C, A × B] → [C, A] × [C, B]`
    fn theta_inv(&self, c: &Shape, a: &Shape, b: &Shape) -> Result<Self::Mor> {
        let one = self.identity(c)?;
        self.pair(
            &self.hom_map(&one, &self.proj0(a, b)?)?,
            &self.hom_map(&one, &self.proj1(a, b)?)?,
        )
    }

    /// `φ = λ(α⁻¹(1 × ε)ε) : [A, [C, B]] → [C × A, B]`
    fn phi(&self, a: &Shape, c: &Shape, b: &Shape) -> Result<Self::Mor> {
        let cb = Shape::hom(c.clone(), b.clone());
        let acb = Shape::hom(a.clone(), cb.clone());
        let ev_inner = self.times(&self.identity(c)?, &self.eval_map(a, &cb)?)?;
        self.curry(&self.chain(&[&self.alpha_inv(c, a, &acb)?, &ev_inner, &self.eval_map(c, b)?])?)
    }

    /// `φ⁻¹ = λ(λ(αε)) : [C × A, B] → [A, [C, B]]`
    fn phi_inv(&self, a: &Shape, c: &Shape, b: &Shape) -> Result<Self::Mor> {
        let ca = Shape::prod(c.clone(), a.clone());
        let cab = Shape::hom(ca.clone(), b.clone());
        let inner = self.compose(&self.alpha(c, a, &cab)?, &self.eval_map(&ca, b)?)?;
        self.curry(&self.curry(&inner)?)
    }

    /// Splits `[C, A]` into `(C, A)`.
    fn hom_shape_parts(&self, s: &Shape) -> Result<(Shape, Shape)> {
        hom_parts(s, "hom_shape_parts")
    }
}

impl<M: Closed + ?Sized> ClosedStructure for M {}
