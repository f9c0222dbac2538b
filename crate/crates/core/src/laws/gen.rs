//! Random instance generation for law checks.

use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::category::{Model, Slice, Structure};
use crate::error::{Error, Result};
use crate::shape::Shape;

pub type Rng = ChaCha8Rng;

/// What a generated map must satisfy, relative to its argument block.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    Any,
    /// `0f = 0`
    Reduced,
    /// `0f = f`
    Constant,
    /// reduced and semi-additive
    Additive,
    /// `(g + h)f = gf + hf`
    SemiAdditive,
}

/// A generated map's obligation, rechecked when shrinking.
#[derive(Clone, Debug, PartialEq)]
pub struct Constraint {
    pub context: Option<Shape>,
    pub kind: Kind,
}

impl Constraint {
    pub fn any() -> Self {
        Constraint {
            context: None,
            kind: Kind::Any,
        }
    }

    pub fn holds<M: Model + ?Sized>(&self, m: &M, f: &M::Mor) -> Result<bool> {
        match (&self.context, self.kind) {
            (_, Kind::Any) => Ok(true),
            (None, Kind::Reduced) => m.is_reduced(f),
            (None, Kind::Constant) => m.is_constant(f),
            (None, Kind::Additive) => m.is_additive(f),
            (None, Kind::SemiAdditive) => m.is_semi_additive(f),
            (Some(_), Kind::Constant) => m.is_constant_in_context(f),
            (Some(_), Kind::Additive | Kind::SemiAdditive) => m.is_additive_in_context(f),
            (Some(c), Kind::Reduced) => {
                let dom = m.dom(f);
                let (_, a) = dom.split_or_err("reduced in context")?;
                let p0_0 = m.pair(&m.proj0(c, a)?, &m.zero(&dom, a)?)?;
                m.equal(&m.compose(&p0_0, f)?, &m.zero(&dom, &m.cod(f))?)
            }
        }
    }
}

/// A model that can produce random shapes and maps for law checks.
pub trait Generate: Model {
    /// A shape with at most `max_leaves` leaves and nesting depth at most 3.
    fn gen_shape(&self, rng: &mut Rng, max_leaves: usize) -> Shape;

    /// A map `C × A → B` (or `A → B` when `context` is `None`) whose behaviour
    /// in the `A` block is of the requested kind.
    fn gen_mor(
        &self,
        rng: &mut Rng,
        context: Option<&Shape>,
        a: &Shape,
        b: &Shape,
        kind: Kind,
    ) -> Result<Self::Mor>;

    /// Strictly smaller candidates, for counterexample minimization.
    fn shrink(&self, _f: &Self::Mor) -> Vec<Self::Mor> {
        Vec::new()
    }
}

impl<M: Generate> Generate for Slice<M> {
    fn gen_shape(&self, rng: &mut Rng, max_leaves: usize) -> Shape {
        self.base().gen_shape(rng, max_leaves)
    }

    fn gen_mor(
        &self,
        rng: &mut Rng,
        context: Option<&Shape>,
        a: &Shape,
        b: &Shape,
        kind: Kind,
    ) -> Result<Self::Mor> {
        if context.is_some() {
            return Err(Error::Invalid("nested slice contexts are not generated".into()));
        }
        self.base().gen_mor(rng, Some(self.context()), a, b, kind)
    }

    fn shrink(&self, f: &Self::Mor) -> Vec<Self::Mor> {
        self.base().shrink(f)
    }
}

/// Random first-order shape over ground leaves, used by the first-order
/// models: at most `max_leaves` ground leaves, depth at most 3, `1` allowed.
pub fn first_order_shape(rng: &mut Rng, max_leaves: usize) -> Shape {
    let leaves = rng.random_range(0..=max_leaves.min(3));
    tree_with(rng, leaves, 3, &|_| Shape::Ground)
}

/// Random tree with exactly `leaves` leaves produced by `leaf`, nesting at
/// most `depth`. Occasionally pads with `1`.
pub fn tree_with(
    rng: &mut Rng,
    leaves: usize,
    depth: usize,
    leaf: &dyn Fn(&mut Rng) -> Shape,
) -> Shape {
    match leaves {
        0 => Shape::Unit,
        1 => {
            let l = leaf(rng);
            if depth > 0 && rng.random_bool(0.1) {
                if rng.random_bool(0.5) {
                    Shape::prod(l, Shape::Unit)
                } else {
                    Shape::prod(Shape::Unit, l)
                }
            } else {
                l
            }
        }
        n => {
            if depth == 0 {
                // cannot nest further; fall back to a right comb
                return (1..n).fold(leaf(rng), |acc, _| Shape::prod(acc, leaf(rng)));
            }
            let left = rng.random_range(1..n);
            let l = tree_with(rng, left, depth - 1, leaf);
            let r = tree_with(rng, n - left, depth - 1, leaf);
            Shape::prod(l, r)
        }
    }
}

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0100_0000_01b3;

pub fn fnv1a(s: &str) -> u64 {
    s.bytes()
        .fold(FNV_OFFSET, |h, b| (h ^ u64::from(b)).wrapping_mul(FNV_PRIME))
}

pub fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// The RNG for one case, a function of `(seed, law, case)` only.
pub fn case_rng(seed: u64, law: &str, case: usize) -> Rng {
    let mixed = splitmix64(seed ^ splitmix64(fnv1a(law) ^ splitmix64(case as u64)));
    Rng::seed_from_u64(mixed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn case_streams_are_deterministic_and_distinct() {
        let a: u64 = case_rng(7, "CD.1", 3).random();
        let b: u64 = case_rng(7, "CD.1", 3).random();
        let c: u64 = case_rng(7, "CD.1", 4).random();
        let d: u64 = case_rng(7, "CD.2", 3).random();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_ne!(a, d);
    }

    #[test]
    fn shapes_respect_budget() {
        let mut rng = Rng::seed_from_u64(1);
        for _ in 0..500 {
            let s = first_order_shape(&mut rng, 3);
            assert!(s.arity().unwrap() <= 3);
            assert!(s.depth() <= 3, "{s}");
        }
    }
}
