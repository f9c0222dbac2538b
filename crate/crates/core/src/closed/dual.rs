//! Iterated dual numbers. A tower is either a real or `a + ε_t·b` where `a`
//! and `b` are towers mentioning only infinitesimals older than `t`, and
//! `ε_t² = 0`. Every differentiation draws a fresh `t`, so nested
//! derivatives never confuse their perturbations.

use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

static NEXT_TAG: AtomicU64 = AtomicU64::new(1);

/// A tag larger than every tag handed out before.
pub fn fresh_tag() -> u64 {
    NEXT_TAG.fetch_add(1, Ordering::Relaxed)
}

#[derive(Clone, PartialEq)]
pub enum DualTower {
    Real(f64),
    Eps(u64, Box<DualTower>, Box<DualTower>),
}

use DualTower::{Eps, Real};

impl DualTower {
    pub fn real(x: f64) -> DualTower {
        Real(x)
    }

    /// `ε_t` itself.
    pub fn infinitesimal(t: u64) -> DualTower {
        Eps(t, Box::new(Real(0.0)), Box::new(Real(1.0)))
    }

    /// The standard part.
    pub fn value(&self) -> f64 {
        match self {
            Real(x) => *x,
            Eps(_, a, _) => a.value(),
        }
    }

    /// Number of nested infinitesimals; `2^level` reals are stored.
    pub fn level(&self) -> usize {
        match self {
            Real(_) => 0,
            Eps(_, a, b) => 1 + a.level().max(b.level()),
        }
    }

    fn top(&self) -> u64 {
        match self {
            Real(_) => 0,
            Eps(t, _, _) => *t,
        }
    }

    /// `(a, b)` with `self = a + ε_t·b`, for `t` at least the top tag.
    fn split(&self, t: u64) -> (DualTower, DualTower) {
        match self {
            Eps(s, a, b) if *s == t => ((**a).clone(), (**b).clone()),
            _ => (self.clone(), Real(0.0)),
        }
    }

    fn join(t: u64, a: DualTower, b: DualTower) -> DualTower {
        Eps(t, Box::new(a), Box::new(b))
    }

    pub fn add(&self, other: &DualTower) -> DualTower {
        match (self, other) {
            (Real(x), Real(y)) => Real(x + y),
            _ => {
                let t = self.top().max(other.top());
                let ((a, b), (c, d)) = (self.split(t), other.split(t));
                DualTower::join(t, a.add(&c), b.add(&d))
            }
        }
    }

    pub fn mul(&self, other: &DualTower) -> DualTower {
        match (self, other) {
            (Real(x), Real(y)) => Real(x * y),
            _ => {
                let t = self.top().max(other.top());
                let ((a, b), (c, d)) = (self.split(t), other.split(t));
                let tail = a.mul(&d).add(&b.mul(&c));
                DualTower::join(t, a.mul(&c), tail)
            }
        }
    }

    pub fn neg(&self) -> DualTower {
        match self {
            Real(x) => Real(-x),
            Eps(t, a, b) => DualTower::join(*t, a.neg(), b.neg()),
        }
    }

    pub fn powi(&self, k: u32) -> DualTower {
        (0..k).fold(Real(1.0), |acc, _| acc.mul(self))
    }

    pub fn sin(&self) -> DualTower {
        match self {
            Real(x) => Real(x.sin()),
            Eps(t, a, b) => DualTower::join(*t, a.sin(), a.cos().mul(b)),
        }
    }

    pub fn cos(&self) -> DualTower {
        match self {
            Real(x) => Real(x.cos()),
            Eps(t, a, b) => DualTower::join(*t, a.cos(), a.sin().neg().mul(b)),
        }
    }

    pub fn exp(&self) -> DualTower {
        match self {
            Real(x) => Real(x.exp()),
            Eps(t, a, b) => {
                let ea = a.exp();
                let tail = ea.mul(b);
                DualTower::join(*t, ea, tail)
            }
        }
    }

    /// The coefficient of `ε_t`.
    pub fn extract(&self, t: u64) -> DualTower {
        match self {
            Real(_) => Real(0.0),
            Eps(s, _, b) if *s == t => (**b).clone(),
            Eps(s, _, _) if *s < t => Real(0.0),
            Eps(s, a, b) => match b.extract(t) {
                Real(0.0) => a.extract(t),
                tail => DualTower::join(*s, a.extract(t), tail),
            },
        }
    }
}

impl fmt::Debug for DualTower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Real(x) => write!(f, "{x}"),
            Eps(t, a, b) => write!(f, "({a:?} + e{t}*{b:?})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cube_plus(x: &DualTower) -> DualTower {
        x.powi(3).add(x)
    }

    #[test]
    fn first_derivative() {
        let t = fresh_tag();
        let x = Real(2.0).add(&DualTower::infinitesimal(t));
        assert_eq!(cube_plus(&x).extract(t).value(), 13.0);
    }

    #[test]
    fn nested_tags_give_second_derivative() {
        // d²/dx² (x³ + x) = 6x
        let (s, t) = (fresh_tag(), fresh_tag());
        let x = Real(2.0)
            .add(&DualTower::infinitesimal(s))
            .add(&DualTower::infinitesimal(t));
        let y = cube_plus(&x);
        assert_eq!(y.level(), 2);
        assert_eq!(y.extract(t).extract(s).value(), 12.0);
        assert_eq!(y.extract(s).extract(t).value(), 12.0);
    }

    #[test]
    fn transcendental_rules() {
        let t = fresh_tag();
        let x = Real(0.3).add(&DualTower::infinitesimal(t));
        assert!((x.sin().extract(t).value() - 0.3f64.cos()).abs() < 1e-15);
        assert!((x.cos().extract(t).value() + 0.3f64.sin()).abs() < 1e-15);
        assert!((x.exp().extract(t).value() - 0.3f64.exp()).abs() < 1e-15);
    }

    #[test]
    fn absent_tag_extracts_to_zero() {
        let (s, t) = (fresh_tag(), fresh_tag());
        let x = Real(1.0).add(&DualTower::infinitesimal(s));
        assert_eq!(x.extract(t), Real(0.0));
        let y = Real(1.0).add(&DualTower::infinitesimal(t));
        assert_eq!(y.extract(s), Real(0.0));
    }
}
