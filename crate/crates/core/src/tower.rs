//! Truncated D-sequences over the polynomial model. A tower of depth `k`
//! holds `f₀, …, f_k` with `fₙ : Pⁿ(A) → B` and `P(X) = X × X`; the
//! differential shifts left and the linearization rebuilds every entry from
//! `⟨0, 1⟩f₁`.
//!
//! Only canonical towers (`fₙ₊₁ = D[fₙ]`) are constructed, so the Cartesian
//! left additive operations act on `f₀` and rebuild the tail.

use std::fmt;

use crate::category::{EqContract, Model, Structure};
use crate::combinator::{Differential, Linearizing, LinearizingSystem, SystemViaD};
use crate::error::{Error, Result};
use crate::laws::runner::{build, check_all, Law, Verdict};
use crate::laws::{Generate, Kind, Rng};
use crate::poly::{PolyMap, PolyModel};
use crate::shape::Shape;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tower {
    entries: Vec<PolyMap>,
}

impl Tower {
    pub fn depth(&self) -> usize {
        self.entries.len() - 1
    }

    pub fn entries(&self) -> &[PolyMap] {
        &self.entries
    }

    pub fn base(&self) -> &PolyMap {
        &self.entries[0]
    }

    pub fn dom(&self) -> &Shape {
        self.entries[0].dom()
    }

    pub fn cod(&self) -> &Shape {
        self.entries[0].cod()
    }

    /// The first `depth + 1` entries.
    pub fn truncate(&self, depth: usize) -> Tower {
        Tower {
            entries: self.entries[..=depth.min(self.depth())].to_vec(),
        }
    }
}

impl fmt::Display for Tower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "tower[{}]({})", self.depth(), self.entries[0])
    }
}

/// `(f, D[f], …, Dᵏ[f])`
pub fn tower_of(f: &PolyMap, depth: usize) -> Result<Tower> {
    let poly = PolyModel::default();
    let mut entries = vec![f.clone()];
    for _ in 0..depth {
        let next = poly.differential(entries.last().expect("nonempty"))?;
        entries.push(next);
    }
    Ok(Tower { entries })
}

/// `D[(f₀, f₁, …)] = (f₁, f₂, …)`
pub fn shift(t: &Tower) -> Result<Tower> {
    if t.depth() == 0 {
        return Err(Error::DepthUnderflow);
    }
    Ok(Tower {
        entries: t.entries[1..].to_vec(),
    })
}

/// `L[(f₀, f₁, …)] = (g, π₁g, π₁π₁g, …)` with `g = ⟨0, 1⟩f₁`. Every entry is
/// determined by `f₁`, so the depth is kept.
pub fn tower_linearize(t: &Tower) -> Result<Tower> {
    if t.depth() == 0 {
        return Err(Error::DepthUnderflow);
    }
    let poly = PolyModel::default();
    let a = t.dom().clone();
    let mut g = poly.compose(&poly.zero_one(&a, &a)?, &t.entries[1])?;
    let mut x = a;
    let mut entries = vec![g.clone()];
    for _ in 0..t.depth() {
        g = poly.compose(&poly.proj1(&x, &x)?, &g)?;
        x = x.doubled();
        entries.push(g.clone());
    }
    Ok(Tower { entries })
}

/// Entrywise equality; towers of different depth are an error.
pub fn tower_eq(s: &Tower, t: &Tower) -> Result<bool> {
    if s.depth() != t.depth() {
        return Err(Error::DepthMismatch(s.depth(), t.depth()));
    }
    prefix_eq(s, t)
}

fn prefix_eq(s: &Tower, t: &Tower) -> Result<bool> {
    let poly = PolyModel::default();
    for (a, b) in s.entries.iter().zip(&t.entries) {
        if !poly.poly_eq(a, b)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Canonical towers over the polynomial model. Operations that combine
/// towers truncate to the smaller depth, and equality compares the common
/// prefix, since `D` consumes one level.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TowerModel {
    pub depth: usize,
    pub poly: PolyModel,
}

impl Default for TowerModel {
    fn default() -> Self {
        TowerModel {
            depth: 3,
            poly: PolyModel::default(),
        }
    }
}

impl TowerModel {
    pub fn lift(&self, f: &PolyMap) -> Result<Tower> {
        tower_of(f, self.depth)
    }

    fn combine(
        &self,
        s: &Tower,
        t: &Tower,
        op: impl Fn(&PolyMap, &PolyMap) -> Result<PolyMap>,
    ) -> Result<Tower> {
        tower_of(&op(s.base(), t.base())?, s.depth().min(t.depth()))
    }
}

impl Model for TowerModel {
    type Mor = Tower;

    fn name(&self) -> &'static str {
        "tower"
    }

    fn dom(&self, f: &Tower) -> Shape {
        f.dom().clone()
    }

    fn cod(&self, f: &Tower) -> Shape {
        f.cod().clone()
    }

    fn identity(&self, a: &Shape) -> Result<Tower> {
        self.lift(&self.poly.identity(a)?)
    }

    fn compose(&self, f: &Tower, g: &Tower) -> Result<Tower> {
        self.combine(f, g, |a, b| self.poly.compose(a, b))
    }

    fn pair(&self, f: &Tower, g: &Tower) -> Result<Tower> {
        self.combine(f, g, |a, b| self.poly.pair(a, b))
    }

    fn proj0(&self, a: &Shape, b: &Shape) -> Result<Tower> {
        self.lift(&self.poly.proj0(a, b)?)
    }

    fn proj1(&self, a: &Shape, b: &Shape) -> Result<Tower> {
        self.lift(&self.poly.proj1(a, b)?)
    }

    fn add(&self, f: &Tower, g: &Tower) -> Result<Tower> {
        self.combine(f, g, |a, b| self.poly.add(a, b))
    }

    fn zero(&self, a: &Shape, b: &Shape) -> Result<Tower> {
        self.lift(&self.poly.zero(a, b)?)
    }

    fn equal(&self, f: &Tower, g: &Tower) -> Result<bool> {
        prefix_eq(f, g)
    }

    fn contract(&self) -> EqContract {
        EqContract::Exact
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct TowerD;

impl Differential<TowerModel> for TowerD {
    fn differential(&self, _: &TowerModel, t: &Tower) -> Result<Tower> {
        shift(t)
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct TowerL;

impl Linearizing<TowerModel> for TowerL {
    fn linearize(&self, _: &TowerModel, t: &Tower) -> Result<Tower> {
        tower_linearize(t)
    }
}

/// `L^C = ℓD` with the shifting differential.
#[derive(Clone, Copy, Debug, Default)]
pub struct TowerLsys;

impl LinearizingSystem<TowerModel> for TowerLsys {
    fn linearize_in(&self, m: &TowerModel, context: &Shape, t: &Tower) -> Result<Tower> {
        SystemViaD(TowerD).linearize_in(m, context, t)
    }
}

impl Generate for TowerModel {
    fn gen_shape(&self, rng: &mut Rng, max_leaves: usize) -> Shape {
        self.poly.gen_shape(rng, max_leaves)
    }

    fn gen_mor(
        &self,
        rng: &mut Rng,
        context: Option<&Shape>,
        a: &Shape,
        b: &Shape,
        kind: Kind,
    ) -> Result<Tower> {
        self.lift(&self.poly.gen_mor(rng, context, a, b, kind)?)
    }

    fn shrink(&self, t: &Tower) -> Vec<Tower> {
        self.poly
            .shrink(t.base())
            .iter()
            .filter_map(|f| tower_of(f, t.depth()).ok())
            .collect()
    }
}

fn expect(label: &str, holds: bool) -> Verdict {
    if holds {
        Verdict::Pass
    } else {
        Verdict::Fail(label.to_string())
    }
}

/// Agreement of the tower formulas with the polynomial `D` and `L`, checked
/// entrywise on towers of the model's depth.
pub fn tower_laws<'a>() -> Vec<Law<'a, TowerModel>> {
    let one_map = |m: &TowerModel, rng: &mut Rng| {
        build(m, rng, |b| {
            let s = b.shapes(2, 5);
            b.mor(&s[0], &s[1])?;
            Ok(())
        })
    };
    vec![
        Law::new("TW.shift", one_map, |m: &TowerModel, inst| {
            let t = inst.mor(0);
            let f = t.base();
            let df = m.poly.differential(f)?;
            let shifted = shift(t)?;
            let twice = shift(&shifted)?;
            expect(
                "shift(tower_of(f)) differs from tower_of(D[f])",
                tower_eq(&shifted, &tower_of(&df, t.depth() - 1)?)?,
            )
            .and(|| {
                Ok(expect(
                    "shift(shift(tower_of(f))) differs from tower_of(D[D[f]])",
                    tower_eq(&twice, &tower_of(&m.poly.differential(&df)?, t.depth() - 2)?)?,
                ))
            })
        }),
        Law::new("TW.lin", one_map, |m: &TowerModel, inst| {
            let t = inst.mor(0);
            let lt = tower_linearize(t)?;
            let lf = m.poly.linearize(t.base());
            if !tower_eq(&lt, &tower_of(&lf, t.depth())?)? {
                return Ok(Verdict::Fail(format!(
                    "tower_linearize {lt} differs from tower_of(L[f])"
                )));
            }
            let poly = &m.poly;
            let mut x = t.dom().clone();
            for n in 0..t.depth() {
                let next = poly.compose(&poly.proj1(&x, &x)?, &lt.entries()[n])?;
                if !poly.poly_eq(&next, &lt.entries()[n + 1])? {
                    return Ok(Verdict::Fail(format!("entry {} is not p1 of entry {n}", n + 1)));
                }
                x = x.doubled();
            }
            check_all(
                m,
                &[(
                    "L[L[t]] = L[t]",
                    tower_linearize(&lt)?,
                    lt,
                )],
            )
        }),
        Law::new("TW.shiftlin", one_map, |m: &TowerModel, inst| {
            let t = inst.mor(0);
            let lt = tower_linearize(t)?;
            let via = crate::combinator::LinearizeViaD(TowerD).linearize(m, t)?;
            // ⟨0,1⟩D consumes one level, so compare at that depth
            Ok(expect(
                "tower_linearize differs from <0,1>shift",
                tower_eq(&lt.truncate(via.depth()), &via)?,
            ))
        }),
        Law::new("TW.trunc", one_map, |m: &TowerModel, inst| {
            let t = inst.mor(0);
            let k = t.depth();
            let short = t.truncate(k - 1);
            let ok_shift = tower_eq(&shift(&short)?, &shift(t)?.truncate(k - 2))?;
            let ok_lin = tower_eq(&tower_linearize(&short)?, &tower_linearize(t)?.truncate(k - 1))?;
            let _ = m;
            expect("truncation does not commute with shift", ok_shift)
                .and(|| Ok(expect("truncation does not commute with linearize", ok_lin)))
        }),
        Law::new(
            "TW.linear",
            |m: &TowerModel, rng: &mut Rng| {
                build(m, rng, |b| {
                    let s = b.shapes(2, 5);
                    let kind = if rand::Rng::random_bool(b.rng, 0.5) {
                        Kind::Additive
                    } else {
                        Kind::Any
                    };
                    b.mor_kind(&s[0], &s[1], kind)?;
                    Ok(())
                })
            },
            |m: &TowerModel, inst| {
                let t = inst.mor(0);
                let l_linear = tower_eq(&tower_linearize(t)?, t)?;
                let poly = &m.poly;
                let mut x = t.dom().clone();
                let mut g = t.base().clone();
                let mut replicated = true;
                for n in 1..=t.depth() {
                    g = poly.compose(&poly.proj1(&x, &x)?, &g)?;
                    x = x.doubled();
                    replicated &= poly.poly_eq(&g, &t.entries()[n])?;
                }
                Ok(expect(
                    "L-linear disagrees with f_n = p1..p1 f_0",
                    l_linear == replicated,
                ))
            },
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_poly_map;

    fn poly(src: &str) -> PolyMap {
        parse_poly_map(src, &[]).unwrap().0
    }

    fn show(f: &PolyMap) -> String {
        let names = crate::poly::Poly::default_names(f.nvars());
        f.display_with(&names)
    }

    #[test]
    fn identity_tower() {
        let t = tower_of(&poly("x"), 2).unwrap();
        let shown: Vec<String> = t.entries().iter().map(show).collect();
        assert_eq!(shown, ["x1", "x2", "x4"]);
    }

    #[test]
    fn square_tower_iterates_d() {
        let t = tower_of(&poly("x^2"), 2).unwrap();
        let shown: Vec<String> = t.entries().iter().map(show).collect();
        // D[x²](x, y) = 2xy; D[2xy]((x, y), (u, v)) = 2uy + 2xv
        assert_eq!(shown, ["x1^2", "2*x1*x2", "2*x1*x4 + 2*x2*x3"]);
    }

    #[test]
    fn shift_of_cubic() {
        let t = tower_of(&poly("x^3+x"), 3).unwrap();
        let s = shift(&t).unwrap();
        assert_eq!(s.depth(), 2);
        assert_eq!(s.base().display_with(&["x", "y"]), "3*x^2*y + y");
        assert_eq!(shift(&tower_of(&poly("x"), 0).unwrap()), Err(Error::DepthUnderflow));
    }

    #[test]
    fn zero_tower() {
        let z = PolyModel::default().zero(&Shape::Ground, &Shape::Ground).unwrap();
        let t = tower_of(&z, 3).unwrap();
        assert!(t.entries().iter().all(|e| e.comps()[0].is_zero()));
        assert!(shift(&t).unwrap().entries().iter().all(|e| e.comps()[0].is_zero()));
    }

    #[test]
    fn linearize_keeps_degree_one() {
        let (f, layout) = parse_poly_map("x^2*y+3*x+z+1", &[]).unwrap();
        let t = tower_of(&f, 2).unwrap();
        let l = tower_linearize(&t).unwrap();
        assert_eq!(l.base().display_with(&layout.names()), "3*x + z");
        assert!(tower_eq(&tower_linearize(&l).unwrap(), &l).unwrap());
        let p = PolyModel::default();
        let a = f.dom().clone();
        let pi1 = p.compose(&p.proj1(&a, &a).unwrap(), l.base()).unwrap();
        assert_eq!(l.entries()[1], pi1);
    }

    #[test]
    fn eq_requires_same_depth() {
        let f = poly("x^2");
        let a = tower_of(&f, 2).unwrap();
        let b = tower_of(&f, 3).unwrap();
        assert_eq!(tower_eq(&a, &b), Err(Error::DepthMismatch(2, 3)));
        assert!(tower_eq(&b, &b).unwrap());
        let mut c = b.clone();
        c.entries[3] = tower_of(&poly("x^3"), 3).unwrap().entries[3].clone();
        assert!(!tower_eq(&b, &c).unwrap());
    }
}
