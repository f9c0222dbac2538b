use std::fmt;

use num_traits::Signed;
use rand::Rng as _;

use super::{rat, Poly, Rational};
use crate::category::{check_composable, check_same_hom, EqContract, Model};
use crate::combinator::{context_split, Differential, Linearizing, LinearizingSystem};
use crate::error::{Error, Result};
use crate::laws::gen::{first_order_shape, Generate, Kind, Rng};
use crate::shape::Shape;

/// A tuple of polynomials, one per leaf of the codomain, each in the leaves
/// of the domain.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PolyMap {
    dom: Shape,
    cod: Shape,
    comps: Vec<Poly>,
}

impl PolyMap {
    pub fn new(dom: Shape, cod: Shape, comps: Vec<Poly>) -> Result<PolyMap> {
        let n = dom.arity_for("polynomial map")?;
        let m = cod.arity_for("polynomial map")?;
        if comps.len() != m {
            return Err(Error::Arity {
                expected: m,
                found: comps.len(),
            });
        }
        if let Some(bad) = comps.iter().find(|p| p.nvars() != n) {
            return Err(Error::Arity {
                expected: n,
                found: bad.nvars(),
            });
        }
        Ok(PolyMap { dom, cod, comps })
    }

    /// A scalar polynomial `Rⁿ → R` on a right-nested domain.
    pub fn scalar(p: Poly) -> PolyMap {
        let dom = Shape::ground_power(p.nvars());
        PolyMap {
            dom,
            cod: Shape::Ground,
            comps: vec![p],
        }
    }

    pub fn dom(&self) -> &Shape {
        &self.dom
    }

    pub fn cod(&self) -> &Shape {
        &self.cod
    }

    pub fn comps(&self) -> &[Poly] {
        &self.comps
    }

    pub fn nvars(&self) -> usize {
        self.comps.first().map_or_else(|| self.dom.flatten().len(), Poly::nvars)
    }

    /// Same components, reinterpreted on other shapes with the same leaf counts.
    pub fn retype(&self, dom: Shape, cod: Shape) -> Result<PolyMap> {
        PolyMap::new(dom, cod, self.comps.clone())
    }

    pub fn eval(&self, point: &[Rational]) -> Result<Vec<Rational>> {
        let n = self.dom.arity()?;
        if point.len() != n {
            return Err(Error::Arity {
                expected: n,
                found: point.len(),
            });
        }
        self.comps.iter().map(|p| p.eval(point)).collect()
    }

    /// Components printed with caller-supplied variable names, bracketed
    /// as a tuple unless the codomain is a single ground object.
    pub fn display_with(&self, names: &[impl AsRef<str>]) -> String {
        let parts: Vec<String> = self.comps.iter().map(|p| p.display_with(names)).collect();
        if self.cod == Shape::Ground {
            parts.into_iter().next().unwrap_or_default()
        } else {
            format!("[{}]", parts.join(", "))
        }
    }

    fn map_comps(&self, dom: Shape, f: impl Fn(&Poly) -> Poly) -> PolyMap {
        PolyMap {
            dom,
            cod: self.cod.clone(),
            comps: self.comps.iter().map(f).collect(),
        }
    }
}

impl fmt::Display for PolyMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = Poly::default_names(self.nvars());
        write!(f, "{} -> {} : {}", self.dom, self.cod, self.display_with(&names))
    }
}

/// Size caps for generated polynomials.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PolyGen {
    pub max_degree: u16,
    pub max_terms: usize,
    /// Coefficients are drawn from `[-coeff, coeff] \ {0}`.
    pub coeff: i64,
    pub max_leaves: usize,
}

impl Default for PolyGen {
    fn default() -> Self {
        PolyGen {
            max_degree: 3,
            max_terms: 4,
            coeff: 2,
            max_leaves: 3,
        }
    }
}

/// Polynomial maps over the rationals with the directional derivative.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PolyModel {
    pub gen: PolyGen,
}

impl PolyModel {
    pub fn new() -> Self {
        PolyModel::default()
    }

    pub fn arity(&self, s: &Shape) -> Result<usize> {
        s.arity_for("polynomial model")
    }

    /// `D[f]((x, y)) = Σᵢ ∂ᵢf(x)·yᵢ`
    pub fn differential(&self, f: &PolyMap) -> Result<PolyMap> {
        let n = self.arity(&f.dom)?;
        let first: Vec<usize> = (0..n).collect();
        let comps = f
            .comps
            .iter()
            .map(|p| {
                let mut acc = Poly::zero(2 * n);
                for i in 0..n {
                    let di = p.partial(i).rename(2 * n, &first);
                    acc = &acc + &(&di * &Poly::var(2 * n, n + i));
                }
                acc
            })
            .collect();
        Ok(PolyMap {
            dom: f.dom.doubled(),
            cod: f.cod.clone(),
            comps,
        })
    }

    /// Keeps exactly the monomials of total degree one.
    pub fn linearize(&self, f: &PolyMap) -> PolyMap {
        f.map_comps(f.dom.clone(), |p| {
            p.filter(|e| e.iter().map(|&k| u32::from(k)).sum::<u32>() == 1)
        })
    }

    /// For `f : C × A → B`, keeps the monomials of degree exactly one in the
    /// `A` variables, with any degree in the `C` variables.
    pub fn partial_linearize(&self, context: &Shape, f: &PolyMap) -> Result<PolyMap> {
        context_split(self, context, f, "partial_linearize")?;
        let nc = self.arity(context)?;
        Ok(f.map_comps(f.dom.clone(), |p| {
            p.filter(|e| e[nc..].iter().map(|&k| u32::from(k)).sum::<u32>() == 1)
        }))
    }

    pub fn eval(&self, f: &PolyMap, point: &[Rational]) -> Result<Vec<Rational>> {
        f.eval(point)
    }

    pub fn poly_eq(&self, f: &PolyMap, g: &PolyMap) -> Result<bool> {
        check_same_hom(self, "poly_eq", f, g)?;
        Ok(f.comps == g.comps)
    }

    pub fn neg(&self, f: &PolyMap) -> PolyMap {
        f.map_comps(f.dom.clone(), |p| -p)
    }

    pub fn sub(&self, f: &PolyMap, g: &PolyMap) -> Result<PolyMap> {
        check_same_hom(self, "sub", f, g)?;
        let comps = f.comps.iter().zip(&g.comps).map(|(a, b)| a - b).collect();
        Ok(PolyMap {
            dom: f.dom.clone(),
            cod: f.cod.clone(),
            comps,
        })
    }

    /// Applies `op` to every component.
    pub fn map_components(&self, f: &PolyMap, op: impl Fn(&Poly) -> Poly) -> PolyMap {
        f.map_comps(f.dom.clone(), op)
    }

    fn gen_poly(&self, rng: &mut Rng, nc: usize, na: usize, kind: Kind) -> Poly {
        let n = nc + na;
        let cfg = &self.gen;
        if rng.random_bool(0.08) {
            return Poly::zero(n);
        }
        let terms = rng.random_range(1..=cfg.max_terms);
        let mut out = Poly::zero(n);
        for _ in 0..terms {
            let degree = rng.random_range(0..=cfg.max_degree);
            let block = match kind {
                Kind::Any => rng.random_range(0..=degree),
                Kind::Constant => 0,
                Kind::Reduced => rng.random_range(1..=degree.max(1)),
                Kind::Additive | Kind::SemiAdditive => 1,
            };
            if block > 0 && na == 0 {
                continue;
            }
            let rest = if nc == 0 { 0 } else { degree.saturating_sub(block) };
            let mut e = vec![0u16; n];
            for _ in 0..block {
                e[nc + rng.random_range(0..na)] += 1;
            }
            for _ in 0..rest {
                e[rng.random_range(0..nc)] += 1;
            }
            let mut k = rng.random_range(1..=cfg.coeff);
            if rng.random_bool(0.5) {
                k = -k;
            }
            out = &out + &Poly::monomial(e, rat(k));
        }
        out
    }
}

impl Model for PolyModel {
    type Mor = PolyMap;

    fn name(&self) -> &'static str {
        "poly"
    }

    fn dom(&self, f: &PolyMap) -> Shape {
        f.dom.clone()
    }

    fn cod(&self, f: &PolyMap) -> Shape {
        f.cod.clone()
    }

    fn identity(&self, a: &Shape) -> Result<PolyMap> {
        let n = self.arity(a)?;
        Ok(PolyMap {
            dom: a.clone(),
            cod: a.clone(),
            comps: (0..n).map(|i| Poly::var(n, i)).collect(),
        })
    }

    fn compose(&self, f: &PolyMap, g: &PolyMap) -> Result<PolyMap> {
        check_composable(self, f, g)?;
        let n = self.arity(&f.dom)?;
        Ok(PolyMap {
            dom: f.dom.clone(),
            cod: g.cod.clone(),
            comps: g.comps.iter().map(|p| p.substitute(&f.comps, n)).collect(),
        })
    }

    fn pair(&self, f: &PolyMap, g: &PolyMap) -> Result<PolyMap> {
        if f.dom != g.dom {
            return Err(Error::mismatch("pair", &f.dom, &g.dom));
        }
        let mut comps = f.comps.clone();
        comps.extend(g.comps.iter().cloned());
        Ok(PolyMap {
            dom: f.dom.clone(),
            cod: Shape::prod(f.cod.clone(), g.cod.clone()),
            comps,
        })
    }

    fn proj0(&self, a: &Shape, b: &Shape) -> Result<PolyMap> {
        let (na, nb) = (self.arity(a)?, self.arity(b)?);
        let n = na + nb;
        Ok(PolyMap {
            dom: Shape::prod(a.clone(), b.clone()),
            cod: a.clone(),
            comps: (0..na).map(|i| Poly::var(n, i)).collect(),
        })
    }

    fn proj1(&self, a: &Shape, b: &Shape) -> Result<PolyMap> {
        let (na, nb) = (self.arity(a)?, self.arity(b)?);
        let n = na + nb;
        Ok(PolyMap {
            dom: Shape::prod(a.clone(), b.clone()),
            cod: b.clone(),
            comps: (na..n).map(|i| Poly::var(n, i)).collect(),
        })
    }

    fn add(&self, f: &PolyMap, g: &PolyMap) -> Result<PolyMap> {
        check_same_hom(self, "add", f, g)?;
        let comps = f.comps.iter().zip(&g.comps).map(|(a, b)| a + b).collect();
        Ok(PolyMap {
            dom: f.dom.clone(),
            cod: f.cod.clone(),
            comps,
        })
    }

    fn zero(&self, a: &Shape, b: &Shape) -> Result<PolyMap> {
        let (n, m) = (self.arity(a)?, self.arity(b)?);
        Ok(PolyMap {
            dom: a.clone(),
            cod: b.clone(),
            comps: vec![Poly::zero(n); m],
        })
    }

    fn equal(&self, f: &PolyMap, g: &PolyMap) -> Result<bool> {
        self.poly_eq(f, g)
    }

    fn contract(&self) -> EqContract {
        EqContract::Exact
    }
}

/// The polynomial directional derivative.
#[derive(Clone, Copy, Debug, Default)]
pub struct PolyD;

impl Differential<PolyModel> for PolyD {
    fn differential(&self, m: &PolyModel, f: &PolyMap) -> Result<PolyMap> {
        m.differential(f)
    }
}

/// Degree-one filter.
#[derive(Clone, Copy, Debug, Default)]
pub struct PolyL;

impl Linearizing<PolyModel> for PolyL {
    fn linearize(&self, m: &PolyModel, f: &PolyMap) -> Result<PolyMap> {
        Ok(m.linearize(f))
    }
}

/// Degree-one filter on the argument block.
#[derive(Clone, Copy, Debug, Default)]
pub struct PolyLsys;

impl LinearizingSystem<PolyModel> for PolyLsys {
    fn linearize_in(&self, m: &PolyModel, context: &Shape, f: &PolyMap) -> Result<PolyMap> {
        m.partial_linearize(context, f)
    }
}

impl Generate for PolyModel {
    fn gen_shape(&self, rng: &mut Rng, max_leaves: usize) -> Shape {
        first_order_shape(rng, max_leaves.min(self.gen.max_leaves))
    }

    fn gen_mor(
        &self,
        rng: &mut Rng,
        context: Option<&Shape>,
        a: &Shape,
        b: &Shape,
        kind: Kind,
    ) -> Result<PolyMap> {
        let nc = match context {
            Some(c) => self.arity(c)?,
            None => 0,
        };
        let na = self.arity(a)?;
        let m = self.arity(b)?;
        let dom = match context {
            Some(c) => Shape::prod(c.clone(), a.clone()),
            None => a.clone(),
        };
        let comps = (0..m).map(|_| self.gen_poly(rng, nc, na, kind)).collect();
        PolyMap::new(dom, b.clone(), comps)
    }

    fn shrink(&self, f: &PolyMap) -> Vec<PolyMap> {
        let mut out = Vec::new();
        for (i, p) in f.comps.iter().enumerate() {
            let mut push = |q: Poly| {
                let mut g = f.clone();
                g.comps[i] = q;
                out.push(g);
            };
            if !p.is_zero() {
                push(Poly::zero(p.nvars()));
            }
            for (e, c) in p.terms() {
                let without = p.filter(|e2| e2 != e);
                if p.len() > 1 {
                    push(without.clone());
                }
                for unit in [rat(1), rat(-1)] {
                    if *c != unit && c.abs() > rat(1) {
                        push(&without + &Poly::monomial(e.to_vec(), unit));
                    }
                }
                for (j, &k) in e.iter().enumerate() {
                    if k > 0 {
                        let mut e2 = e.to_vec();
                        e2[j] -= 1;
                        push(&without + &Poly::monomial(e2, c.clone()));
                    }
                }
            }
        }
        out
    }
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::Structure;
    use crate::combinator::{LinearizeViaD, SystemViaD};
    use crate::poly::ratio;

    fn sh(s: &str) -> Shape {
        s.parse().unwrap()
    }

    fn scalar(n: usize, terms: &[(&[u16], i64)]) -> PolyMap {
        PolyMap::scalar(Poly::from_terms(
            n,
            terms.iter().map(|(e, c)| (e.to_vec(), rat(*c))),
        ))
    }

    /// Coefficient of `t¹` in `f(x + t·a)`, computed by substitution into an
    /// extra variable rather than by differentiation.
    fn directional_oracle(f: &Poly) -> Poly {
        let n = f.nvars();
        // variables: x (n), a (n), t
        let total = 2 * n + 1;
        let t = Poly::var(total, 2 * n);
        let vals: Vec<Poly> = (0..n)
            .map(|i| &Poly::var(total, i) + &(&t * &Poly::var(total, n + i)))
            .collect();
        let expanded = f.substitute(&vals, total);
        let lin_t = expanded.filter(|e| e[2 * n] == 1);
        let mut out = Poly::zero(2 * n);
        for (e, c) in lin_t.terms() {
            out = &out + &Poly::monomial(e[..2 * n].to_vec(), c.clone());
        }
        out
    }

    #[test]
    fn derivative_of_cubic() {
        let m = PolyModel::new();
        let f = scalar(1, &[(&[3], 1), (&[1], 1)]);
        let d = m.differential(&f).unwrap();
        assert_eq!(d.display_with(&["x", "y"]), "3*x^2*y + y");
        assert_eq!(d.eval(&[rat(2), rat(1)]).unwrap(), vec![rat(13)]);
    }

    #[test]
    fn derivative_matches_directional_oracle() {
        let m = PolyModel::new();
        // x²y
        let f = scalar(2, &[(&[2, 1], 1)]);
        let d = m.differential(&f).unwrap();
        assert_eq!(d.comps()[0], directional_oracle(&f.comps()[0]));
        assert_eq!(d.display_with(&["x", "y", "a", "b"]), "x^2*b + 2*x*y*a");
        let mut rng = <Rng as rand::SeedableRng>::seed_from_u64(9);
        for _ in 0..200 {
            let a = m.gen_shape(&mut rng, 3);
            let b = m.gen_shape(&mut rng, 3);
            let f = m.gen_mor(&mut rng, None, &a, &b, Kind::Any).unwrap();
            let d = m.differential(&f).unwrap();
            for (p, dp) in f.comps().iter().zip(d.comps()) {
                assert_eq!(dp, &directional_oracle(p));
            }
        }
    }

    #[test]
    fn derivative_is_graded() {
        let m = PolyModel::new();
        let mut rng = <Rng as rand::SeedableRng>::seed_from_u64(3);
        for _ in 0..200 {
            let a = m.gen_shape(&mut rng, 3);
            let b = m.gen_shape(&mut rng, 3);
            let f = m.gen_mor(&mut rng, None, &a, &b, Kind::Any).unwrap();
            let n = a.arity().unwrap();
            for p in m.differential(&f).unwrap().comps() {
                for (e, _) in p.terms() {
                    assert_eq!(e[n..].iter().sum::<u16>(), 1);
                }
            }
        }
    }

    #[test]
    fn linearize_examples() {
        let m = PolyModel::new();
        // x²y + 3x + z + 1
        let f = scalar(3, &[(&[2, 1, 0], 1), (&[1, 0, 0], 3), (&[0, 0, 1], 1), (&[0, 0, 0], 1)]);
        assert_eq!(m.linearize(&f).display_with(&["x", "y", "z"]), "3*x + z");
        let five = scalar(1, &[(&[1], 5), (&[2], 1)]);
        assert_eq!(m.linearize(&five).display_with(&["x"]), "5*x");
        assert!(m.linearize(&scalar(2, &[(&[0, 0], 7)])).comps()[0].is_zero());
        let via_d = LinearizeViaD(PolyD);
        for g in [f, five] {
            assert_eq!(via_d.linearize(&m, &g).unwrap(), m.linearize(&g));
        }
    }

    #[test]
    fn partial_linearize_examples() {
        let m = PolyModel::new();
        let dom = sh("(R*R)");
        let mk = |terms: &[(&[u16], i64)]| scalar(2, terms).retype(dom.clone(), Shape::Ground).unwrap();
        // z³x + z²x³ + x + 1 with (z, x)
        let f = mk(&[(&[3, 1], 1), (&[2, 3], 1), (&[0, 1], 1), (&[0, 0], 1)]);
        let l = m.partial_linearize(&Shape::Ground, &f).unwrap();
        assert_eq!(l.display_with(&["z", "x"]), "z^3*x + x");
        assert_eq!(SystemViaD(PolyD).linearize_in(&m, &Shape::Ground, &f).unwrap(), l);
        let g = mk(&[(&[2, 0], 1)]);
        assert!(m.partial_linearize(&Shape::Ground, &g).unwrap().comps()[0].is_zero());
        let h = mk(&[(&[1, 1], 1), (&[0, 2], 1)]);
        assert_eq!(m.partial_linearize(&Shape::Ground, &h).unwrap().display_with(&["z", "x"]), "z*x");
        assert!(m.partial_linearize(&sh("(R*R)"), &h).is_err());
    }

    #[test]
    fn structural_examples() {
        let m = PolyModel::new();
        let r = Shape::Ground;
        // ℓ on R×R: (a, d) ↦ ((a, 0), (0, d))
        let lift = m.lift(&r, &r, &r, &r).unwrap();
        let pt = lift.eval(&[rat(5), rat(7)]).unwrap();
        assert_eq!(pt, vec![rat(5), rat(0), rat(0), rat(7)]);
        assert_eq!(m.cod(&lift), sh("((R*R)*(R*R))"));
        let id = m.identity(&r).unwrap();
        let tt = m.compose(&m.sym(&r, &sh("(R*R)")).unwrap(), &m.sym(&sh("(R*R)"), &r).unwrap()).unwrap();
        assert!(m.equal(&tt, &m.identity(&sh("(R*(R*R))")).unwrap()).unwrap());
        let three_x = scalar(1, &[(&[1], 3)]).retype(r.clone(), r.clone()).unwrap();
        assert!(m.is_additive(&three_x).unwrap());
        let sq = scalar(1, &[(&[2], 1)]).retype(r.clone(), r.clone()).unwrap();
        assert!(!m.is_additive(&sq).unwrap());
        let x1 = scalar(1, &[(&[1], 1), (&[0], 1)]).retype(r.clone(), r.clone()).unwrap();
        assert!(!m.is_reduced(&x1).unwrap());
        assert!(!m.is_constant(&x1).unwrap());
        assert!(m.equal(&m.compose(&id, &x1).unwrap(), &x1).unwrap());
    }

    #[test]
    fn context_predicates() {
        let m = PolyModel::new();
        let dom = sh("(R*R)");
        let mk = |terms: &[(&[u16], i64)]| scalar(2, terms).retype(dom.clone(), Shape::Ground).unwrap();
        assert!(m.is_additive_in_context(&mk(&[(&[1, 1], 1)])).unwrap());
        assert!(m.is_constant_in_context(&mk(&[(&[2, 0], 1)])).unwrap());
        assert!(!m.is_additive_in_context(&mk(&[(&[0, 2], 1)])).unwrap());
    }

    #[test]
    fn errors_name_shapes() {
        let m = PolyModel::new();
        let f = m.identity(&sh("(R*R)")).unwrap();
        let g = m.identity(&Shape::Ground).unwrap();
        let err = m.compose(&f, &g).unwrap_err();
        assert_eq!(err.to_string(), "shape mismatch in compose: (R*R) vs R");
        assert!(m.identity(&sh("[R,R]")).is_err());
    }

    #[test]
    fn unit_domain_maps_are_constants() {
        let m = PolyModel::new();
        let c = PolyMap::new(Shape::Unit, Shape::Ground, vec![Poly::constant(0, ratio(1, 2))]).unwrap();
        let d = m.differential(&c).unwrap();
        assert_eq!(m.dom(&d), sh("(1*1)"));
        assert!(d.comps()[0].is_zero());
        assert_eq!(c.to_string(), "1 -> R : 1/2");
    }

    #[test]
    fn generated_kinds_hold() {
        use crate::laws::gen::Constraint;
        let m = PolyModel::new();
        let mut rng = <Rng as rand::SeedableRng>::seed_from_u64(5);
        for kind in [Kind::Reduced, Kind::Constant, Kind::Additive, Kind::SemiAdditive] {
            for _ in 0..100 {
                let c = m.gen_shape(&mut rng, 2);
                let a = m.gen_shape(&mut rng, 2);
                let b = m.gen_shape(&mut rng, 2);
                let f = m.gen_mor(&mut rng, None, &a, &b, kind).unwrap();
                let con = Constraint { context: None, kind };
                assert!(con.holds(&m, &f).unwrap(), "{kind:?} {f}");
                let g = m.gen_mor(&mut rng, Some(&c), &a, &b, kind).unwrap();
                let con = Constraint { context: Some(c.clone()), kind };
                assert!(con.holds(&m, &g).unwrap(), "{kind:?} in context {g}");
            }
        }
    }
}
