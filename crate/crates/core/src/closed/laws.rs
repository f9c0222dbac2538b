//! Laws specific to the closed structure: compatibility of `D` and `L` with
//! currying and evaluation, the exponentiable axioms, the hom monad, and the
//! conversions between `D`, `L` and `L^C`.

use super::{ClosedD, ClosedL, ClosedLsys, ClosedModel, ClosedMorphism};
use crate::category::{Closed, ClosedStructure, Model, Slice, Structure};
use crate::combinator::{
    exp_first, exp_second, ContextD, DViaExp, DViaSystem, Differential, LinearizeViaD,
    Linearizing, LinearizingSystem, SystemViaD, SystemViaExp, TotalViaSystem,
};
use crate::error::Result;
use crate::laws::runner::{build, check_all, Builder, Law, Verdict};
use crate::laws::Rng;
use crate::shape::Shape;

fn prod(a: &Shape, b: &Shape) -> Shape {
    Shape::prod(a.clone(), b.clone())
}

fn hom(c: &Shape, a: &Shape) -> Shape {
    Shape::hom(c.clone(), a.clone())
}

/// Context `C`, argument `A`, output `B` and a map `f : C × A → B`.
fn curried_case(m: &ClosedModel, rng: &mut Rng) -> Result<Option<crate::laws::runner::Instance<ClosedMorphism>>> {
    build(m, rng, |b| {
        let s = b.shapes(3, 4);
        b.mor(&prod(&s[0], &s[1]), &s[2])?;
        Ok(())
    })
}

/// Two shapes `C`, `A`.
fn shape_pair(m: &ClosedModel, rng: &mut Rng) -> Result<Option<crate::laws::runner::Instance<ClosedMorphism>>> {
    build(m, rng, |b| {
        b.shapes(2, 3);
        Ok(())
    })
}

/// Maps in the closed fragment built from a ground `g : C × A → B` and a
/// ground `h : B → B'`: curries, the hom functor, the monad, the pairing
/// isomorphism and evaluation. Every entry has a first-order domain.
pub fn higher_order_corpus(
    m: &ClosedModel,
    g: &ClosedMorphism,
    h: &ClosedMorphism,
) -> Result<Vec<ClosedMorphism>> {
    let dom = m.dom(g);
    let (c, a) = dom.split_or_err("corpus")?;
    let (c, a) = (c.clone(), a.clone());
    let b = m.cod(g);
    let b2 = m.cod(h);
    let lg = m.curry(g)?;
    let gh = m.compose(g, h)?;
    let one_c = m.identity(&c)?;

    // G(c, (c', a)) = g(c + c', a)
    let cca = prod(&c, &prod(&c, &a));
    let shift = m.pair(
        &m.add(&m.proj0(&c, &prod(&c, &a))?, &m.chain(&[&m.proj1(&c, &prod(&c, &a))?, &m.proj0(&c, &a)?])?)?,
        &m.chain(&[&m.proj1(&c, &prod(&c, &a))?, &m.proj1(&c, &a)?])?,
    )?;
    debug_assert_eq!(m.dom(&shift), cca);
    let big = m.compose(&shift, g)?;
    let llg = m.curry(&m.curry(&big)?)?;

    Ok(vec![
        lg.clone(),
        m.compose(&lg, &m.hom_map(&one_c, h)?)?,
        m.compose(&llg, &m.mu(&c, &b)?)?,
        m.compose(&m.pair(&lg, &m.curry(&gh)?)?, &m.theta(&c, &b, &b2)?)?,
        m.compose(&lg, &m.eta(&c, &hom(&c, &b))?)?,
        m.compose(&llg, &m.phi(&c, &c, &b)?)?,
        m.uncurry(&m.compose(&lg, &m.hom_map(&one_c, h)?)?)?,
        m.compose(&m.times(&one_c, &lg)?, &m.eval_map(&c, &b)?)?,
    ])
}

fn corpus_case(m: &ClosedModel, rng: &mut Rng) -> Result<Option<crate::laws::runner::Instance<ClosedMorphism>>> {
    build(m, rng, |b: &mut Builder<'_, ClosedModel>| {
        let s = b.shapes(4, 4);
        b.mor(&prod(&s[0], &s[1]), &s[2])?;
        b.mor(&s[2], &s[3])?;
        Ok(())
    })
}

/// Every law of the closed suite.
pub fn closed_laws<'a>() -> Vec<Law<'a, ClosedModel>> {
    vec![
        Law::new("CL.curry", curried_case, |m: &ClosedModel, inst| {
            let f = inst.mor(0);
            let lf = m.curry(f)?;
            let c = m.dom(f).split_or_err("CL.curry")?.0.clone();
            let g = m.compose(&m.times(&m.identity(&c)?, &m.zero(&m.dom(&lf), &m.dom(&lf))?)?, f)?;
            check_all(
                m,
                &[
                    ("uncurry(curry(f)) = f", m.uncurry(&lf)?, f.clone()),
                    ("curry(uncurry(curry(f))) = curry(f)", m.curry(&m.uncurry(&lf)?)?, lf.clone()),
                    (
                        "curry(f + g) = curry(f) + curry(g)",
                        m.curry(&m.add(f, &g)?)?,
                        m.add(&lf, &m.curry(&g)?)?,
                    ),
                    (
                        "curry(0) = 0",
                        m.curry(&m.zero(&m.dom(f), &m.cod(f))?)?,
                        m.zero(&m.dom(&lf), &m.cod(&lf))?,
                    ),
                ],
            )
        }),
        Law::new("CL.monad", shape_pair, |m: &ClosedModel, inst| {
            let (c, a) = (inst.shape(0), inst.shape(1));
            let ca = hom(c, a);
            let mu = m.mu(c, a)?;
            let one = m.identity(&ca)?;
            check_all(
                m,
                &[
                    (
                        "mu mu = [1, mu] mu",
                        m.compose(&m.mu(c, &ca)?, &mu)?,
                        m.compose(&m.hom_map(&m.identity(c)?, &mu)?, &mu)?,
                    ),
                    ("eta mu = 1", m.compose(&m.eta(c, &ca)?, &mu)?, one.clone()),
                    (
                        "[1, eta] mu = 1",
                        m.compose(&m.hom_map(&m.identity(c)?, &m.eta(c, a)?)?, &mu)?,
                        one.clone(),
                    ),
                    ("[1, 1] = 1", m.hom_map(&m.identity(c)?, &m.identity(a)?)?, one),
                ],
            )
        }),
        Law::new(
            "CL.iso",
            |m: &ClosedModel, rng: &mut Rng| {
                build(m, rng, |b| {
                    b.shapes(3, 4);
                    Ok(())
                })
            },
            |m: &ClosedModel, inst| {
                let (c, a, b) = (inst.shape(0), inst.shape(1), inst.shape(2));
                let theta = m.theta(c, a, b)?;
                let theta_inv = m.theta_inv(c, a, b)?;
                let phi = m.phi(a, c, b)?;
                let phi_inv = m.phi_inv(a, c, b)?;
                check_all(
                    m,
                    &[
                        (
                            "theta theta^-1 = 1",
                            m.compose(&theta, &theta_inv)?,
                            m.identity(&prod(&hom(c, a), &hom(c, b)))?,
                        ),
                        (
                            "theta^-1 theta = 1",
                            m.compose(&theta_inv, &theta)?,
                            m.identity(&hom(c, &prod(a, b)))?,
                        ),
                        (
                            "phi phi^-1 = 1",
                            m.compose(&phi, &phi_inv)?,
                            m.identity(&hom(a, &hom(c, b)))?,
                        ),
                        (
                            "phi^-1 phi = 1",
                            m.compose(&phi_inv, &phi)?,
                            m.identity(&hom(&prod(c, a), b))?,
                        ),
                    ],
                )
            },
        ),
        Law::new("L.lambda", curried_case, |m: &ClosedModel, inst| {
            let f = inst.mor(0);
            let c = m.dom(f).split_or_err("L.lambda")?.0.clone();
            let lhs = ClosedL.linearize(m, &m.curry(f)?)?;
            check_all(
                m,
                &[
                    ("L[curry f] = curry(L^C f)", lhs.clone(), m.curry(&ClosedLsys.linearize_in(m, &c, f)?)?),
                    (
                        "L[curry f] = curry(lD f)",
                        lhs,
                        m.curry(&SystemViaD(ClosedD).linearize_in(m, &c, f)?)?,
                    ),
                ],
            )
        }),
        Law::new("L.ev", shape_pair, |m: &ClosedModel, inst| {
            let (c, a) = (inst.shape(0), inst.shape(1));
            let ev = m.eval_map(c, a)?;
            check_all(
                m,
                &[
                    ("L^C[ev] = ev", ClosedLsys.linearize_in(m, c, &ev)?, ev.clone()),
                    (
                        "curry-linearize-uncurry of ev = ev",
                        SystemViaExp(ClosedL).linearize_in(m, c, &ev)?,
                        ev.clone(),
                    ),
                    ("lD[ev] = ev", SystemViaD(ClosedD).linearize_in(m, c, &ev)?, ev),
                ],
            )
        }),
        Law::new("CD.lambda", curried_case, |m: &ClosedModel, inst| {
            let f = inst.mor(0);
            let c = m.dom(f).split_or_err("CD.lambda")?.0.clone();
            let slice = Slice::new(*m, c);
            let dc = ContextD(ClosedD).differential(&slice, f)?;
            check_all(
                m,
                &[(
                    "D[curry f] = curry(D^C f)",
                    ClosedD.differential(m, &m.curry(f)?)?,
                    m.curry(&dc)?,
                )],
            )
        }),
        Law::new("CD.ev", shape_pair, |m: &ClosedModel, inst| {
            let (c, a) = (inst.shape(0), inst.shape(1));
            let ca = hom(c, a);
            let ev = m.eval_map(c, a)?;
            let lift = m.lift(c, &ca, c, &ca)?;
            check_all(
                m,
                &[("l D[ev] = ev", m.compose(&lift, &ClosedD.differential(m, &ev)?)?, ev)],
            )
        }),
        Law::new("EL.1", shape_pair, |m: &ClosedModel, inst| {
            let (c, a) = (inst.shape(0), inst.shape(1));
            let (eta, mu) = (m.eta(c, a)?, m.mu(c, a)?);
            check_all(
                m,
                &[
                    ("L[eta] = eta", ClosedL.linearize(m, &eta)?, eta),
                    ("L[mu] = mu", ClosedL.linearize(m, &mu)?, mu),
                ],
            )
        }),
        Law::new(
            "EL.2",
            |m: &ClosedModel, rng: &mut Rng| {
                build(m, rng, |b| {
                    let s = b.shapes(4, 5);
                    b.mor(&s[0], &s[1])?;
                    b.mor(&s[2], &s[3])?;
                    Ok(())
                })
            },
            |m: &ClosedModel, inst| {
                let (f, g) = (inst.mor(0), inst.mor(1));
                check_all(
                    m,
                    &[(
                        "L[[f, g]] = [f, L[g]]",
                        ClosedL.linearize(m, &m.hom_map(f, g)?)?,
                        m.hom_map(f, &ClosedL.linearize(m, g)?)?,
                    )],
                )
            },
        ),
        Law::new(
            "EL.3",
            |m: &ClosedModel, rng: &mut Rng| {
                build(m, rng, |b| {
                    let s = b.shapes(3, 4);
                    b.mor(&prod(&s[0], &s[1]), &s[2])?;
                    Ok(())
                })
            },
            |m: &ClosedModel, inst| {
                let f = inst.mor(0);
                let l = ClosedL;
                let l01 = exp_first(m, &l, &exp_second(m, &l, f)?)?;
                let l10 = exp_second(m, &l, &exp_first(m, &l, f)?)?;
                check_all(m, &[("L0[L1[f]] = L1[L0[f]]", l01, l10)])
            },
        ),
        Law::new("CL.partial", curried_case, |m: &ClosedModel, inst| {
            let f = inst.mor(0);
            let c = m.dom(f).split_or_err("CL.partial")?.0.clone();
            check_all(
                m,
                &[(
                    "curry-linearize-uncurry = L^C",
                    m.partial_from_total(f)?,
                    ClosedLsys.linearize_in(m, &c, f)?,
                )],
            )
        }),
        Law::new("RT.DLD", corpus_case, |m: &ClosedModel, inst| {
            let (g, h) = (inst.mor(0), inst.mor(1));
            let mut verdict = Verdict::Pass;
            for f in std::iter::once(g.clone()).chain(higher_order_corpus(m, g, h)?) {
                verdict = verdict.and(|| {
                    let d = ClosedD.differential(m, &f)?;
                    check_all(
                        m,
                        &[
                            ("D_(L_D) = D", DViaExp(LinearizeViaD(ClosedD)).differential(m, &f)?, d.clone()),
                            ("D_(L^C_D) = D", DViaSystem(SystemViaD(ClosedD)).differential(m, &f)?, d.clone()),
                            ("D_L = D", m.d_from_exp(&f)?, d),
                        ],
                    )
                })?;
            }
            Ok(verdict)
        }),
        Law::new("RT.LLcL", corpus_case, |m: &ClosedModel, inst| {
            let (g, h) = (inst.mor(0), inst.mor(1));
            let mut verdict = Verdict::Pass;
            for f in std::iter::once(g.clone()).chain(higher_order_corpus(m, g, h)?) {
                verdict = verdict.and(|| {
                    let l = ClosedL.linearize(m, &f)?;
                    check_all(
                        m,
                        &[
                            (
                                "L_(L^C) = L",
                                TotalViaSystem(SystemViaExp(ClosedL)).linearize(m, &f)?,
                                l.clone(),
                            ),
                            ("L_(D_L) = L", LinearizeViaD(DViaExp(ClosedL)).linearize(m, &f)?, l),
                        ],
                    )
                })?;
            }
            Ok(verdict)
        }),
    ]
}
