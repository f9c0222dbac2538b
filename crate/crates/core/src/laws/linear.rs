//! Linear maps: the characterizations of D-linearity and linearity in the
//! second argument, and the closure properties of linear and L-linear maps.

use super::gen::{Generate, Kind, Rng};
use super::lin::{is_l_linear, prod};
use super::runner::{build, check_all, Instance, Law, Verdict};
use crate::category::{Slice, Structure};
use crate::combinator::{ContextD, Differential, DynD, DynL};
use crate::error::Result;

/// `D[f] = π₁f`
pub fn is_d_linear<M: Structure + ?Sized, D: Differential<M> + ?Sized>(
    m: &M,
    d: &D,
    f: &M::Mor,
) -> Result<bool> {
    let a = m.dom(f);
    m.equal(&d.differential(m, f)?, &m.compose(&m.proj1(&a, &a)?, f)?)
}

/// `⟨0, 1⟩D[f]`, a linear map for every `f`.
pub fn linear_part<M: Structure + ?Sized, D: Differential<M> + ?Sized>(
    m: &M,
    d: &D,
    f: &M::Mor,
) -> Result<M::Mor> {
    let a = m.dom(f);
    m.compose(&m.zero_one(&a, &a)?, &d.differential(m, f)?)
}

fn expect(label: &str, holds: bool) -> Verdict {
    if holds {
        Verdict::Pass
    } else {
        Verdict::Fail(label.to_string())
    }
}

fn all(checks: Vec<(&str, bool)>) -> Verdict {
    checks
        .into_iter()
        .find(|(_, ok)| !ok)
        .map_or(Verdict::Pass, |(label, _)| expect(label, false))
}

/// One map `A → B`, additive half the time when `mixed`.
fn one_map<M: Generate>(mixed: bool) -> impl Fn(&M, &mut Rng) -> Result<Option<Instance<M::Mor>>> {
    move |m: &M, rng| {
        build(m, rng, |b| {
            let s = b.shapes(2, 5);
            let kind = if mixed && rand::Rng::random_bool(b.rng, 0.5) {
                Kind::Additive
            } else {
                Kind::Any
            };
            b.mor_kind(&s[0], &s[1], kind)?;
            Ok(())
        })
    }
}

pub fn linear_laws<'a, M: Generate + Clone + 'a>(d: DynD<M>, l: DynL<M>) -> Vec<Law<'a, M>> {
    let (d1, d2, d3, d4, d5, d6, d7, d8) = (
        d.clone(),
        d.clone(),
        d.clone(),
        d.clone(),
        d.clone(),
        d.clone(),
        d.clone(),
        d,
    );
    let (l1, l2) = (l.clone(), l);
    vec![
        Law::new("LIN.char", one_map::<M>(true), move |m, inst| {
            let f = inst.mor(0);
            let by_d = is_d_linear(m, &*d1, f)?;
            let by_zero = m.equal(f, &linear_part(m, &*d1, f)?)?;
            Ok(expect(
                "D[f] = p1f disagrees with f = <0,1>D[f]",
                by_d == by_zero,
            ))
        }),
        Law::new("LIN.LD", one_map::<M>(false), move |m, inst| {
            let g = linear_part(m, &*d2, inst.mor(0))?;
            Ok(expect("<0,1>D[f] is not linear", is_d_linear(m, &*d2, &g)?))
        }),
        Law::new(
            "LIN.ctx",
            |m: &M, rng| {
                build(m, rng, |b| {
                    let s = b.shapes(2, 3);
                    let out = b.shape(2);
                    let kind = if rand::Rng::random_bool(b.rng, 0.5) {
                        Kind::Additive
                    } else {
                        Kind::Any
                    };
                    b.mor_of(None, &prod(&s[0], &s[1]), &out, Kind::Any)?;
                    let c = s[0].clone();
                    let a = s[1].clone();
                    b.mor_of(Some(&c), &a, &out, kind)?;
                    Ok(())
                })
            },
            move |m, inst| {
                let (c, a) = (inst.shape(0), inst.shape(1));
                let slice = Slice::new(m.clone(), c.clone());
                for f in &inst.mors {
                    let dc = ContextD(d3.clone()).differential(&slice, f)?;
                    let one_p1 = m.times(&m.identity(c)?, &m.proj1(a, a)?)?;
                    let by_dc = m.equal(&dc, &m.compose(&one_p1, f)?)?;
                    let by_lift = m.equal(
                        &m.compose(&m.lift(c, a, c, a)?, &d3.differential(m, f)?)?,
                        f,
                    )?;
                    if by_dc != by_lift {
                        return Ok(Verdict::Fail(
                            "D^C[f] = (1xp1)f disagrees with lD[f] = f".into(),
                        ));
                    }
                }
                Ok(Verdict::Pass)
            },
        ),
        Law::new("LIN.dd", one_map::<M>(false), move |m, inst| {
            let f = inst.mor(0);
            let a = m.dom(f);
            let df = d4.differential(m, f)?;
            let slice = Slice::new(m.clone(), a.clone());
            let dadf = ContextD(d4.clone()).differential(&slice, &df)?;
            let one_p1 = m.times(&m.identity(&a)?, &m.proj1(&a, &a)?)?;
            check_all(m, &[("D^A[D[f]] = (1xp1)D[f]", dadf, m.compose(&one_p1, &df)?)])
        }),
        Law::new(
            "LIN.compose",
            |m: &M, rng| {
                build(m, rng, |b| {
                    let s = b.shapes(3, 6);
                    b.mor(&s[0], &s[1])?;
                    b.mor(&s[1], &s[2])?;
                    Ok(())
                })
            },
            move |m, inst| {
                let (f, g) = (inst.mor(0), inst.mor(1));
                let lf = linear_part(m, &*d5, f)?;
                let lg = linear_part(m, &*d5, g)?;
                check_all(
                    m,
                    &[
                        (
                            "D[fg] = (fxf)D[g] for linear f",
                            d5.differential(m, &m.compose(&lf, g)?)?,
                            m.compose(&m.times(&lf, &lf)?, &d5.differential(m, g)?)?,
                        ),
                        (
                            "D[fg] = D[f]g for linear g",
                            d5.differential(m, &m.compose(f, &lg)?)?,
                            m.compose(&d5.differential(m, f)?, &lg)?,
                        ),
                    ],
                )
            },
        ),
        Law::new(
            "LIN.closure",
            |m: &M, rng| {
                build(m, rng, |b| {
                    let s = b.shapes(3, 6);
                    b.mor(&s[0], &s[1])?;
                    b.mor(&s[1], &s[2])?;
                    b.mor(&s[0], &s[1])?;
                    b.mor(&s[0], &s[2])?;
                    Ok(())
                })
            },
            move |m, inst| {
                let lin: Vec<M::Mor> = inst
                    .mors
                    .iter()
                    .map(|f| linear_part(m, &*d6, f))
                    .collect::<Result<_>>()?;
                let (f, g, f2, h) = (&lin[0], &lin[1], &lin[2], &lin[3]);
                let (a, b) = (inst.shape(0), inst.shape(1));
                let is = |x: &M::Mor| is_d_linear(m, &*d6, x);
                Ok(all(vec![
                    ("identity is linear", is(&m.identity(a)?)?),
                    ("zero is linear", is(&m.zero(a, b)?)?),
                    ("p0 is linear", is(&m.proj0(a, b)?)?),
                    ("p1 is linear", is(&m.proj1(a, b)?)?),
                    ("fg is linear", is(&m.compose(f, g)?)?),
                    ("<f,h> is linear", is(&m.pair(f, h)?)?),
                    ("f+f' is linear", is(&m.add(f, f2)?)?),
                    ("fxh is linear", is(&m.times(f, h)?)?),
                    ("linear f is additive", m.is_additive(f)?),
                ]))
            },
        ),
        Law::new(
            "LIN.struct",
            |m: &M, rng| {
                build(m, rng, |b| {
                    b.shapes(4, 4);
                    Ok(())
                })
            },
            move |m, inst| {
                let s = &inst.shapes;
                let (a, b, c, dd) = (&s[0], &s[1], &s[2], &s[3]);
                let is = |x: &M::Mor| is_d_linear(m, &*d7, x);
                Ok(all(vec![
                    ("t is linear", is(&m.sym(a, b)?)?),
                    ("c is linear", is(&m.interchange(a, b, c, dd)?)?),
                    ("l is linear", is(&m.lift(a, b, c, dd)?)?),
                    ("(+) is linear", is(&m.oplus(a)?)?),
                ]))
            },
        ),
        Law::new("LIN.L", one_map::<M>(true), move |m, inst| {
            let f = inst.mor(0);
            Ok(expect(
                "D-linear disagrees with L-linear",
                is_d_linear(m, &*d8, f)? == is_l_linear(m, &*l1, f)?,
            ))
        }),
        Law::new(
            "LLIN.closure",
            |m: &M, rng| {
                build(m, rng, |b| {
                    let s = b.shapes(3, 6);
                    b.mor(&s[0], &s[1])?;
                    b.mor(&s[1], &s[2])?;
                    b.mor(&s[0], &s[1])?;
                    b.mor(&s[0], &s[2])?;
                    Ok(())
                })
            },
            move |m, inst| {
                let l = &*l2;
                let (f, g, f2, h) = (inst.mor(0), inst.mor(1), inst.mor(2), inst.mor(3));
                let (lf, lg, lf2, lh) = (
                    l.linearize(m, f)?,
                    l.linearize(m, g)?,
                    l.linearize(m, f2)?,
                    l.linearize(m, h)?,
                );
                let (a, b) = (inst.shape(0), inst.shape(1));
                let is = |x: &M::Mor| is_l_linear(m, l, x);
                let verdict = all(vec![
                    ("L[f] is L-linear", is(&lf)?),
                    ("L-linear L[f] is additive", m.is_additive(&lf)?),
                    ("identity is L-linear", is(&m.identity(a)?)?),
                    ("zero is L-linear", is(&m.zero(a, b)?)?),
                    ("p0 is L-linear", is(&m.proj0(a, b)?)?),
                    ("p1 is L-linear", is(&m.proj1(a, b)?)?),
                    ("L[f]L[g] is L-linear", is(&m.compose(&lf, &lg)?)?),
                    ("<L[f],L[h]> is L-linear", is(&m.pair(&lf, &lh)?)?),
                    ("L[f]+L[f'] is L-linear", is(&m.add(&lf, &lf2)?)?),
                    ("L[f]xL[h] is L-linear", is(&m.times(&lf, &lh)?)?),
                ]);
                verdict.and(|| {
                    check_all(
                        m,
                        &[
                            (
                                "L[fg] = fL[g] for L-linear f",
                                l.linearize(m, &m.compose(&lf, g)?)?,
                                m.compose(&lf, &l.linearize(m, g)?)?,
                            ),
                            (
                                "L[fg] = L[f]g for L-linear g",
                                l.linearize(m, &m.compose(f, &lg)?)?,
                                m.compose(&lf, &lg)?,
                            ),
                        ],
                    )
                })
            },
        ),
    ]
}
