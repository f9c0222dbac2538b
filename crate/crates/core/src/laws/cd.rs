//! Differential combinator axioms, in the base and in simple slices.

use std::sync::Arc;

use super::gen::Generate;
use super::runner::{bind_all, build, check_all, Check, Law};
use crate::category::{Slice, Structure};
use crate::combinator::{ContextD, Differential, DynD};
use crate::shape::Shape;

/// CD.1 through CD.7 for `d` on `M`.
pub fn cd_laws<'a, M: Generate + 'a>(d: DynD<M>) -> Vec<Law<'a, M>> {
    let d1 = d.clone();
    let d2 = d.clone();
    let d3 = d.clone();
    let d4 = d.clone();
    let d5 = d.clone();
    let d6 = d.clone();
    let d7 = d;
    vec![
        Law::new(
            "CD.1",
            |m: &M, rng| {
                build(m, rng, |b| {
                    let s = b.shapes(2, 5);
                    b.mor(&s[0], &s[1])?;
                    b.mor(&s[0], &s[1])?;
                    Ok(())
                })
            },
            move |m, inst| {
                let (f, g) = (inst.mor(0), inst.mor(1));
                let (a, b) = (inst.shape(0), inst.shape(1));
                check_all(
                    m,
                    &[
                        (
                            "D[f+g] = D[f]+D[g]",
                            d1.differential(m, &m.add(f, g)?)?,
                            m.add(&d1.differential(m, f)?, &d1.differential(m, g)?)?,
                        ),
                        (
                            "D[0] = 0",
                            d1.differential(m, &m.zero(a, b)?)?,
                            m.zero(&a.doubled(), b)?,
                        ),
                    ],
                )
            },
        ),
        Law::new(
            "CD.2",
            |m: &M, rng| {
                build(m, rng, |b| {
                    let s = b.shapes(2, 5);
                    b.mor(&s[0], &s[1])?;
                    Ok(())
                })
            },
            move |m, inst| {
                let f = inst.mor(0);
                let a = inst.shape(0);
                let df = d2.differential(m, f)?;
                let one = m.identity(a)?;
                let at = |p| -> crate::error::Result<M::Mor> { m.compose(&m.times(&one, &p)?, &df) };
                check_all(
                    m,
                    &[
                        (
                            "(1x(+))D[f] = (1xp0)D[f] + (1xp1)D[f]",
                            at(m.oplus(a)?)?,
                            m.add(&at(m.proj0(a, a)?)?, &at(m.proj1(a, a)?)?)?,
                        ),
                        (
                            "<1,0>D[f] = 0",
                            m.compose(&m.one_zero(a, a)?, &df)?,
                            m.zero(a, &m.cod(f))?,
                        ),
                    ],
                )
            },
        ),
        Law::new(
            "CD.3",
            |m: &M, rng| {
                build(m, rng, |b| {
                    b.shapes(2, 3);
                    Ok(())
                })
            },
            move |m, inst| {
                let (a, b) = (inst.shape(0), inst.shape(1));
                let ab = Shape::prod(a.clone(), b.clone());
                let p1 = m.proj1(&ab, &ab)?;
                check_all(
                    m,
                    &[
                        (
                            "D[1] = p1",
                            d3.differential(m, &m.identity(a)?)?,
                            m.proj1(a, a)?,
                        ),
                        (
                            "D[p0] = p1p0",
                            d3.differential(m, &m.proj0(a, b)?)?,
                            m.compose(&p1, &m.proj0(a, b)?)?,
                        ),
                        (
                            "D[p1] = p1p1",
                            d3.differential(m, &m.proj1(a, b)?)?,
                            m.compose(&p1, &m.proj1(a, b)?)?,
                        ),
                    ],
                )
            },
        ),
        Law::new(
            "CD.4",
            |m: &M, rng| {
                build(m, rng, |b| {
                    let s = b.shapes(3, 6);
                    b.mor(&s[0], &s[1])?;
                    b.mor(&s[0], &s[2])?;
                    Ok(())
                })
            },
            move |m, inst| {
                let (f, g) = (inst.mor(0), inst.mor(1));
                check_all(
                    m,
                    &[(
                        "D[<f,g>] = <D[f],D[g]>",
                        d4.differential(m, &m.pair(f, g)?)?,
                        m.pair(&d4.differential(m, f)?, &d4.differential(m, g)?)?,
                    )],
                )
            },
        ),
        Law::new(
            "CD.5",
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
                let a = inst.shape(0);
                let head = m.pair(
                    &m.compose(&m.proj0(a, a)?, f)?,
                    &d5.differential(m, f)?,
                )?;
                check_all(
                    m,
                    &[(
                        "D[fg] = <p0f,D[f]>D[g]",
                        d5.differential(m, &m.compose(f, g)?)?,
                        m.compose(&head, &d5.differential(m, g)?)?,
                    )],
                )
            },
        ),
        Law::new(
            "CD.6",
            |m: &M, rng| {
                build(m, rng, |b| {
                    let s = b.shapes(2, 4);
                    b.mor(&s[0], &s[1])?;
                    Ok(())
                })
            },
            move |m, inst| {
                let f = inst.mor(0);
                let a = inst.shape(0);
                let df = d6.differential(m, f)?;
                let ddf = d6.differential(m, &df)?;
                check_all(
                    m,
                    &[("lD[D[f]] = D[f]", m.compose(&m.lift(a, a, a, a)?, &ddf)?, df)],
                )
            },
        ),
        Law::new(
            "CD.7",
            |m: &M, rng| {
                build(m, rng, |b| {
                    let s = b.shapes(2, 4);
                    b.mor(&s[0], &s[1])?;
                    Ok(())
                })
            },
            move |m, inst| {
                let f = inst.mor(0);
                let a = inst.shape(0);
                let ddf = d7.differential(m, &d7.differential(m, f)?)?;
                check_all(
                    m,
                    &[(
                        "cD[D[f]] = D[D[f]]",
                        m.compose(&m.interchange(a, a, a, a)?, &ddf)?,
                        ddf,
                    )],
                )
            },
        ),
    ]
}

/// `D^C` in the slices over each context: CD.1 to CD.7 (ids suffixed with
/// `@C`) plus compatibility with substitution.
pub fn dc_checks<M: Generate + Clone + 'static>(
    m: &M,
    d: DynD<M>,
    contexts: &[Shape],
) -> Vec<Check<'static>> {
    let mut out = Vec::new();
    for c in contexts {
        let slice = Slice::new(m.clone(), c.clone());
        let dc: DynD<Slice<M>> = Arc::new(ContextD(d.clone()));
        let laws = cd_laws(dc)
            .into_iter()
            .map(|law| {
                let id = format!("{}@{c}", law.id);
                law.with_id(id)
            })
            .collect();
        out.extend(bind_all(&slice, laws));
    }
    out.extend(bind_all(m, vec![dc_subst_law(d)]));
    out
}

/// `(h × 1)D^{C'}[f] = D^C[(h × 1)f]` for `h : C → C'`, `f : C' × A → B`.
pub fn dc_subst_law<'a, M: Generate + Clone + 'a>(d: DynD<M>) -> Law<'a, M> {
    Law::new(
        "DC.subst",
        |m: &M, rng| {
            build(m, rng, |b| {
                let s = b.shapes(4, 6);
                b.mor(&s[0], &s[1])?;
                b.mor(&Shape::prod(s[1].clone(), s[2].clone()), &s[3])?;
                Ok(())
            })
        },
        move |m, inst| {
            let (h, f) = (inst.mor(0), inst.mor(1));
            let (c, c1) = (inst.shape(0), inst.shape(1));
            let dc1 = ContextD(d.clone()).differential(&Slice::new(m.clone(), c1.clone()), f)?;
            let moved = m.substitute(h, f)?;
            let dc = ContextD(d.clone()).differential(&Slice::new(m.clone(), c.clone()), &moved)?;
            check_all(
                m,
                &[("(hx1)D^C'[f] = D^C[(hx1)f]", m.substitute(h, &dc1)?, dc)],
            )
        },
    )
}
