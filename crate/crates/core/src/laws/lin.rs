//! Linearizing combinator axioms and the simplifications of L.5 for
//! constant, reduced and semi-additive maps.

use super::gen::{Generate, Kind};
use super::runner::{build, check_all, Law};
use crate::category::Structure;
use crate::combinator::{DynL, Linearizing};
use crate::error::Result;
use crate::shape::Shape;

/// L.1 through L.6.
pub fn l_laws<'a, M: Generate + 'a>(l: DynL<M>) -> Vec<Law<'a, M>> {
    let l1 = l.clone();
    let l2 = l.clone();
    let l3 = l.clone();
    let l4 = l.clone();
    let l5 = l.clone();
    let l6 = l;
    vec![
        Law::new(
            "L.1",
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
                let zero = m.zero(a, b)?;
                check_all(
                    m,
                    &[
                        (
                            "L[f+g] = L[f]+L[g]",
                            l1.linearize(m, &m.add(f, g)?)?,
                            m.add(&l1.linearize(m, f)?, &l1.linearize(m, g)?)?,
                        ),
                        ("L[0] = 0", l1.linearize(m, &zero)?, zero),
                    ],
                )
            },
        ),
        Law::new(
            "L.2",
            |m: &M, rng| {
                build(m, rng, |b| {
                    let s = b.shapes(2, 5);
                    b.mor(&s[0], &s[1])?;
                    Ok(())
                })
            },
            move |m, inst| {
                let f = inst.mor(0);
                let (a, b) = (inst.shape(0), inst.shape(1));
                let lf = l2.linearize(m, f)?;
                check_all(
                    m,
                    &[
                        (
                            "(+)L[f] = p0L[f] + p1L[f]",
                            m.compose(&m.oplus(a)?, &lf)?,
                            m.add(
                                &m.compose(&m.proj0(a, a)?, &lf)?,
                                &m.compose(&m.proj1(a, a)?, &lf)?,
                            )?,
                        ),
                        ("0L[f] = 0", m.compose(&m.zero(a, a)?, &lf)?, m.zero(a, b)?),
                    ],
                )
            },
        ),
        Law::new(
            "L.3",
            |m: &M, rng| {
                build(m, rng, |b| {
                    b.shapes(2, 3);
                    Ok(())
                })
            },
            move |m, inst| {
                let (a, b) = (inst.shape(0), inst.shape(1));
                let one = m.identity(a)?;
                let (p0, p1) = (m.proj0(a, b)?, m.proj1(a, b)?);
                check_all(
                    m,
                    &[
                        ("L[1] = 1", l3.linearize(m, &one)?, one),
                        ("L[p0] = p0", l3.linearize(m, &p0)?, p0),
                        ("L[p1] = p1", l3.linearize(m, &p1)?, p1),
                    ],
                )
            },
        ),
        Law::new(
            "L.4",
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
                        "L[<f,g>] = <L[f],L[g]>",
                        l4.linearize(m, &m.pair(f, g)?)?,
                        m.pair(&l4.linearize(m, f)?, &l4.linearize(m, g)?)?,
                    )],
                )
            },
        ),
        Law::new(
            "L.5",
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
                let (a, b) = (inst.shape(0), inst.shape(1));
                // (1 + 0f) : B → B, with 0 : B → A
                let shift = m.add(&m.identity(b)?, &m.compose(&m.zero(b, a)?, f)?)?;
                check_all(
                    m,
                    &[(
                        "L[fg] = L[f]L[(1+0f)g]",
                        l5.linearize(m, &m.compose(f, g)?)?,
                        m.compose(&l5.linearize(m, f)?, &l5.linearize(m, &m.compose(&shift, g)?)?)?,
                    )],
                )
            },
        ),
        Law::new(
            "L.6",
            |m: &M, rng| {
                build(m, rng, |b| {
                    let s = b.shapes(2, 5);
                    b.mor(&s[0], &s[1])?;
                    Ok(())
                })
            },
            move |m, inst| {
                let lf = l6.linearize(m, inst.mor(0))?;
                check_all(m, &[("L[L[f]] = L[f]", l6.linearize(m, &lf)?, lf)])
            },
        ),
    ]
}

fn composite_law<'a, M: Generate + 'a>(
    id: &'static str,
    l: DynL<M>,
    kinds: (Kind, Kind),
    label: &'static str,
) -> Law<'a, M> {
    Law::new(
        id,
        move |m: &M, rng| {
            build(m, rng, |b| {
                let s = b.shapes(3, 6);
                b.mor_kind(&s[0], &s[1], kinds.0)?;
                b.mor_kind(&s[1], &s[2], kinds.1)?;
                Ok(())
            })
        },
        move |m, inst| {
            let (f, g) = (inst.mor(0), inst.mor(1));
            check_all(
                m,
                &[(
                    label,
                    l.linearize(m, &m.compose(f, g)?)?,
                    m.compose(&l.linearize(m, f)?, &l.linearize(m, g)?)?,
                )],
            )
        },
    )
}

/// The three simplifications of L.5.
pub fn simplification_laws<'a, M: Generate + 'a>(l: DynL<M>) -> Vec<Law<'a, M>> {
    let lc = l.clone();
    vec![
        Law::new(
            "L.const",
            |m: &M, rng| {
                build(m, rng, |b| {
                    let s = b.shapes(2, 5);
                    b.mor_kind(&s[0], &s[1], Kind::Constant)?;
                    Ok(())
                })
            },
            move |m, inst| {
                let f = inst.mor(0);
                let zero = m.zero(&m.dom(f), &m.cod(f))?;
                check_all(m, &[("L[f] = 0 for constant f", lc.linearize(m, f)?, zero)])
            },
        ),
        composite_law(
            "L.reduced",
            l.clone(),
            (Kind::Reduced, Kind::Any),
            "L[fg] = L[f]L[g] for reduced f",
        ),
        composite_law(
            "L.semiadd",
            l,
            (Kind::Any, Kind::SemiAdditive),
            "L[fg] = L[f]L[g] for semi-additive g",
        ),
    ]
}

/// `L[f] = f`
pub fn is_l_linear<M: Structure + ?Sized, L: Linearizing<M> + ?Sized>(
    m: &M,
    l: &L,
    f: &M::Mor,
) -> Result<bool> {
    m.equal(&l.linearize(m, f)?, f)
}

pub(crate) fn prod(a: &Shape, b: &Shape) -> Shape {
    Shape::prod(a.clone(), b.clone())
}
