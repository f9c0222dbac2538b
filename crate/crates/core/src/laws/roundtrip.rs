//! Conversions between differential combinators and systems of linearizing
//! combinators, and their agreement with the native combinators.

use super::gen::Generate;
use super::lin::prod;
use super::runner::{build, check_all, Law};
use crate::category::Slice;
use crate::combinator::{
    ContextD, DViaSystem, Differential, DynD, DynL, DynSys, LinearizeViaD, Linearizing,
    LinearizingSystem, SystemViaD, TotalViaSystem,
};

pub fn roundtrip_laws<'a, M: Generate + Clone + 'a>(
    d: DynD<M>,
    l: DynL<M>,
    sys: DynSys<M>,
) -> Vec<Law<'a, M>> {
    let (d1, d3, d4) = (d.clone(), d.clone(), d);
    let (s2, s3, s4) = (sys.clone(), sys.clone(), sys);
    vec![
        Law::new(
            "RT.D",
            |m: &M, rng| {
                build(m, rng, |b| {
                    let s = b.shapes(2, 5);
                    b.mor(&s[0], &s[1])?;
                    Ok(())
                })
            },
            move |m, inst| {
                let f = inst.mor(0);
                let back = DViaSystem(SystemViaD(d1.clone()));
                check_all(
                    m,
                    &[("D_(L_D)[f] = D[f]", back.differential(m, f)?, d1.differential(m, f)?)],
                )
            },
        ),
        Law::new(
            "RT.LC",
            |m: &M, rng| {
                build(m, rng, |b| {
                    let s = b.shapes(2, 3);
                    let out = b.shape(2);
                    b.mor(&prod(&s[0], &s[1]), &out)?;
                    Ok(())
                })
            },
            move |m, inst| {
                let f = inst.mor(0);
                let c = inst.shape(0);
                let back = SystemViaD(DViaSystem(s2.clone()));
                check_all(
                    m,
                    &[(
                        "L^C_(D_L)[f] = L^C[f]",
                        back.linearize_in(m, c, f)?,
                        s2.linearize_in(m, c, f)?,
                    )],
                )
            },
        ),
        Law::new(
            "RT.L",
            |m: &M, rng| {
                build(m, rng, |b| {
                    let s = b.shapes(2, 5);
                    b.mor(&s[0], &s[1])?;
                    Ok(())
                })
            },
            move |m, inst| {
                let f = inst.mor(0);
                let native = l.linearize(m, f)?;
                check_all(
                    m,
                    &[
                        ("L_D[f] = L[f]", LinearizeViaD(d3.clone()).linearize(m, f)?, native.clone()),
                        (
                            "<0,1>L^T[p1f] = L[f]",
                            TotalViaSystem(s3.clone()).linearize(m, f)?,
                            native,
                        ),
                    ],
                )
            },
        ),
        Law::new(
            "RT.LD",
            |m: &M, rng| {
                build(m, rng, |b| {
                    let s = b.shapes(2, 3);
                    let out = b.shape(2);
                    b.mor(&prod(&s[0], &s[1]), &out)?;
                    Ok(())
                })
            },
            move |m, inst| {
                let f = inst.mor(0);
                let (c, a) = (inst.shape(0), inst.shape(1));
                let ca = prod(c, a);
                let ld = SystemViaD(d4.clone()).linearize_in(m, c, f)?;
                // ⟨π₀, ⟨0, π₁⟩⟩ : C × A → C × (A × A)
                let head = m.pair(
                    &m.proj0(c, a)?,
                    &m.pair(&m.zero(&ca, a)?, &m.proj1(c, a)?)?,
                )?;
                let dc = ContextD(d4.clone()).differential(&Slice::new(m.clone(), c.clone()), f)?;
                check_all(
                    m,
                    &[
                        ("L^C[f] = lD[f]", s4.linearize_in(m, c, f)?, ld.clone()),
                        ("lD[f] = <p0,<0,p1>>D^C[f]", ld, m.compose(&head, &dc)?),
                    ],
                )
            },
        ),
    ]
}
