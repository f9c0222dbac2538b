//! Systems of linearizing combinators: L.1 to L.6 in each slice, the
//! interchange axiom in both forms, substitution, and the basic lemmas.

use std::sync::Arc;

use super::gen::Generate;
use super::lin::{l_laws, prod, simplification_laws};
use super::runner::{bind_all, build, check_all, Check, Law, Verdict};
use crate::category::{Slice, Structure};
use crate::combinator::{
    partial_first, partial_second, AtContext, DynL, DynSys, Linearizing, LinearizingSystem,
    TotalViaSystem,
};
use crate::error::Result;
use crate::shape::Shape;

/// Slice contexts the per-context axioms are checked in.
pub fn default_contexts() -> Vec<Shape> {
    vec![Shape::Ground, Shape::ground_power(2)]
}

/// L.1 to L.6 and the L.5 simplifications for `L^C` in each slice, with ids
/// suffixed `@C`.
pub fn slice_checks<M: Generate + Clone + 'static>(
    m: &M,
    sys: DynSys<M>,
    contexts: &[Shape],
) -> Vec<Check<'static>> {
    let mut out = Vec::new();
    for c in contexts {
        let slice = Slice::new(m.clone(), c.clone());
        let lc: DynL<Slice<M>> = Arc::new(AtContext(sys.clone()));
        let mut laws = l_laws(lc.clone());
        laws.extend(simplification_laws(lc));
        let laws = laws
            .into_iter()
            .map(|law| {
                let id = format!("{}@{c}", law.id);
                law.with_id(id)
            })
            .collect();
        out.extend(bind_all(&slice, laws));
    }
    out
}

/// `L^C_1[L^C_0[f]]` and `L^C_0[L^C_1[f]]` for `f : C × (A × B) → D`.
pub fn l7_sides<M: Structure + ?Sized, S: LinearizingSystem<M> + ?Sized>(
    m: &M,
    sys: &S,
    f: &M::Mor,
) -> Result<(M::Mor, M::Mor)> {
    let lhs = partial_second(m, sys, &partial_first(m, sys, f)?)?;
    let rhs = partial_first(m, sys, &partial_second(m, sys, f)?)?;
    Ok((lhs, rhs))
}

/// Both sides of L.7.a for `f : (C × A) × (B × D) → E`.
pub fn l7a_sides<M: Structure + ?Sized, S: LinearizingSystem<M> + ?Sized>(
    m: &M,
    sys: &S,
    f: &M::Mor,
) -> Result<(M::Mor, M::Mor)> {
    let dom = m.dom(f);
    let (ca, bd) = dom.split_or_err("L.7.a")?;
    let (c, a) = ca.split_or_err("L.7.a")?;
    let (b, d) = bd.split_or_err("L.7.a")?;
    let cb = prod(c, b);
    // (C×A)×(B×D) → (C×B)×(A×D) and back
    let to_cb = m.interchange(c, a, b, d)?;
    let to_ca = m.interchange(c, b, a, d)?;
    let inner = m.compose(&to_ca, &sys.linearize_in(m, ca, f)?)?;
    let lhs = m.compose(&to_cb, &sys.linearize_in(m, &cb, &inner)?)?;
    let inner = m.compose(&to_cb, &sys.linearize_in(m, &cb, &m.compose(&to_ca, f)?)?)?;
    let rhs = sys.linearize_in(m, ca, &inner)?;
    Ok((lhs, rhs))
}

/// `f° = ((1 × 1) × π₀)α⁻¹f : (C × A) × (B × ⊤) → D` for `f : C × (A × B) → D`.
pub fn l7_corpus_map<M: Structure + ?Sized>(m: &M, f: &M::Mor) -> Result<M::Mor> {
    let dom = m.dom(f);
    let (c, ab) = dom.split_or_err("L.7 corpus")?;
    let (a, b) = ab.split_or_err("L.7 corpus")?;
    let ca = prod(c, a);
    let drop_unit = m.times(&m.identity(&ca)?, &m.proj0(b, &Shape::Unit)?)?;
    m.chain(&[&drop_unit, &m.alpha_inv(c, a, b)?, f])
}

fn nested_dom(s: &[Shape]) -> Shape {
    prod(&s[0], &prod(&s[1], &s[2]))
}

/// L.7, L.7.a, their case-by-case agreement, and L.8.
pub fn interchange_laws<'a, M: Generate + 'a>(sys: DynSys<M>) -> Vec<Law<'a, M>> {
    let (s7, s7a, seq, s8) = (sys.clone(), sys.clone(), sys.clone(), sys);
    vec![
        Law::new(
            "L.7",
            |m: &M, rng| {
                build(m, rng, |b| {
                    let s = b.shapes(3, 3);
                    let out = b.shape(2);
                    b.mor(&nested_dom(&s), &out)?;
                    Ok(())
                })
            },
            move |m, inst| {
                let (lhs, rhs) = l7_sides(m, &*s7, inst.mor(0))?;
                check_all(m, &[("L1[L0[f]] = L0[L1[f]]", lhs, rhs)])
            },
        ),
        Law::new(
            "L.7.a",
            |m: &M, rng| {
                build(m, rng, |b| {
                    let s = b.shapes(4, 3);
                    let out = b.shape(2);
                    let dom = prod(&prod(&s[0], &s[1]), &prod(&s[2], &s[3]));
                    b.mor(&dom, &out)?;
                    Ok(())
                })
            },
            move |m, inst| {
                let (lhs, rhs) = l7a_sides(m, &*s7a, inst.mor(0))?;
                check_all(m, &[("cL[cL[f]] = L[cL[cf]]", lhs, rhs)])
            },
        ),
        Law::new(
            "L7EQUIV",
            |m: &M, rng| {
                build(m, rng, |b| {
                    let s = b.shapes(3, 3);
                    let out = b.shape(2);
                    b.mor(&nested_dom(&s), &out)?;
                    Ok(())
                })
            },
            move |m, inst| {
                let f = inst.mor(0);
                let (v7, v7a) = l7_verdicts(m, &*seq, f)?;
                if v7.is_pass() == v7a.is_pass() {
                    Ok(Verdict::Pass)
                } else {
                    Ok(Verdict::Fail(format!(
                        "L.7 {} but L.7.a {} on the same map",
                        verdict_word(&v7),
                        verdict_word(&v7a)
                    )))
                }
            },
        ),
        Law::new(
            "L.8",
            |m: &M, rng| {
                build(m, rng, |b| {
                    let s = b.shapes(4, 6);
                    b.mor(&s[0], &s[1])?;
                    b.mor(&prod(&s[1], &s[2]), &s[3])?;
                    Ok(())
                })
            },
            move |m, inst| {
                let (h, f) = (inst.mor(0), inst.mor(1));
                let (c2, c) = (inst.shape(0), inst.shape(1));
                check_all(
                    m,
                    &[(
                        "(hx1)L^C[f] = L^C'[(hx1)f]",
                        m.substitute(h, &s8.linearize_in(m, c, f)?)?,
                        s8.linearize_in(m, c2, &m.substitute(h, f)?)?,
                    )],
                )
            },
        ),
    ]
}

fn verdict_word(v: &Verdict) -> &'static str {
    if v.is_pass() {
        "holds"
    } else {
        "fails"
    }
}

/// The L.7 and L.7.a verdicts on `f` and on its corpus image `f°`.
pub fn l7_verdicts<M: Structure + ?Sized, S: LinearizingSystem<M> + ?Sized>(
    m: &M,
    sys: &S,
    f: &M::Mor,
) -> Result<(Verdict, Verdict)> {
    let (l, r) = l7_sides(m, sys, f)?;
    let v7 = super::runner::check_eq(m, "L.7", &l, &r)?;
    let (l, r) = l7a_sides(m, sys, &l7_corpus_map(m, f)?)?;
    let v7a = super::runner::check_eq(m, "L.7.a", &l, &r)?;
    Ok((v7, v7a))
}

/// The lemmas every system satisfies, and the induced total `L`.
pub fn system_lemma_laws<'a, M: Generate + 'a>(sys: DynSys<M>) -> Vec<Law<'a, M>> {
    let (s1, s2, s3, s4) = (sys.clone(), sys.clone(), sys.clone(), sys);
    vec![
        Law::new(
            "LC.const",
            |m: &M, rng| {
                build(m, rng, |b| {
                    let s = b.shapes(3, 5);
                    b.mor(&s[0], &s[2])?;
                    Ok(())
                })
            },
            move |m, inst| {
                let h = inst.mor(0);
                let (c, a) = (inst.shape(0), inst.shape(1));
                let p0h = m.compose(&m.proj0(c, a)?, h)?;
                check_all(
                    m,
                    &[(
                        "L^C[p0h] = 0",
                        s1.linearize_in(m, c, &p0h)?,
                        m.zero(&prod(c, a), &m.cod(h))?,
                    )],
                )
            },
        ),
        Law::new(
            "LC.lift",
            |m: &M, rng| {
                build(m, rng, |b| {
                    let s = b.shapes(4, 3);
                    let out = b.shape(2);
                    let dom = prod(&prod(&s[0], &s[1]), &prod(&s[2], &s[3]));
                    b.mor(&dom, &out)?;
                    Ok(())
                })
            },
            move |m, inst| {
                let f = inst.mor(0);
                let s = &inst.shapes;
                let (c, a, b, d) = (&s[0], &s[1], &s[2], &s[3]);
                let lift = m.lift(c, a, b, d)?;
                check_all(
                    m,
                    &[(
                        "lL^CxA[f] = L^C[lf]",
                        m.compose(&lift, &s2.linearize_in(m, &prod(c, a), f)?)?,
                        s2.linearize_in(m, c, &m.compose(&lift, f)?)?,
                    )],
                )
            },
        ),
        Law::new(
            "LC.oplus",
            |m: &M, rng| {
                build(m, rng, |b| {
                    let s = b.shapes(3, 3);
                    b.mor(&prod(&s[0], &s[1]), &s[2])?;
                    Ok(())
                })
            },
            move |m, inst| {
                let f = inst.mor(0);
                let (c, a) = (inst.shape(0), inst.shape(1));
                let ca = prod(c, a);
                let sums = m.times(&m.oplus(c)?, &m.oplus(a)?)?;
                check_all(
                    m,
                    &[(
                        "(+)L^C[f] = cL^CxC[((+)x(+))f]",
                        m.compose(&m.oplus(&ca)?, &s3.linearize_in(m, c, f)?)?,
                        m.compose(
                            &m.interchange(c, a, c, a)?,
                            &s3.linearize_in(m, &c.doubled(), &m.compose(&sums, f)?)?,
                        )?,
                    )],
                )
            },
        ),
        Law::new(
            "LC.total",
            |m: &M, rng| {
                build(m, rng, |b| {
                    let s = b.shapes(3, 5);
                    b.mor(&s[1], &s[2])?;
                    Ok(())
                })
            },
            move |m, inst| {
                let f = inst.mor(0);
                let (c, a) = (inst.shape(0), inst.shape(1));
                let p1 = m.proj1(c, a)?;
                let total = TotalViaSystem(s4.clone());
                check_all(
                    m,
                    &[(
                        "L^C[p1f] = p1L[f]",
                        s4.linearize_in(m, c, &m.compose(&p1, f)?)?,
                        m.compose(&p1, &total.linearize(m, f)?)?,
                    )],
                )
            },
        ),
    ]
}
