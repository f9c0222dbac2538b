//! Deliberately broken combinators. Each one replaces a single combinator of
//! a model and should be caught by the named suite.

use std::sync::Arc;

use crate::category::Structure;
use crate::combinator::{
    context_split, Differential, DifferentialFn, IgnoreContext, LinearizeFn, Linearizing,
    LinearizingSystem, SystemFn,
};
use crate::shape::Shape;
use crate::suites::{Combinators, Suite};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Mutant {
    pub name: &'static str,
    pub suite: Suite,
    pub summary: &'static str,
}

pub const MUTANTS: &[Mutant] = &[
    Mutant {
        name: "cd3-zero",
        suite: Suite::Cd,
        summary: "D[f] = 0",
    },
    Mutant {
        name: "d-double",
        suite: Suite::Cd,
        summary: "D[f] = D[f] + D[f]",
    },
    Mutant {
        name: "d-pi1",
        suite: Suite::Cd,
        summary: "D[f] = p1 f",
    },
    Mutant {
        name: "d-shifted-point",
        suite: Suite::Cd,
        summary: "D[f] = <(+), p1>D[f]",
    },
    Mutant {
        name: "d-at-zero",
        suite: Suite::Cd,
        summary: "D[f] = <0, p1>D[f]",
    },
    Mutant {
        name: "d-endpoint",
        suite: Suite::Cd,
        summary: "D[f] = (+)f",
    },
    Mutant {
        name: "d-squared",
        suite: Suite::Cd,
        summary: "D[f] = <1, <p1, 0>>D[D[f]]",
    },
    Mutant {
        name: "l-identity",
        suite: Suite::L,
        summary: "L[f] = f",
    },
    Mutant {
        name: "l-plus-const",
        suite: Suite::L,
        summary: "L[f] = L[f] + 0f",
    },
    Mutant {
        name: "l-double",
        suite: Suite::L,
        summary: "L[f] = L[f] + L[f]",
    },
    Mutant {
        name: "lc-ignore-context",
        suite: Suite::System,
        summary: "L^C[f] = L[f]",
    },
    Mutant {
        name: "lc-context-at-zero",
        suite: Suite::System,
        summary: "L^C[f] = (0 x 1)L^C[f]",
    },
];

pub fn find(name: &str) -> Option<&'static Mutant> {
    MUTANTS.iter().find(|m| m.name == name)
}

pub fn names() -> Vec<&'static str> {
    MUTANTS.iter().map(|m| m.name).collect()
}

/// `base` with the combinator named by `mutant` replaced.
pub fn apply<M>(mutant: &Mutant, base: &Combinators<M>) -> Combinators<M>
where
    M: Structure + Send + Sync + 'static,
{
    let mut out = base.clone();
    let d = base.d.clone();
    let l = base.l.clone();
    let sys = base.sys.clone();
    match mutant.name {
        "cd3-zero" => {
            out.d = Arc::new(DifferentialFn(|m: &M, f: &M::Mor| {
                let a = m.dom(f);
                m.zero(&a.doubled(), &m.cod(f))
            }))
        }
        "d-double" => {
            out.d = Arc::new(DifferentialFn(move |m: &M, f: &M::Mor| {
                let df = d.differential(m, f)?;
                m.add(&df, &df)
            }))
        }
        "d-pi1" => {
            out.d = Arc::new(DifferentialFn(|m: &M, f: &M::Mor| {
                let a = m.dom(f);
                m.compose(&m.proj1(&a, &a)?, f)
            }))
        }
        "d-shifted-point" => {
            out.d = Arc::new(DifferentialFn(move |m: &M, f: &M::Mor| {
                let a = m.dom(f);
                let head = m.pair(&m.oplus(&a)?, &m.proj1(&a, &a)?)?;
                m.compose(&head, &d.differential(m, f)?)
            }))
        }
        "d-at-zero" => {
            out.d = Arc::new(DifferentialFn(move |m: &M, f: &M::Mor| {
                let a = m.dom(f);
                let aa = a.doubled();
                let head = m.pair(&m.zero(&aa, &a)?, &m.proj1(&a, &a)?)?;
                m.compose(&head, &d.differential(m, f)?)
            }))
        }
        "d-endpoint" => {
            out.d = Arc::new(DifferentialFn(|m: &M, f: &M::Mor| {
                let a = m.dom(f);
                m.compose(&m.oplus(&a)?, f)
            }))
        }
        "d-squared" => {
            out.d = Arc::new(DifferentialFn(move |m: &M, f: &M::Mor| {
                let a = m.dom(f);
                let aa = a.doubled();
                let df = d.differential(m, f)?;
                let ddf = d.differential(m, &df)?;
                let tail = m.pair(&m.proj1(&a, &a)?, &m.zero(&aa, &a)?)?;
                let head = m.pair(&m.identity(&aa)?, &tail)?;
                m.compose(&head, &ddf)
            }))
        }
        "l-identity" => out.l = Arc::new(LinearizeFn(|_: &M, f: &M::Mor| Ok(f.clone()))),
        "l-plus-const" => {
            out.l = Arc::new(LinearizeFn(move |m: &M, f: &M::Mor| {
                let a = m.dom(f);
                let at_zero = m.compose(&m.zero(&a, &a)?, f)?;
                m.add(&l.linearize(m, f)?, &at_zero)
            }))
        }
        "l-double" => {
            out.l = Arc::new(LinearizeFn(move |m: &M, f: &M::Mor| {
                let lf = l.linearize(m, f)?;
                m.add(&lf, &lf)
            }))
        }
        "lc-ignore-context" => out.sys = Arc::new(IgnoreContext(l)),
        "lc-context-at-zero" => {
            out.sys = Arc::new(SystemFn(move |m: &M, c: &Shape, f: &M::Mor| {
                let a = context_split(m, c, f, "L^C")?;
                let head = m.times(&m.zero(c, c)?, &m.identity(&a)?)?;
                m.compose(&head, &sys.linearize_in(m, c, f)?)
            }))
        }
        other => unreachable!("mutant table and apply disagree on '{other}'"),
    }
    out
}
