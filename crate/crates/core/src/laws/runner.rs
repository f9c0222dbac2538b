//! Law definitions and the seeded, parallel case runner.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rayon::prelude::*;

use super::gen::{case_rng, Constraint, Generate, Kind, Rng};
use super::report::{one_line, LawReport, Status};
use crate::category::Model;
use crate::error::Result;
use crate::shape::Shape;

/// Result of checking one instance.
#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    Pass,
    Fail(String),
}

impl Verdict {
    pub fn is_pass(&self) -> bool {
        matches!(self, Verdict::Pass)
    }

    /// First failure wins.
    pub fn and(self, other: impl FnOnce() -> Result<Verdict>) -> Result<Verdict> {
        match self {
            Verdict::Pass => other(),
            fail => Ok(fail),
        }
    }
}

/// A generated test case: the shapes and maps a law is instantiated at.
#[derive(Clone, Debug)]
pub struct Instance<F> {
    pub shapes: Vec<Shape>,
    pub mors: Vec<F>,
    pub constraints: Vec<Constraint>,
}

impl<F> Default for Instance<F> {
    fn default() -> Self {
        Instance {
            shapes: Vec::new(),
            mors: Vec::new(),
            constraints: Vec::new(),
        }
    }
}

impl<F: Clone> Instance<F> {
    pub fn shape(&self, i: usize) -> &Shape {
        &self.shapes[i]
    }

    pub fn mor(&self, i: usize) -> &F {
        &self.mors[i]
    }
}

/// Accumulates the shapes and maps of one instance while generating it.
pub struct Builder<'a, M: Generate> {
    pub model: &'a M,
    pub rng: &'a mut Rng,
    inst: Instance<M::Mor>,
}

impl<'a, M: Generate> Builder<'a, M> {
    pub fn new(model: &'a M, rng: &'a mut Rng) -> Self {
        Builder {
            model,
            rng,
            inst: Instance::default(),
        }
    }

    /// A fresh random shape with at most `max_leaves` leaves.
    pub fn shape(&mut self, max_leaves: usize) -> Shape {
        let s = self.model.gen_shape(self.rng, max_leaves);
        self.inst.shapes.push(s.clone());
        s
    }

    /// `n` fresh shapes sharing a budget of `total` leaves, drawn in random
    /// order so no position is favoured.
    pub fn shapes(&mut self, n: usize, total: usize) -> Vec<Shape> {
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(self.rng);
        let mut out = vec![Shape::Unit; n];
        let mut left = total;
        for i in order {
            let s = self.model.gen_shape(self.rng, left);
            left -= s.arity().unwrap_or(0).min(left);
            out[i] = s;
        }
        self.inst.shapes.extend(out.iter().cloned());
        out
    }

    /// Records a shape chosen by the law itself.
    pub fn fixed_shape(&mut self, s: Shape) -> Shape {
        self.inst.shapes.push(s.clone());
        s
    }

    pub fn mor(&mut self, a: &Shape, b: &Shape) -> Result<M::Mor> {
        self.mor_of(None, a, b, Kind::Any)
    }

    pub fn mor_kind(&mut self, a: &Shape, b: &Shape, kind: Kind) -> Result<M::Mor> {
        self.mor_of(None, a, b, kind)
    }

    /// A map `C × A → B` of the given kind in the `A` block.
    pub fn mor_of(
        &mut self,
        context: Option<&Shape>,
        a: &Shape,
        b: &Shape,
        kind: Kind,
    ) -> Result<M::Mor> {
        let f = self.model.gen_mor(self.rng, context, a, b, kind)?;
        self.inst.mors.push(f.clone());
        self.inst.constraints.push(Constraint {
            context: context.cloned(),
            kind,
        });
        Ok(f)
    }

    pub fn finish(self) -> Option<Instance<M::Mor>> {
        Some(self.inst)
    }
}

/// Runs `f` against a fresh builder and returns the instance it recorded.
pub fn build<M: Generate>(
    m: &M,
    rng: &mut Rng,
    f: impl FnOnce(&mut Builder<'_, M>) -> Result<()>,
) -> Result<Option<Instance<M::Mor>>> {
    let mut b = Builder::new(m, rng);
    f(&mut b)?;
    Ok(b.finish())
}

type GenFn<'a, M> =
    Box<dyn Fn(&M, &mut Rng) -> Result<Option<Instance<<M as Model>::Mor>>> + Send + Sync + 'a>;
type CheckFn<'a, M> =
    Box<dyn Fn(&M, &Instance<<M as Model>::Mor>) -> Result<Verdict> + Send + Sync + 'a>;

/// One checkable equation family: how to generate an instance, and how to
/// decide it.
pub struct Law<'a, M: Model> {
    pub id: String,
    generate: GenFn<'a, M>,
    check: CheckFn<'a, M>,
}

impl<'a, M: Model> Law<'a, M> {
    pub fn new(
        id: impl Into<String>,
        generate: impl Fn(&M, &mut Rng) -> Result<Option<Instance<M::Mor>>> + Send + Sync + 'a,
        check: impl Fn(&M, &Instance<M::Mor>) -> Result<Verdict> + Send + Sync + 'a,
    ) -> Self {
        Law {
            id: id.into(),
            generate: Box::new(generate),
            check: Box::new(check),
        }
    }

    /// Renames the law, keeping its behaviour.
    pub fn with_id(mut self, id: impl Into<String>) -> Self {
        self.id = id.into();
        self
    }

    pub fn generate(&self, m: &M, rng: &mut Rng) -> Result<Option<Instance<M::Mor>>> {
        (self.generate)(m, rng)
    }

    /// Evaluates the law; combinator errors count as failures.
    pub fn check(&self, m: &M, inst: &Instance<M::Mor>) -> Verdict {
        match (self.check)(m, inst) {
            Ok(v) => v,
            Err(e) => Verdict::Fail(format!("error: {e}")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub seed: u64,
    pub budget: usize,
    /// Minimize counterexamples before reporting.
    pub shrink: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 42,
            budget: 500,
            shrink: true,
        }
    }
}

/// `lhs = rhs` under the model's equality, with a labelled failure.
pub fn check_eq<M: Model + ?Sized>(
    m: &M,
    label: &str,
    lhs: &M::Mor,
    rhs: &M::Mor,
) -> Result<Verdict> {
    if m.equal(lhs, rhs)? {
        Ok(Verdict::Pass)
    } else {
        Ok(Verdict::Fail(format!("{label}: {lhs} != {rhs}")))
    }
}

/// Checks each labelled equation in order, stopping at the first failure.
pub fn check_all<M: Model + ?Sized>(m: &M, eqs: &[(&str, M::Mor, M::Mor)]) -> Result<Verdict> {
    for (label, lhs, rhs) in eqs {
        if let Verdict::Fail(msg) = check_eq(m, label, lhs, rhs)? {
            return Ok(Verdict::Fail(msg));
        }
    }
    Ok(Verdict::Pass)
}

enum Outcome<F> {
    Skipped,
    Passed,
    Failed(Instance<F>, String),
}

fn run_case<M: Model>(m: &M, law: &Law<'_, M>, seed: u64, case: usize) -> Outcome<M::Mor> {
    let mut rng = case_rng(seed, &law.id, case);
    match law.generate(m, &mut rng) {
        Ok(None) => Outcome::Skipped,
        Err(e) => Outcome::Failed(Instance::default(), format!("generator error: {e}")),
        Ok(Some(inst)) => match law.check(m, &inst) {
            Verdict::Pass => Outcome::Passed,
            Verdict::Fail(msg) => Outcome::Failed(inst, msg),
        },
    }
}

const SHRINK_STEPS: usize = 64;

/// Greedy minimization: replace one map at a time by a smaller candidate
/// that still meets its generation constraint and still fails.
fn shrink<M: Generate>(
    m: &M,
    law: &Law<'_, M>,
    mut inst: Instance<M::Mor>,
    mut msg: String,
) -> (Instance<M::Mor>, String) {
    let mut steps = 0;
    'outer: while steps < SHRINK_STEPS {
        for i in 0..inst.mors.len() {
            for cand in m.shrink(&inst.mors[i]) {
                steps += 1;
                if steps >= SHRINK_STEPS {
                    break 'outer;
                }
                if !inst.constraints[i].holds(m, &cand).unwrap_or(false) {
                    continue;
                }
                let mut next = inst.clone();
                next.mors[i] = cand;
                if let Verdict::Fail(next_msg) = law.check(m, &next) {
                    inst = next;
                    msg = next_msg;
                    continue 'outer;
                }
            }
        }
        break;
    }
    (inst, msg)
}

fn describe<F: std::fmt::Display>(inst: &Instance<F>, msg: &str) -> String {
    let mut out = msg.to_string();
    if !inst.mors.is_empty() {
        let names = ["f", "g", "h", "k", "p", "q"];
        let args: Vec<String> = inst
            .mors
            .iter()
            .enumerate()
            .map(|(i, f)| format!("{}={f}", names.get(i).copied().unwrap_or("m")))
            .collect();
        out.push_str(" | ");
        out.push_str(&args.join("; "));
    }
    one_line(&out)
}

/// Runs `cfg.budget` cases of `law`. Every case is evaluated (no fail-fast);
/// the reported failure is the lowest failing case index, so the result does
/// not depend on scheduling.
pub fn check_law<M: Generate>(m: &M, law: &Law<'_, M>, cfg: &RunConfig) -> LawReport {
    let outcomes: Vec<Outcome<M::Mor>> = (0..cfg.budget)
        .into_par_iter()
        .map(|case| run_case(m, law, cfg.seed, case))
        .collect();

    let mut cases = 0;
    let mut failure = None;
    for (idx, out) in outcomes.into_iter().enumerate() {
        match out {
            Outcome::Skipped => {}
            Outcome::Passed => cases += 1,
            Outcome::Failed(inst, msg) => {
                cases += 1;
                if failure.is_none() {
                    failure = Some((idx, inst, msg));
                }
            }
        }
    }

    let mut report = LawReport {
        law: law.id.clone(),
        model: m.name().to_string(),
        seed: cfg.seed,
        cases,
        status: if cases == 0 { Status::Skip } else { Status::Pass },
        eq: m.contract(),
        case: None,
        counterexample: None,
    };
    if let Some((idx, inst, msg)) = failure {
        let (inst, msg) = if cfg.shrink {
            shrink(m, law, inst, msg)
        } else {
            (inst, msg)
        };
        report.status = Status::Fail;
        report.case = Some(idx);
        report.counterexample = Some(describe(&inst, &msg));
    }
    report
}

/// Re-derives the failing case of a report from its seed and case index and
/// re-checks it. Returns the regenerated counterexample text, or `None` if
/// the case now passes.
pub fn replay<M: Generate>(
    m: &M,
    law: &Law<'_, M>,
    report: &LawReport,
    shrink_it: bool,
) -> Option<String> {
    let case = report.case?;
    match run_case(m, law, report.seed, case) {
        Outcome::Failed(inst, msg) => {
            let (inst, msg) = if shrink_it {
                shrink(m, law, inst, msg)
            } else {
                (inst, msg)
            };
            Some(describe(&inst, &msg))
        }
        _ => None,
    }
}

/// Runs every law in order.
pub fn check_laws<M: Generate>(m: &M, laws: &[Law<'_, M>], cfg: &RunConfig) -> Vec<LawReport> {
    laws.iter().map(|law| check_law(m, law, cfg)).collect()
}

type RunFn<'a> = Box<dyn Fn(&RunConfig) -> LawReport + Send + Sync + 'a>;
type ReplayFn<'a> = Box<dyn Fn(&LawReport, bool) -> Option<String> + Send + Sync + 'a>;

/// A law bound to the model instance it runs on. Suites mix laws over the
/// base model and over slices of it, so they are erased to this form.
pub struct Check<'a> {
    pub id: String,
    run: RunFn<'a>,
    replay: ReplayFn<'a>,
}

impl<'a> Check<'a> {
    pub fn bind<M: Generate + 'a>(model: M, law: Law<'a, M>) -> Check<'a> {
        let id = law.id.clone();
        let shared = Arc::new((model, law));
        let for_replay = Arc::clone(&shared);
        Check {
            id,
            run: Box::new(move |cfg| check_law(&shared.0, &shared.1, cfg)),
            replay: Box::new(move |r, s| replay(&for_replay.0, &for_replay.1, r, s)),
        }
    }

    pub fn run(&self, cfg: &RunConfig) -> LawReport {
        (self.run)(cfg)
    }

    /// See [`replay`].
    pub fn replay(&self, report: &LawReport, shrink: bool) -> Option<String> {
        (self.replay)(report, shrink)
    }
}

/// Binds every law to clones of one model.
pub fn bind_all<'a, M: Generate + Clone + 'a>(model: &M, laws: Vec<Law<'a, M>>) -> Vec<Check<'a>> {
    laws.into_iter()
        .map(|law| Check::bind(model.clone(), law))
        .collect()
}
