//! Smooth maps built from variables, rational constants, `+`, `×`,
//! negation, integer powers, `sin`, `cos` and `exp`, with symbolic
//! directional derivatives. Equality is decided by sampling.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng as _, SeedableRng};

use crate::category::{check_composable, check_same_hom, EqContract, Model};
use crate::combinator::{
    Differential, LinearizeViaD, Linearizing, LinearizingSystem, SystemViaD,
};
use crate::error::{Error, Result};
use crate::expr::{parse, Expr, Func, Layout};
use crate::laws::gen::{first_order_shape, splitmix64};
use crate::laws::runner::{build, Law, Verdict};
use crate::laws::{Generate, Kind, Rng};
use crate::poly::{format_rational, rat, Rational};
use crate::shape::Shape;

#[derive(Clone, Debug, PartialEq)]
pub enum Term {
    Const(Rational),
    Var(usize),
    Add(Arc<Term>, Arc<Term>),
    Mul(Arc<Term>, Arc<Term>),
    Neg(Arc<Term>),
    Pow(Arc<Term>, u32),
    Call(Func, Arc<Term>),
}

pub type T = Arc<Term>;

fn konst(r: Rational) -> T {
    Arc::new(Term::Const(r))
}

pub fn zero() -> T {
    konst(rat(0))
}

pub fn one() -> T {
    konst(rat(1))
}

pub fn var(i: usize) -> T {
    Arc::new(Term::Var(i))
}

pub fn num(r: Rational) -> T {
    konst(r)
}

fn as_const(t: &Term) -> Option<&Rational> {
    match t {
        Term::Const(r) => Some(r),
        _ => None,
    }
}

fn is_zero(t: &Term) -> bool {
    as_const(t).is_some_and(Zero::is_zero)
}

fn is_one(t: &Term) -> bool {
    as_const(t).is_some_and(One::is_one)
}

// Smart constructors fold rational arithmetic and the exact values at 0;
// nothing else is simplified.

pub fn add(a: T, b: T) -> T {
    match (as_const(&a), as_const(&b)) {
        (Some(x), Some(y)) => konst(x + y),
        _ if is_zero(&a) => b,
        _ if is_zero(&b) => a,
        _ => Arc::new(Term::Add(a, b)),
    }
}

pub fn mul(a: T, b: T) -> T {
    match (as_const(&a), as_const(&b)) {
        (Some(x), Some(y)) => konst(x * y),
        _ if is_zero(&a) || is_zero(&b) => zero(),
        _ if is_one(&a) => b,
        _ if is_one(&b) => a,
        _ => Arc::new(Term::Mul(a, b)),
    }
}

pub fn neg(a: T) -> T {
    match &*a {
        Term::Const(x) => konst(-x),
        Term::Neg(inner) => inner.clone(),
        _ => Arc::new(Term::Neg(a)),
    }
}

pub fn pow(a: T, k: u32) -> T {
    match (k, as_const(&a)) {
        (0, _) => one(),
        (1, _) => a,
        (_, Some(x)) => konst(num_traits::pow(x.clone(), k as usize)),
        _ => Arc::new(Term::Pow(a, k)),
    }
}

pub fn call(f: Func, a: T) -> T {
    if is_zero(&a) {
        return match f {
            Func::Sin => zero(),
            Func::Cos | Func::Exp => one(),
        };
    }
    Arc::new(Term::Call(f, a))
}

/// Directional derivative of `t` in `n` variables along `dir`, where `dir[i]`
/// is the term standing for the direction of variable `i`.
fn directional(t: &T, dir: &[T], memo: &mut HashMap<*const Term, T>) -> T {
    let key = Arc::as_ptr(t);
    if let Some(d) = memo.get(&key) {
        return d.clone();
    }
    let d = match &**t {
        Term::Const(_) => zero(),
        Term::Var(i) => dir[*i].clone(),
        Term::Add(a, b) => add(directional(a, dir, memo), directional(b, dir, memo)),
        Term::Mul(a, b) => {
            let da = directional(a, dir, memo);
            let db = directional(b, dir, memo);
            add(mul(da, b.clone()), mul(a.clone(), db))
        }
        Term::Neg(a) => neg(directional(a, dir, memo)),
        Term::Pow(a, k) => {
            let da = directional(a, dir, memo);
            mul(mul(konst(rat(i64::from(*k))), pow(a.clone(), k - 1)), da)
        }
        Term::Call(f, a) => {
            let da = directional(a, dir, memo);
            let outer = match f {
                Func::Sin => call(Func::Cos, a.clone()),
                Func::Cos => neg(call(Func::Sin, a.clone())),
                Func::Exp => t.clone(),
            };
            mul(outer, da)
        }
    };
    memo.insert(key, d.clone());
    d
}

/// Replaces variable `i` by `vals[i]`.
fn substitute(t: &T, vals: &[T], memo: &mut HashMap<*const Term, T>) -> T {
    let key = Arc::as_ptr(t);
    if let Some(d) = memo.get(&key) {
        return d.clone();
    }
    let out = match &**t {
        Term::Const(_) => t.clone(),
        Term::Var(i) => vals[*i].clone(),
        Term::Add(a, b) => add(substitute(a, vals, memo), substitute(b, vals, memo)),
        Term::Mul(a, b) => mul(substitute(a, vals, memo), substitute(b, vals, memo)),
        Term::Neg(a) => neg(substitute(a, vals, memo)),
        Term::Pow(a, k) => pow(substitute(a, vals, memo), *k),
        Term::Call(f, a) => call(*f, substitute(a, vals, memo)),
    };
    memo.insert(key, out.clone());
    out
}

fn eval(t: &T, x: &[f64], memo: &mut HashMap<*const Term, f64>) -> f64 {
    let key = Arc::as_ptr(t);
    if let Some(v) = memo.get(&key) {
        return *v;
    }
    let v = match &**t {
        Term::Const(r) => r.to_f64().unwrap_or(f64::NAN),
        Term::Var(i) => x[*i],
        Term::Add(a, b) => eval(a, x, memo) + eval(b, x, memo),
        Term::Mul(a, b) => eval(a, x, memo) * eval(b, x, memo),
        Term::Neg(a) => -eval(a, x, memo),
        Term::Pow(a, k) => eval(a, x, memo).powi(*k as i32),
        Term::Call(f, a) => {
            let y = eval(a, x, memo);
            match f {
                Func::Sin => y.sin(),
                Func::Cos => y.cos(),
                Func::Exp => y.exp(),
            }
        }
    };
    memo.insert(key, v);
    v
}

fn term_depth(t: &Term) -> usize {
    match t {
        Term::Const(_) | Term::Var(_) => 0,
        Term::Neg(a) | Term::Pow(a, _) | Term::Call(_, a) => 1 + term_depth(a),
        Term::Add(a, b) | Term::Mul(a, b) => 1 + term_depth(a).max(term_depth(b)),
    }
}

/// Prints sums flattened with signs pulled out, and products with their
/// rational coefficient first, then function calls, then the remaining
/// factors, each group in original order.
pub fn display_term(t: &Term, names: &[impl AsRef<str>]) -> String {
    let mut out = String::new();
    let mut summands = Vec::new();
    flatten_sum(t, false, &mut summands);
    for (i, (negated, s)) in summands.iter().enumerate() {
        let (sign, body) = product_text(s, *negated, names);
        match (i, sign) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        out.push_str(&body);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

fn flatten_sum<'t>(t: &'t Term, negated: bool, out: &mut Vec<(bool, &'t Term)>) {
    match t {
        Term::Add(a, b) => {
            flatten_sum(a, negated, out);
            flatten_sum(b, negated, out);
        }
        Term::Neg(a) => flatten_sum(a, !negated, out),
        _ => out.push((negated, t)),
    }
}

fn flatten_product<'t>(t: &'t Term, coeff: &mut Rational, out: &mut Vec<&'t Term>) {
    match t {
        Term::Mul(a, b) => {
            flatten_product(a, coeff, out);
            flatten_product(b, coeff, out);
        }
        Term::Neg(a) => {
            *coeff = -coeff.clone();
            flatten_product(a, coeff, out);
        }
        Term::Const(r) => *coeff *= r,
        _ => out.push(t),
    }
}

/// `(negative, text without sign)`
fn product_text(t: &Term, negated: bool, names: &[impl AsRef<str>]) -> (bool, String) {
    let mut coeff = if negated { rat(-1) } else { rat(1) };
    let mut factors = Vec::new();
    flatten_product(t, &mut coeff, &mut factors);
    let negative = coeff.is_negative();
    let coeff = coeff.abs();
    let calls = factors.iter().filter(|f| matches!(f, Term::Call(..)));
    let rest = factors.iter().filter(|f| !matches!(f, Term::Call(..)));
    let mut parts: Vec<String> = calls.chain(rest).map(|f| factor_text(f, names)).collect();
    if parts.is_empty() || !coeff.is_one() {
        parts.insert(0, format_rational(&coeff));
    }
    (negative, parts.join("*"))
}

fn factor_text(t: &Term, names: &[impl AsRef<str>]) -> String {
    match t {
        Term::Var(i) => names
            .get(*i)
            .map_or_else(|| format!("x{}", i + 1), |n| n.as_ref().to_string()),
        Term::Const(r) => format_rational(r),
        Term::Pow(a, k) => {
            let base = factor_text(a, names);
            if matches!(**a, Term::Var(_) | Term::Call(..)) {
                format!("{base}^{k}")
            } else {
                format!("({base})^{k}")
            }
        }
        Term::Call(f, a) => format!("{}({})", f.name(), display_term(a, names)),
        Term::Add(..) | Term::Neg(_) | Term::Mul(..) => format!("({})", display_term(t, names)),
    }
}

/// A map between first-order shapes given by one term per codomain leaf.
#[derive(Clone, Debug, PartialEq)]
pub struct SmoothMap {
    dom: Shape,
    cod: Shape,
    comps: Vec<T>,
}

impl SmoothMap {
    pub fn new(dom: Shape, cod: Shape, comps: Vec<T>) -> Result<SmoothMap> {
        let n = dom.arity_for("smooth map")?;
        let m = cod.arity_for("smooth map")?;
        if comps.len() != m {
            return Err(Error::Arity {
                expected: m,
                found: comps.len(),
            });
        }
        if let Some(i) = comps.iter().filter_map(|c| max_var(c)).max() {
            if i >= n {
                return Err(Error::Arity {
                    expected: n,
                    found: i + 1,
                });
            }
        }
        Ok(SmoothMap { dom, cod, comps })
    }

    pub fn dom(&self) -> &Shape {
        &self.dom
    }

    pub fn cod(&self) -> &Shape {
        &self.cod
    }

    pub fn comps(&self) -> &[T] {
        &self.comps
    }

    fn nvars(&self) -> usize {
        self.dom.flatten().len()
    }

    pub fn eval(&self, x: &[f64]) -> Result<Vec<f64>> {
        let n = self.nvars();
        if x.len() != n {
            return Err(Error::Arity {
                expected: n,
                found: x.len(),
            });
        }
        let mut memo = HashMap::new();
        Ok(self.comps.iter().map(|c| eval(c, x, &mut memo)).collect())
    }

    pub fn display_with(&self, names: &[impl AsRef<str>]) -> String {
        let parts: Vec<String> = self.comps.iter().map(|c| display_term(c, names)).collect();
        if self.cod == Shape::Ground {
            parts.into_iter().next().unwrap_or_default()
        } else {
            format!("[{}]", parts.join(", "))
        }
    }

    fn depth(&self) -> usize {
        self.comps.iter().map(|c| term_depth(c)).max().unwrap_or(0)
    }
}

fn max_var(t: &Term) -> Option<usize> {
    match t {
        Term::Const(_) => None,
        Term::Var(i) => Some(*i),
        Term::Neg(a) | Term::Pow(a, _) | Term::Call(_, a) => max_var(a),
        Term::Add(a, b) | Term::Mul(a, b) => max_var(a).max(max_var(b)),
    }
}

impl fmt::Display for SmoothMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (1..=self.nvars()).map(|i| format!("x{i}")).collect();
        write!(f, "{} -> {} : {}", self.dom, self.cod, self.display_with(&names))
    }
}

/// Seeded sampling equality: `|a - b| ≤ tolerance · max(1, |a|, |b|)` at
/// `points` points drawn uniformly from `[lo, hi]` in every variable.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SampledEq {
    pub tolerance: f64,
    pub points: usize,
    pub seed: u64,
    pub lo: f64,
    pub hi: f64,
}

impl Default for SampledEq {
    fn default() -> Self {
        SampledEq {
            tolerance: 1e-6,
            points: 100,
            seed: 0x5eed,
            lo: -1.0,
            hi: 1.0,
        }
    }
}

impl SampledEq {
    /// Point `i` in `n` variables; a function of `(seed, n, i)` only.
    pub fn point(&self, n: usize, i: usize) -> Vec<f64> {
        let mut rng = Rng::seed_from_u64(splitmix64(self.seed ^ splitmix64(((n as u64) << 32) ^ i as u64)));
        (0..n).map(|_| rng.random_range(self.lo..=self.hi)).collect()
    }

    pub fn close(&self, a: f64, b: f64) -> bool {
        (a - b).abs() <= self.tolerance * 1f64.max(a.abs()).max(b.abs())
    }

    /// Largest scaled deviation over the sample, or an error when too many
    /// points evaluate to non-finite values.
    pub fn deviation(
        &self,
        n: usize,
        f: impl Fn(&[f64]) -> Result<Vec<f64>>,
        g: impl Fn(&[f64]) -> Result<Vec<f64>>,
    ) -> Result<f64> {
        let mut worst = 0f64;
        let mut good = 0;
        let mut tried = 0;
        while good < self.points {
            if tried >= 5 * self.points.max(1) {
                return Err(Error::Sampling(format!(
                    "only {good} of {} points gave finite values",
                    self.points
                )));
            }
            let x = self.point(n, tried);
            tried += 1;
            let (a, b) = (f(&x)?, g(&x)?);
            if a.iter().chain(&b).any(|v| !v.is_finite()) {
                continue;
            }
            good += 1;
            for (u, v) in a.iter().zip(&b) {
                worst = worst.max((u - v).abs() / 1f64.max(u.abs()).max(v.abs()));
            }
        }
        Ok(worst)
    }

    pub fn maps_eq(&self, f: &SmoothMap, g: &SmoothMap) -> Result<bool> {
        let n = f.nvars();
        Ok(self.deviation(n, |x| f.eval(x), |x| g.eval(x))? <= self.tolerance)
    }
}

/// Smooth maps with sampled equality.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SmoothModel {
    pub sample: SampledEq,
    pub max_leaves: usize,
    /// Generated terms nest at most this deep.
    pub max_depth: usize,
}

impl Default for SmoothModel {
    fn default() -> Self {
        SmoothModel {
            sample: SampledEq::default(),
            max_leaves: 3,
            max_depth: 4,
        }
    }
}

impl SmoothModel {
    fn map(&self, dom: &Shape, cod: &Shape, comp: impl Fn(usize) -> T) -> Result<SmoothMap> {
        let m = cod.arity_for("smooth map")?;
        dom.arity_for("smooth map")?;
        Ok(SmoothMap {
            dom: dom.clone(),
            cod: cod.clone(),
            comps: (0..m).map(comp).collect(),
        })
    }

    /// `D[f](x, y) = Σᵢ ∂ᵢf(x)·yᵢ`, computed symbolically.
    pub fn differential(&self, f: &SmoothMap) -> SmoothMap {
        let n = f.nvars();
        let dir: Vec<T> = (n..2 * n).map(var).collect();
        let mut memo = HashMap::new();
        SmoothMap {
            dom: f.dom.doubled(),
            cod: f.cod.clone(),
            comps: f.comps.iter().map(|c| directional(c, &dir, &mut memo)).collect(),
        }
    }

    /// `⟨0, 1⟩D[f]`, folded at 0.
    pub fn linearize(&self, f: &SmoothMap) -> Result<SmoothMap> {
        LinearizeViaD(SmoothD).linearize(self, f)
    }

    pub fn sampled_eq(&self, f: &SmoothMap, g: &SmoothMap, cfg: &SampledEq) -> Result<bool> {
        check_same_hom(self, "sampled_eq", f, g)?;
        cfg.maps_eq(f, g)
    }

    fn gen_term(&self, rng: &mut Rng, vars: &[usize], depth: usize) -> T {
        let leaf = |rng: &mut Rng| {
            if !vars.is_empty() && rng.random_bool(0.7) {
                var(vars[rng.random_range(0..vars.len())])
            } else {
                num(rat(rng.random_range(-2..=2)))
            }
        };
        if depth == 0 || rng.random_bool(0.25) {
            return leaf(rng);
        }
        match rng.random_range(0..7) {
            0 | 1 => add(
                self.gen_term(rng, vars, depth - 1),
                self.gen_term(rng, vars, depth - 1),
            ),
            2 | 3 => mul(
                self.gen_term(rng, vars, depth - 1),
                self.gen_term(rng, vars, depth - 1),
            ),
            4 => neg(self.gen_term(rng, vars, depth - 1)),
            5 => pow(self.gen_term(rng, vars, depth - 1), rng.random_range(2..=3)),
            _ => {
                let trig = [Func::Sin, Func::Cos][rng.random_range(0..2)];
                if depth >= 2 && rng.random_bool(0.4) {
                    // exp only of a bounded argument, so that composites
                    // stay finite whatever is substituted into them
                    let inner = call(trig, self.gen_term(rng, vars, depth - 2));
                    call(Func::Exp, inner)
                } else {
                    call(trig, self.gen_term(rng, vars, depth - 1))
                }
            }
        }
    }

    /// A random term in `n` variables of depth at most `depth`.
    pub fn random_term(&self, rng: &mut Rng, n: usize, depth: usize) -> T {
        let vars: Vec<usize> = (0..n).collect();
        self.gen_term(rng, &vars, depth)
    }
}

impl Model for SmoothModel {
    type Mor = SmoothMap;

    fn name(&self) -> &'static str {
        "smooth"
    }

    fn dom(&self, f: &SmoothMap) -> Shape {
        f.dom.clone()
    }

    fn cod(&self, f: &SmoothMap) -> Shape {
        f.cod.clone()
    }

    fn identity(&self, a: &Shape) -> Result<SmoothMap> {
        self.map(a, a, var)
    }

    fn compose(&self, f: &SmoothMap, g: &SmoothMap) -> Result<SmoothMap> {
        check_composable(self, f, g)?;
        let mut memo = HashMap::new();
        Ok(SmoothMap {
            dom: f.dom.clone(),
            cod: g.cod.clone(),
            comps: g.comps.iter().map(|c| substitute(c, &f.comps, &mut memo)).collect(),
        })
    }

    fn pair(&self, f: &SmoothMap, g: &SmoothMap) -> Result<SmoothMap> {
        if f.dom != g.dom {
            return Err(Error::mismatch("pair", &f.dom, &g.dom));
        }
        Ok(SmoothMap {
            dom: f.dom.clone(),
            cod: Shape::prod(f.cod.clone(), g.cod.clone()),
            comps: f.comps.iter().chain(&g.comps).cloned().collect(),
        })
    }

    fn proj0(&self, a: &Shape, b: &Shape) -> Result<SmoothMap> {
        self.map(&Shape::prod(a.clone(), b.clone()), a, var)
    }

    fn proj1(&self, a: &Shape, b: &Shape) -> Result<SmoothMap> {
        let na = a.arity_for("smooth map")?;
        self.map(&Shape::prod(a.clone(), b.clone()), b, |i| var(na + i))
    }

    fn add(&self, f: &SmoothMap, g: &SmoothMap) -> Result<SmoothMap> {
        check_same_hom(self, "add", f, g)?;
        Ok(SmoothMap {
            dom: f.dom.clone(),
            cod: f.cod.clone(),
            comps: f
                .comps
                .iter()
                .zip(&g.comps)
                .map(|(a, b)| add(a.clone(), b.clone()))
                .collect(),
        })
    }

    fn zero(&self, a: &Shape, b: &Shape) -> Result<SmoothMap> {
        self.map(a, b, |_| zero())
    }

    fn equal(&self, f: &SmoothMap, g: &SmoothMap) -> Result<bool> {
        self.sampled_eq(f, g, &self.sample)
    }

    fn contract(&self) -> EqContract {
        EqContract::Sampled {
            tolerance: self.sample.tolerance,
            points: self.sample.points,
        }
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct SmoothD;

impl Differential<SmoothModel> for SmoothD {
    fn differential(&self, m: &SmoothModel, f: &SmoothMap) -> Result<SmoothMap> {
        Ok(m.differential(f))
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct SmoothL;

impl Linearizing<SmoothModel> for SmoothL {
    fn linearize(&self, m: &SmoothModel, f: &SmoothMap) -> Result<SmoothMap> {
        m.linearize(f)
    }
}

/// `L^C = ℓD`.
#[derive(Clone, Copy, Debug, Default)]
pub struct SmoothLsys;

impl LinearizingSystem<SmoothModel> for SmoothLsys {
    fn linearize_in(&self, m: &SmoothModel, context: &Shape, f: &SmoothMap) -> Result<SmoothMap> {
        SystemViaD(SmoothD).linearize_in(m, context, f)
    }
}

impl Generate for SmoothModel {
    fn gen_shape(&self, rng: &mut Rng, max_leaves: usize) -> Shape {
        first_order_shape(rng, max_leaves.min(self.max_leaves))
    }

    fn gen_mor(
        &self,
        rng: &mut Rng,
        context: Option<&Shape>,
        a: &Shape,
        b: &Shape,
        kind: Kind,
    ) -> Result<SmoothMap> {
        let nc = context.map_or(Ok(0), |c| c.arity_for("smooth map"))?;
        let na = a.arity_for("smooth map")?;
        let m = b.arity_for("smooth map")?;
        let dom = match context {
            Some(c) => Shape::prod(c.clone(), a.clone()),
            None => a.clone(),
        };
        let ctx_vars: Vec<usize> = (0..nc).collect();
        let all_vars: Vec<usize> = (0..nc + na).collect();
        let d = self.max_depth;
        let comps = (0..m)
            .map(|_| match kind {
                Kind::Any => self.gen_term(rng, &all_vars, d),
                Kind::Constant => self.gen_term(rng, &ctx_vars, d),
                Kind::Reduced => {
                    // g(c, a) - g(c, 0)
                    let g = self.gen_term(rng, &all_vars, d);
                    let at_zero: Vec<T> = (0..nc + na)
                        .map(|i| if i < nc { var(i) } else { zero() })
                        .collect();
                    let g0 = substitute(&g, &at_zero, &mut HashMap::new());
                    add(g, neg(g0))
                }
                Kind::Additive | Kind::SemiAdditive => (0..na).fold(zero(), |acc, j| {
                    let coeff = if rng.random_bool(0.3) {
                        zero()
                    } else {
                        self.gen_term(rng, &ctx_vars, d.saturating_sub(1))
                    };
                    add(acc, mul(coeff, var(nc + j)))
                }),
            })
            .collect();
        Ok(SmoothMap {
            dom,
            cod: b.clone(),
            comps,
        })
    }

    fn shrink(&self, f: &SmoothMap) -> Vec<SmoothMap> {
        let mut out = Vec::new();
        for (i, c) in f.comps.iter().enumerate() {
            let children: Vec<T> = match &**c {
                Term::Const(r) if !r.is_zero() => vec![zero()],
                Term::Const(_) => vec![],
                Term::Var(_) => vec![zero()],
                Term::Neg(a) | Term::Pow(a, _) | Term::Call(_, a) => vec![zero(), a.clone()],
                Term::Add(a, b) | Term::Mul(a, b) => vec![zero(), a.clone(), b.clone()],
            };
            for child in children {
                let mut g = f.clone();
                g.comps[i] = child;
                out.push(g);
            }
        }
        out
    }
}

fn to_term(e: &Expr, layout: &Layout) -> Result<T> {
    Ok(match e {
        Expr::Num(r) => num(r.clone()),
        Expr::Var(v, _) => var(layout
            .index(v)
            .ok_or_else(|| Error::Invalid(format!("unknown variable '{v}'")))?),
        Expr::Neg(a) => neg(to_term(a, layout)?),
        Expr::Add(a, b) => add(to_term(a, layout)?, to_term(b, layout)?),
        Expr::Sub(a, b) => add(to_term(a, layout)?, neg(to_term(b, layout)?)),
        Expr::Mul(a, b) => mul(to_term(a, layout)?, to_term(b, layout)?),
        Expr::Pow(a, k) => pow(to_term(a, layout)?, *k),
        Expr::Call(f, a) => call(*f, to_term(a, layout)?),
    })
}

/// Parses a smooth map in the shared expression grammar.
pub fn parse_smooth_map(src: &str, extra_ctx: &[String]) -> Result<(SmoothMap, Layout)> {
    let parsed = parse(src)?;
    let layout = parsed.layout(extra_ctx)?;
    let comps = parsed
        .body
        .iter()
        .map(|e| to_term(e, &layout))
        .collect::<Result<Vec<_>>>()?;
    let cod = if parsed.tuple {
        Shape::ground_power(comps.len())
    } else {
        Shape::Ground
    };
    let map = SmoothMap::new(layout.dom(), cod, comps)?;
    Ok((map, layout))
}

/// Symbolic `D[f]` against central differences `(f(x + hy) − f(x − hy))/2h`
/// at every sample point.
pub fn finite_difference_deviation(m: &SmoothModel, f: &SmoothMap, h: f64) -> Result<f64> {
    let n = f.nvars();
    let df = m.differential(f);
    let fd = |xy: &[f64]| -> Result<Vec<f64>> {
        let (x, y) = xy.split_at(n);
        let plus: Vec<f64> = x.iter().zip(y).map(|(a, b)| a + h * b).collect();
        let minus: Vec<f64> = x.iter().zip(y).map(|(a, b)| a - h * b).collect();
        let (fp, fm) = (f.eval(&plus)?, f.eval(&minus)?);
        Ok(fp.iter().zip(&fm).map(|(p, q)| (p - q) / (2.0 * h)).collect())
    };
    m.sample.deviation(2 * n, |xy| df.eval(xy), fd)
}

/// Symbolic differentiation against central finite differences.
pub fn smooth_laws<'a>(step: f64, tolerance: f64) -> Vec<Law<'a, SmoothModel>> {
    vec![Law::new(
        "SM.fd",
        |m: &SmoothModel, rng: &mut Rng| {
            build(m, rng, |b| {
                let s = b.shapes(2, 4);
                b.mor(&s[0], &s[1])?;
                Ok(())
            })
        },
        move |m: &SmoothModel, inst| {
            let f = inst.mor(0);
            let dev = finite_difference_deviation(m, f, step)?;
            if dev <= tolerance {
                Ok(Verdict::Pass)
            } else {
                Ok(Verdict::Fail(format!(
                    "D[f] deviates from central differences by {dev:e} (depth {})",
                    f.depth()
                )))
            }
        },
    )]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::Structure;

    fn smooth(src: &str) -> (SmoothMap, Layout) {
        parse_smooth_map(src, &[]).unwrap()
    }

    fn show_d(src: &str) -> String {
        let (f, layout) = smooth(src);
        let m = SmoothModel::default();
        let mut names = layout.names();
        names.extend(layout.direction_names());
        m.differential(&f).display_with(&names)
    }

    #[test]
    fn worked_derivative() {
        assert_eq!(
            show_d("exp(x)*cos(y)"),
            "exp(x)*cos(y)*z - exp(x)*sin(y)*w"
        );
        assert_eq!(show_d("x^3+x"), "3*x^2*y + y");
        assert_eq!(show_d("5"), "0");
    }

    #[test]
    fn linearization_folds_values_at_zero() {
        let m = SmoothModel::default();
        for (src, want) in [("exp(x)*cos(y)", "x"), ("sin(x)", "x"), ("exp(x)", "x")] {
            let (f, layout) = smooth(src);
            assert_eq!(m.linearize(&f).unwrap().display_with(&layout.names()), want, "{src}");
        }
    }

    #[test]
    fn product_rule_against_finite_differences() {
        let m = SmoothModel::default();
        let (f, _) = smooth("sin(x)*x");
        let (want, _) = smooth("args(x, y) (cos(x)*x + sin(x))*y");
        assert!(m.equal(&m.differential(&f), &want).unwrap());
        let cfg = SampledEq {
            points: 20,
            ..SampledEq::default()
        };
        let model = SmoothModel { sample: cfg, ..m };
        assert!(finite_difference_deviation(&model, &f, 1e-5).unwrap() < 1e-6);
    }

    #[test]
    fn sampled_equality() {
        let m = SmoothModel::default();
        let tight = SampledEq {
            tolerance: 1e-9,
            ..SampledEq::default()
        };
        let (a, _) = smooth("sin(x)^2 + cos(x)^2");
        let (b, _) = smooth("args(x) 1");
        assert!(m.sampled_eq(&a, &b, &tight).unwrap());
        let (x, _) = smooth("x");
        let (bumped, _) = smooth("x + 1/1000*x^2");
        assert!(!m.sampled_eq(&x, &bumped, &SampledEq::default()).unwrap());
        assert!(m.sampled_eq(&bumped, &bumped, &tight).unwrap());
    }

    #[test]
    fn non_finite_points_give_up() {
        let (f, _) = smooth("exp(exp(exp(exp(9*x))))");
        let cfg = SampledEq {
            lo: 5.0,
            hi: 6.0,
            ..SampledEq::default()
        };
        assert!(matches!(cfg.maps_eq(&f, &f), Err(Error::Sampling(_))));
    }

    #[test]
    fn composition_substitutes() {
        let m = SmoothModel::default();
        let (f, _) = smooth("[sin(x), x^2]");
        let (g, _) = smooth("args(a, b) a*b");
        let fg = m.compose(&f, &g).unwrap();
        assert_eq!(fg.display_with(&["x"]), "sin(x)*x^2");
        let a = Shape::Ground;
        assert!(m.equal(&m.compose(&m.sym(&a, &a).unwrap(), &m.sym(&a, &a).unwrap()).unwrap(),
            &m.identity(&a.doubled()).unwrap()).unwrap());
    }
}
