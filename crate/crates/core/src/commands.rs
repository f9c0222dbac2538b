//! The operations behind the command-line front end, returning printable
//! results so they can be checked without a process boundary.

use crate::biproduct::{BiproductModel, MatrixMap};
use crate::closed::{parse_closed_term, ClosedModel, Definitions, Value};
use crate::combinator::LinearizingSystem;
use crate::error::{Error, Result};
use crate::expr::{parse_poly_map, Layout};
use crate::poly::{PolyMap, PolyModel};
use crate::shape::Shape;
use crate::smooth::{parse_smooth_map, SmoothLsys, SmoothModel};
use crate::suites::ModelId;
use crate::tower::tower_of;

fn ctx_shape(layout: &Layout) -> Shape {
    Shape::ground_power(layout.ctx.len())
}

fn with_directions(names: Vec<String>) -> Vec<String> {
    let layout = Layout {
        ctx: Vec::new(),
        args: names,
    };
    let mut all = layout.args.clone();
    all.extend(layout.direction_names());
    all
}

fn needs_first_order(model: ModelId, what: &str) -> Error {
    Error::Invalid(format!(
        "{what} is not available for the {model} model; use the closed subcommand"
    ))
}

/// `D[f]` in canonical form, over variables followed by directions.
pub fn diff(model: ModelId, src: &str) -> Result<String> {
    match model {
        ModelId::Poly | ModelId::Tower => {
            let (f, layout) = parse_poly_map(src, &[])?;
            let d = PolyModel::new().differential(&f)?;
            Ok(d.display_with(&with_directions(layout.names())))
        }
        ModelId::Smooth => {
            let (f, layout) = parse_smooth_map(src, &[])?;
            let d = SmoothModel::default().differential(&f);
            Ok(d.display_with(&with_directions(layout.names())))
        }
        ModelId::Biproduct => {
            let f = MatrixMap::parse(src)?;
            Ok(BiproductModel::default().differential(&f).literal())
        }
        ModelId::Closed => Err(needs_first_order(model, "diff")),
    }
}

/// The total linearization `L[f]`.
pub fn lin(model: ModelId, src: &str) -> Result<String> {
    match model {
        ModelId::Poly | ModelId::Tower => {
            let (f, layout) = parse_poly_map(src, &[])?;
            Ok(PolyModel::new().linearize(&f).display_with(&layout.names()))
        }
        ModelId::Smooth => {
            let (f, layout) = parse_smooth_map(src, &[])?;
            Ok(SmoothModel::default().linearize(&f)?.display_with(&layout.names()))
        }
        ModelId::Biproduct => Ok(MatrixMap::parse(src)?.literal()),
        ModelId::Closed => Err(needs_first_order(model, "lin")),
    }
}

/// The partial linearization `L^C[f]` with `ctx` naming the context
/// variables.
pub fn plin(model: ModelId, src: &str, ctx: &[String]) -> Result<String> {
    match model {
        ModelId::Poly | ModelId::Tower => {
            let (f, layout) = parse_poly_map(src, ctx)?;
            let l = PolyModel::new().partial_linearize(&ctx_shape(&layout), &f)?;
            Ok(l.display_with(&layout.names()))
        }
        ModelId::Smooth => {
            let (f, layout) = parse_smooth_map(src, ctx)?;
            let l = SmoothLsys.linearize_in(&SmoothModel::default(), &ctx_shape(&layout), &f)?;
            Ok(l.display_with(&layout.names()))
        }
        ModelId::Biproduct => Err(Error::Invalid(
            "plin on matrices takes no variable names; the biproduct model only supports diff and lin".into(),
        )),
        ModelId::Closed => Err(needs_first_order(model, "plin")),
    }
}

/// The entries `f, D[f], …, Dᵏ[f]` of the canonical tower of a polynomial,
/// one per line.
pub fn tower(src: &str, depth: usize) -> Result<Vec<String>> {
    let (f, layout) = parse_poly_map(src, &[])?;
    let t = tower_of(&f, depth)?;
    let mut names = layout.names();
    let mut out = Vec::new();
    for (k, e) in t.entries().iter().enumerate() {
        if k > 0 {
            names = with_directions(names);
        }
        out.push(format!("D^{k}: {}", e.display_with(&names)));
    }
    Ok(out)
}

/// Evaluates a closed combinator term at a point of its domain.
/// `defs` are `name=expr` smooth maps the term may refer to.
pub fn closed_eval(defs: &[String], term: &str, at: &[f64]) -> Result<String> {
    let mut table = Definitions::default();
    for d in defs {
        table.define_assignment(d)?;
    }
    let t = parse_closed_term(term)?;
    let f = t.build(&ClosedModel::default(), &table)?;
    let v = f.apply(&Value::from_reals(f.dom(), at)?)?;
    Ok(v.to_string())
}

/// The worked interchange example: `f(x, y) = xy + 2xy³ + 3x + 4y`
/// linearized in one variable at a time, in both orders.
pub struct Interchange {
    pub f: String,
    pub total: String,
    pub l0: String,
    pub l1: String,
    pub l1_l0: String,
    pub l0_l1: String,
}

pub const INTERCHANGE_SOURCE: &str = "x*y + 2*x*y^3 + 3*x + 4*y";

pub fn interchange() -> Result<Interchange> {
    let m = PolyModel::new();
    let names = ["x", "y"];
    let plane = Shape::ground().doubled();
    // Linearizes in variable `i` of a map of (x, y), holding the other one
    // as context. The context variable is moved to the front and back.
    let lin_in = |f: &PolyMap, i: usize| -> Result<PolyMap> {
        let order: &[usize] = if i == 0 { &[1, 0] } else { &[0, 1] };
        let moved = m.map_components(f, |p| p.rename(2, order));
        let l = m.partial_linearize(&Shape::Ground, &moved)?;
        Ok(m.map_components(&l, |p| p.rename(2, order)))
    };
    let (f, _) = parse_poly_map(&format!("args(x, y) {INTERCHANGE_SOURCE}"), &[])?;
    let f = f.retype(plane, Shape::Ground)?;
    let l0 = lin_in(&f, 0)?;
    let l1 = lin_in(&f, 1)?;
    let show = |g: &PolyMap| g.display_with(&names);
    Ok(Interchange {
        f: show(&f),
        total: show(&m.linearize(&f)),
        l1_l0: show(&lin_in(&l0, 1)?),
        l0_l1: show(&lin_in(&l1, 0)?),
        l0: show(&l0),
        l1: show(&l1),
    })
}

pub fn interchange_report() -> Result<String> {
    let ex = interchange()?;
    Ok(format!(
        "f(x,y)    = {}\n\
         L[f]      = {}\n\
         L0[f]     = {}   (linear in x, y held fixed)\n\
         L1[f]     = {}   (linear in y, x held fixed)\n\
         L1[L0[f]] = {}\n\
         L0[L1[f]] = {}\n\
         composites agree: {}\n",
        ex.f,
        ex.total,
        ex.l0,
        ex.l1,
        ex.l1_l0,
        ex.l0_l1,
        ex.l1_l0 == ex.l0_l1
    ))
}

/// `f(x) = |x|^(3/2)` is continuously differentiable, yet the map
/// `x ↦ D[f](x, 1)` a partial linearization would have to produce has an
/// unbounded difference quotient at 0.
pub fn c1_report() -> String {
    let df = |x: f64| 1.5 * x.signum() * x.abs().sqrt();
    let mut out = String::from(
        "f(x) = |x|^(3/2), f'(x) = 3x / (2 sqrt|x|)\n\
         L[f] = 0 exists: f'(0) = 0.\n\
         A partial linearization would give D[f](x, 1) = f'(x); its difference quotient at 0:\n",
    );
    for k in [2, 4, 6, 8, 10] {
        let h = 10f64.powi(-k);
        out.push_str(&format!("  h = 1e-{k:<2}  (f'(h) - f'(0)) / h = {:.6e}\n", (df(h) - df(0.0)) / h));
    }
    out.push_str("The quotient grows like h^(-1/2): f' is not C1, so C1 maps have no partial linearization.\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_order_commands() {
        assert_eq!(diff(ModelId::Poly, "x^3+x").unwrap(), "3*x^2*y + y");
        assert_eq!(diff(ModelId::Poly, "0").unwrap(), "0");
        assert_eq!(lin(ModelId::Poly, "x").unwrap(), "x");
        assert_eq!(diff(ModelId::Biproduct, "[[1,2]]").unwrap(), "[[0,0,1,2]]");
        assert_eq!(lin(ModelId::Smooth, "sin(x)").unwrap(), "x");
        let z = ["z".to_string()];
        assert_eq!(plin(ModelId::Smooth, "z*x + x^2", &z).unwrap(), "z*x");
        assert!(plin(ModelId::Poly, "x", &["w".to_string()]).is_ok());
        assert!(diff(ModelId::Closed, "x").is_err());
    }

    #[test]
    fn tower_entries() {
        let t = tower("x^2", 2).unwrap();
        assert_eq!(t, ["D^0: x^2", "D^1: 2*x*y", "D^2: 2*x*w + 2*y*z"]);
    }

    #[test]
    fn closed_evaluation() {
        let defs = ["f=x^3+x".to_string()];
        assert_eq!(closed_eval(&defs, "D(f)", &[2.0, 1.0]).unwrap(), "13");
        assert!(closed_eval(&defs, "D(g)", &[2.0, 1.0]).is_err());
    }

    #[test]
    fn c1_quotient_grows() {
        let r = c1_report();
        assert!(r.contains("1.500000e5"), "{r}");
    }
}
