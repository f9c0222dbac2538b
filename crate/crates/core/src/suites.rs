//! Named law suites over each shipped model, and the deliberately broken
//! combinators used to show the suites can fail.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::biproduct::{biproduct_laws, BiproductD, BiproductL, BiproductLsys, BiproductModel};
use crate::closed::{closed_laws, ClosedD, ClosedL, ClosedLsys, ClosedModel};
use crate::combinator::{DynD, DynL, DynSys};
use crate::error::{Error, Result};
use crate::laws::cd::{cd_laws, dc_checks};
use crate::laws::lin::{l_laws, simplification_laws};
use crate::laws::linear::linear_laws;
use crate::laws::roundtrip::roundtrip_laws;
use crate::laws::structure::structure_laws;
use crate::laws::system::{default_contexts, interchange_laws, slice_checks, system_lemma_laws};
use crate::laws::{bind_all, Check, Generate, LawReport, RunConfig};
use crate::mutants::{self, Mutant};
use crate::poly::{PolyD, PolyL, PolyLsys, PolyModel};
use crate::smooth::{smooth_laws, SmoothD, SmoothL, SmoothLsys, SmoothModel};
use crate::tower::{tower_laws, TowerD, TowerL, TowerLsys, TowerModel};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    Structure,
    Cd,
    L,
    System,
    Roundtrip,
    Linear,
    /// Laws specific to one model.
    Model,
    Closed,
    All,
}

impl Suite {
    pub const NAMES: [&'static str; 9] = [
        "structure",
        "cd",
        "l",
        "system",
        "roundtrip",
        "linear",
        "model",
        "closed",
        "all",
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Suite::Structure => "structure",
            Suite::Cd => "cd",
            Suite::L => "l",
            Suite::System => "system",
            Suite::Roundtrip => "roundtrip",
            Suite::Linear => "linear",
            Suite::Model => "model",
            Suite::Closed => "closed",
            Suite::All => "all",
        }
    }

    pub fn includes(self, part: Suite) -> bool {
        self == part || self == Suite::All
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Suite> {
        Ok(match s {
            "structure" => Suite::Structure,
            "cd" => Suite::Cd,
            "l" => Suite::L,
            "system" => Suite::System,
            "roundtrip" => Suite::Roundtrip,
            "linear" => Suite::Linear,
            "model" => Suite::Model,
            "closed" => Suite::Closed,
            "all" => Suite::All,
            other => {
                return Err(Error::Invalid(format!(
                    "unknown suite '{other}' (expected one of {})",
                    Suite::NAMES.join(", ")
                )))
            }
        })
    }
}

/// The three combinators a first-order model is checked with.
pub struct Combinators<M: crate::category::Model> {
    pub d: DynD<M>,
    pub l: DynL<M>,
    pub sys: DynSys<M>,
}

impl<M: crate::category::Model> Clone for Combinators<M> {
    fn clone(&self) -> Self {
        Combinators {
            d: self.d.clone(),
            l: self.l.clone(),
            sys: self.sys.clone(),
        }
    }
}

/// Every check of `suite` that applies to a first-order model.
pub fn first_order_checks<M: Generate + Clone + 'static>(
    m: &M,
    c: &Combinators<M>,
    suite: Suite,
) -> Vec<Check<'static>> {
    let contexts = default_contexts();
    let mut out = Vec::new();
    if suite.includes(Suite::Structure) {
        out.extend(bind_all(m, structure_laws()));
    }
    if suite.includes(Suite::Cd) {
        out.extend(bind_all(m, cd_laws(c.d.clone())));
        out.extend(dc_checks(m, c.d.clone(), &contexts));
    }
    if suite.includes(Suite::L) {
        let mut laws = l_laws(c.l.clone());
        laws.extend(simplification_laws(c.l.clone()));
        out.extend(bind_all(m, laws));
    }
    if suite.includes(Suite::System) {
        out.extend(slice_checks(m, c.sys.clone(), &contexts));
        let mut laws = interchange_laws(c.sys.clone());
        laws.extend(system_lemma_laws(c.sys.clone()));
        out.extend(bind_all(m, laws));
    }
    if suite.includes(Suite::Roundtrip) {
        out.extend(bind_all(
            m,
            roundtrip_laws(c.d.clone(), c.l.clone(), c.sys.clone()),
        ));
    }
    if suite.includes(Suite::Linear) {
        out.extend(bind_all(m, linear_laws(c.d.clone(), c.l.clone())));
    }
    out
}

pub fn poly_combinators() -> Combinators<PolyModel> {
    Combinators {
        d: Arc::new(PolyD),
        l: Arc::new(PolyL),
        sys: Arc::new(PolyLsys),
    }
}

pub fn biproduct_combinators() -> Combinators<BiproductModel> {
    Combinators {
        d: Arc::new(BiproductD),
        l: Arc::new(BiproductL),
        sys: Arc::new(BiproductLsys),
    }
}

pub fn tower_combinators() -> Combinators<TowerModel> {
    Combinators {
        d: Arc::new(TowerD),
        l: Arc::new(TowerL),
        sys: Arc::new(TowerLsys),
    }
}

pub fn smooth_combinators() -> Combinators<SmoothModel> {
    Combinators {
        d: Arc::new(SmoothD),
        l: Arc::new(SmoothL),
        sys: Arc::new(SmoothLsys),
    }
}

pub fn closed_combinators() -> Combinators<ClosedModel> {
    Combinators {
        d: Arc::new(ClosedD),
        l: Arc::new(ClosedL),
        sys: Arc::new(ClosedLsys),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ModelId {
    Poly,
    Biproduct,
    Tower,
    Smooth,
    Closed,
}

impl ModelId {
    pub const NAMES: [&'static str; 5] = ["poly", "biproduct", "tower", "smooth", "closed"];

    pub fn as_str(self) -> &'static str {
        match self {
            ModelId::Poly => "poly",
            ModelId::Biproduct => "biproduct",
            ModelId::Tower => "tower",
            ModelId::Smooth => "smooth",
            ModelId::Closed => "closed",
        }
    }

    pub fn is_sampled(self) -> bool {
        matches!(self, ModelId::Smooth | ModelId::Closed)
    }
}

impl fmt::Display for ModelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ModelId {
    type Err = Error;

    fn from_str(s: &str) -> Result<ModelId> {
        Ok(match s {
            "poly" => ModelId::Poly,
            "biproduct" => ModelId::Biproduct,
            "tower" => ModelId::Tower,
            "smooth" => ModelId::Smooth,
            "closed" => ModelId::Closed,
            other => {
                return Err(Error::Invalid(format!(
                    "unknown model '{other}' (expected one of {})",
                    ModelId::NAMES.join(", ")
                )))
            }
        })
    }
}

/// Which checks to build: a model, a suite, optionally a broken combinator
/// swapped in, and sampling settings for the sampled models.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Selection {
    pub model: ModelId,
    pub suite: Suite,
    pub mutant: Option<&'static Mutant>,
    /// Overrides the sampled models' tolerance.
    pub tolerance: Option<f64>,
    /// Overrides the sampled models' point count.
    pub points: Option<usize>,
}

impl Selection {
    pub fn new(model: ModelId, suite: Suite) -> Selection {
        Selection {
            model,
            suite,
            mutant: None,
            tolerance: None,
            points: None,
        }
    }

    pub fn with_mutant(mut self, name: &str) -> Result<Selection> {
        let found = mutants::find(name).ok_or_else(|| {
            Error::Invalid(format!(
                "unknown mutant '{name}' (expected one of {})",
                mutants::names().join(", ")
            ))
        })?;
        self.mutant = Some(found);
        Ok(self)
    }
}

fn with_mutant<M: crate::category::Structure + Send + Sync + 'static>(
    base: Combinators<M>,
    mutant: Option<&Mutant>,
) -> Combinators<M> {
    match mutant {
        Some(mt) => mutants::apply(mt, &base),
        None => base,
    }
}

/// The checks `sel` names, in suite order.
pub fn checks(sel: &Selection) -> Result<Vec<Check<'static>>> {
    if sel.suite == Suite::Closed && sel.model != ModelId::Closed {
        return Err(Error::Invalid(format!(
            "suite 'closed' needs the closed model, not '{}'",
            sel.model
        )));
    }
    let model_laws = sel.suite.includes(Suite::Model);
    let mut out;
    match sel.model {
        ModelId::Poly => {
            let m = PolyModel::default();
            out = first_order_checks(&m, &with_mutant(poly_combinators(), sel.mutant), sel.suite);
        }
        ModelId::Biproduct => {
            let m = BiproductModel::default();
            out = first_order_checks(&m, &with_mutant(biproduct_combinators(), sel.mutant), sel.suite);
            if model_laws {
                out.extend(bind_all(&m, biproduct_laws()));
            }
        }
        ModelId::Tower => {
            let m = TowerModel::default();
            out = first_order_checks(&m, &with_mutant(tower_combinators(), sel.mutant), sel.suite);
            if model_laws {
                out.extend(bind_all(&m, tower_laws()));
            }
        }
        ModelId::Smooth => {
            let mut m = SmoothModel::default();
            if let Some(t) = sel.tolerance {
                m.sample.tolerance = t;
            }
            if let Some(p) = sel.points {
                m.sample.points = p;
            }
            out = first_order_checks(&m, &with_mutant(smooth_combinators(), sel.mutant), sel.suite);
            if model_laws {
                out.extend(bind_all(&m, smooth_laws(1e-5, 1e-4)));
            }
        }
        ModelId::Closed => {
            let mut m = ClosedModel::default();
            m = m.with_sampling(
                sel.tolerance.unwrap_or(m.compare.eq.tolerance),
                sel.points.unwrap_or(m.compare.eq.points),
            );
            out = first_order_checks(&m, &with_mutant(closed_combinators(), sel.mutant), sel.suite);
            if sel.suite.includes(Suite::Closed) || model_laws {
                out.extend(bind_all(&m, closed_laws()));
            }
        }
    }
    Ok(out)
}

/// Runs every check in order.
pub fn run_checks(checks: &[Check<'_>], cfg: &RunConfig) -> Vec<LawReport> {
    checks.iter().map(|c| c.run(cfg)).collect()
}
