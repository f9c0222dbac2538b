//! Acceptance run: one line per criterion, non-zero exit if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng as _, SeedableRng};

use cartdiff::commands::{self, interchange};
use cartdiff::expr::parse_poly_map;
use cartdiff::laws::{Check, LawReport, Rng, RunConfig};
use cartdiff::mutants::MUTANTS;
use cartdiff::poly::PolyModel;
use cartdiff::smooth::{parse_smooth_map, SmoothModel};
use cartdiff::suites::{checks, ModelId, Selection, Suite};
use cartdiff::tower::TowerModel;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn cfg(budget: usize) -> RunConfig {
    RunConfig {
        seed: 42,
        budget,
        shrink: true,
    }
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(limit: Duration, elapsed: Duration) -> Result<(), String> {
    ensure(elapsed < limit, || format!("took {elapsed:.2?}, limit {limit:?}"))
}

/// Canonical printed form of a polynomial written with the header `vars`.
fn canon(header: &str, src: &str, names: &[&str]) -> Result<String, String> {
    let (f, _) = parse_poly_map(&format!("{header} {src}"), &[]).map_err(|e| e.to_string())?;
    Ok(f.display_with(names))
}

fn golden(label: &str, got: &str, want: &str) -> Result<(), String> {
    ensure(got == want, || format!("{label}: got '{got}', want '{want}'"))
}

fn run_selected(sel: Selection, ids: Option<&[&str]>, budget: usize) -> Result<Vec<LawReport>, String> {
    let all = checks(&sel).map_err(|e| e.to_string())?;
    let picked: Vec<&Check> = all
        .iter()
        .filter(|c| ids.is_none_or(|ids| ids.contains(&c.id.as_str())))
        .collect();
    if let Some(ids) = ids {
        for id in ids {
            ensure(picked.iter().any(|c| c.id == *id), || format!("no check named {id}"))?;
        }
    }
    Ok(picked.iter().map(|c| c.run(&cfg(budget))).collect())
}

fn all_pass(reports: &[LawReport], min_cases: usize) -> Result<(), String> {
    for r in reports {
        ensure(r.passed(), || r.to_string())?;
        ensure(r.cases >= min_cases, || format!("{} ran only {} cases", r.law, r.cases))?;
    }
    Ok(())
}

fn goldens() -> Outcome {
    let t = Instant::now();
    let poly = ModelId::Poly;
    let e = |r: cartdiff::Result<String>| r.map_err(|e| e.to_string());

    let got = e(commands::lin(poly, "x^2*y+3*x+z+1"))?;
    golden("lin", &got, &canon("args(x, y, z)", "3*x+z", &["x", "y", "z"])?)?;
    let got = e(commands::plin(poly, "z^3*x+z^2*x^3+x+1", &["z".into()]))?;
    golden("plin", &got, &canon("ctx(z) args(x)", "z^3*x+x", &["z", "x"])?)?;
    let got = e(commands::diff(poly, "x^3+x"))?;
    golden("diff", &got, &canon("args(x, y)", "3*x^2*y+y", &["x", "y"])?)?;

    let ex = interchange().map_err(|e| e.to_string())?;
    let xy = |s: &str| canon("args(x, y)", s, &["x", "y"]);
    golden("L0", &ex.l0, &xy("x*y+2*x*y^3+3*x")?)?;
    golden("L1", &ex.l1, &xy("x*y+4*y")?)?;
    golden("L1[L0]", &ex.l1_l0, &xy("x*y")?)?;
    golden("L0[L1]", &ex.l0_l1, &xy("x*y")?)?;
    golden("L", &ex.total, &xy("3*x+4*y")?)?;
    within(Duration::from_secs(1), t.elapsed())?;
    Ok("lin, plin, diff and the interchange example match".into())
}

const AXIOMS: [&str; 16] = [
    "CD.1", "CD.2", "CD.3", "CD.4", "CD.5", "CD.6", "CD.7", "L.1", "L.2", "L.3", "L.4", "L.5",
    "L.6", "L.7", "L.7.a", "L.8",
];

fn poly_axioms() -> Outcome {
    let gen = PolyModel::default().gen;
    ensure(gen.max_degree <= 3 && gen.coeff <= 2 && gen.max_leaves <= 3, || {
        format!("generator settings {gen:?}")
    })?;
    let t = Instant::now();
    let reports = run_selected(Selection::new(ModelId::Poly, Suite::All), Some(&AXIOMS), 500)?;
    all_pass(&reports, 500)?;
    within(Duration::from_secs(60), t.elapsed())?;
    Ok(format!("{} axioms x 500 cases exact", reports.len()))
}

fn poly_roundtrips() -> Outcome {
    let t = Instant::now();
    let reports = run_selected(
        Selection::new(ModelId::Poly, Suite::Roundtrip),
        Some(&["RT.D", "RT.LC"]),
        200,
    )?;
    all_pass(&reports, 200)?;
    within(Duration::from_secs(30), t.elapsed())?;
    Ok("D_(L_D) = D and L^C_(D_L) = L^C on 200 maps each".into())
}

fn l7_equivalence() -> Outcome {
    let reports = run_selected(
        Selection::new(ModelId::Poly, Suite::All),
        Some(&["L.7", "L.7.a", "L7EQUIV", "CLID"]),
        200,
    )?;
    all_pass(&reports, 200)?;
    Ok("L.7 and L.7.a agree case by case on 200 maps; the interchange/lift identity holds".into())
}

fn biproduct() -> Outcome {
    let reports = run_selected(Selection::new(ModelId::Biproduct, Suite::All), None, 500)?;
    ensure(reports.iter().any(|r| r.law == "BP.linear"), || "linearity check missing".into())?;
    all_pass(&reports, 1)?;
    Ok(format!("{} checks exact, every map equals <0,1>D[f]", reports.len()))
}

fn tower() -> Outcome {
    let depth = TowerModel::default().depth;
    ensure(depth == 3, || format!("tower depth {depth}"))?;
    let reports = run_selected(
        Selection::new(ModelId::Tower, Suite::Model),
        Some(&["TW.shift", "TW.lin", "TW.shiftlin"]),
        100,
    )?;
    all_pass(&reports, 100)?;
    Ok("shift and linearize agree with the polynomial D and L at depth 3".into())
}

fn smooth() -> Outcome {
    let m = SmoothModel::default();
    let (f, _) = parse_smooth_map("exp(x)*cos(y)", &[]).map_err(|e| e.to_string())?;
    let l = m.linearize(&f).map_err(|e| e.to_string())?;
    let mut rng = Rng::seed_from_u64(42);
    let mut worst = 0f64;
    for _ in 0..100 {
        let p = [rng.random_range(-10.0..10.0), rng.random_range(-10.0..10.0)];
        let v = l.eval(&p).map_err(|e| e.to_string())?[0];
        worst = worst.max((v - p[0]).abs());
    }
    ensure(worst <= 1e-9, || format!("L[exp(x)cos(y)] deviates from x by {worst:e}"))?;

    let fd = run_selected(Selection::new(ModelId::Smooth, Suite::Model), Some(&["SM.fd"]), 100)?;
    all_pass(&fd, 100)?;
    let mut sel = Selection::new(ModelId::Smooth, Suite::Cd);
    sel.tolerance = Some(1e-6);
    let cd7 = run_selected(sel, Some(&["CD.7"]), 500)?;
    all_pass(&cd7, 1)?;
    Ok(format!("L within {worst:e}; finite differences within 1e-4 on 100 terms; CD.7 within 1e-6"))
}

const CLOSED_LAWS: [&str; 8] = [
    "L.lambda", "L.ev", "EL.1", "EL.2", "EL.3", "CL.monad", "RT.DLD", "RT.LLcL",
];

fn closed() -> Outcome {
    let t = Instant::now();
    let mut sel = Selection::new(ModelId::Closed, Suite::Closed);
    sel.tolerance = Some(1e-6);
    sel.points = Some(100);
    let reports = run_selected(sel, Some(&CLOSED_LAWS), 100)?;
    all_pass(&reports, 100)?;
    within(Duration::from_secs(120), t.elapsed())?;
    Ok(format!("{} laws x 100 cases at 100 points, tolerance 1e-6", reports.len()))
}

fn mutants() -> Outcome {
    let mut killed = Vec::new();
    for mu in MUTANTS {
        let sel = Selection::new(ModelId::Poly, mu.suite)
            .with_mutant(mu.name)
            .map_err(|e| e.to_string())?;
        let all = checks(&sel).map_err(|e| e.to_string())?;
        let run = cfg(100);
        let hit = all.iter().find_map(|c| {
            let r = c.run(&run);
            r.failed().then_some((c, r))
        });
        let (check, report) = hit.ok_or_else(|| format!("{} survived", mu.name))?;
        let line = report.to_string();
        let parsed = LawReport::parse(&line).map_err(|e| format!("{}: {e}", mu.name))?;
        ensure(parsed == report, || format!("{}: report line does not round-trip", mu.name))?;
        let again = check.replay(&parsed, run.shrink);
        ensure(again == report.counterexample, || {
            format!("{}: replay of {} gave {again:?}", mu.name, check.id)
        })?;
        killed.push(format!("{}/{}", mu.name, check.id));
    }
    ensure(killed.len() >= 10, || format!("only {} mutants", killed.len()))?;
    Ok(format!("{} killed and replayed: {}", killed.len(), killed.join(", ")))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("golden examples", goldens),
        ("poly axioms", poly_axioms),
        ("poly round trips", poly_roundtrips),
        ("L.7 equivalence", l7_equivalence),
        ("biproduct", biproduct),
        ("tower vs poly", tower),
        ("smooth", smooth),
        ("closed", closed),
        ("mutants", mutants),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = run();
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {} PASS {name} ({secs:.2}s): {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} FAIL {name} ({secs:.2}s): {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
