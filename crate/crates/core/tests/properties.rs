use proptest::prelude::*;

use cartdiff::biproduct::{BiproductModel, MatrixMap};
use cartdiff::closed::ClosedMorphism;
use cartdiff::combinator::{LinearizingSystem, SystemViaD};
use cartdiff::expr::parse_poly_map;
use cartdiff::poly::{rat, ratio, rational_to_f64, Poly, PolyD, PolyMap, PolyModel};
use cartdiff::smooth::{finite_difference_deviation, parse_smooth_map, SmoothModel};
use cartdiff::tower::{shift, tower_eq, tower_linearize, tower_of};
use cartdiff::{Model, Shape};

const NAMES: [&str; 3] = ["x", "y", "z"];

/// Exponent vectors of total degree at most 3 with coefficients in [-2, 2].
fn arb_poly(n: usize) -> impl Strategy<Value = Poly> {
    let term = (prop::collection::vec(0u16..=3, n), -2i64..=2)
        .prop_filter("degree <= 3", |(e, _)| e.iter().sum::<u16>() <= 3);
    prop::collection::vec(term, 0..5)
        .prop_map(move |ts| Poly::from_terms(n, ts.into_iter().map(|(e, c)| (e, rat(c)))))
}

fn arb_map() -> impl Strategy<Value = PolyMap> {
    (1usize..=3, 1usize..=2).prop_flat_map(|(n, k)| {
        prop::collection::vec(arb_poly(n), k).prop_map(move |comps| {
            PolyMap::new(Shape::ground_power(n), Shape::ground_power(k), comps).unwrap()
        })
    })
}

/// `⟨0, 1⟩ D[f]` built from the category operations alone.
fn at_zero<M: Model>(m: &M, a: &Shape, df: &M::Mor) -> M::Mor {
    let inject = m.pair(&m.zero(a, a).unwrap(), &m.identity(a).unwrap()).unwrap();
    m.compose(&inject, df).unwrap()
}

fn dyadic(k: i64) -> f64 {
    k as f64 / 4.0
}

fn smooth_src() -> impl Strategy<Value = String> {
    let leaf = prop_oneof![
        Just("x".to_string()),
        Just("y".to_string()),
        (-2i64..=2).prop_map(|c| c.to_string()),
    ];
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a} + {b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a} * {b})")),
            (prop::sample::select(vec!["sin", "cos", "exp"]), inner).prop_map(|(f, a)| format!("{f}({a})")),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn differential_is_degree_one_in_directions(f in arb_map()) {
        let n = f.nvars();
        let df = PolyModel::new().differential(&f).unwrap();
        for p in df.comps() {
            for (e, _) in p.terms() {
                prop_assert_eq!(e[n..].iter().sum::<u16>(), 1);
            }
        }
    }

    #[test]
    fn differential_is_additive_in_directions(
        f in arb_map(),
        x in prop::collection::vec(-8i64..=8, 3),
        u in prop::collection::vec(-8i64..=8, 3),
        v in prop::collection::vec(-8i64..=8, 3),
    ) {
        let n = f.nvars();
        let df = PolyModel::new().differential(&f).unwrap();
        let at = |dir: &dyn Fn(usize) -> i64| {
            let pt: Vec<_> = (0..n).map(|i| ratio(x[i], 3)).chain((0..n).map(|i| rat(dir(i)))).collect();
            df.eval(&pt).unwrap()
        };
        let sum = at(&|i| u[i] + v[i]);
        let parts: Vec<_> = at(&|i| u[i]).iter().zip(at(&|i| v[i])).map(|(a, b)| a + b).collect();
        prop_assert_eq!(sum, parts);
    }

    #[test]
    fn linearize_equals_differential_at_zero(f in arb_map()) {
        let m = PolyModel::new();
        let direct = m.linearize(&f);
        let via_d = at_zero(&m, f.dom(), &m.differential(&f).unwrap());
        prop_assert!(m.poly_eq(&direct, &via_d).unwrap());
    }

    #[test]
    fn partial_linearize_filter_agrees_with_induced_system(f in arb_map()) {
        prop_assume!(f.nvars() >= 2);
        let m = PolyModel::new();
        let ctx = Shape::ground();
        let rest = Shape::ground_power(f.nvars() - 1);
        let g = f.retype(Shape::prod(ctx.clone(), rest), f.cod().clone()).unwrap();
        let filtered = m.partial_linearize(&ctx, &g).unwrap();
        let induced = SystemViaD(PolyD).linearize_in(&m, &ctx, &g).unwrap();
        prop_assert!(m.poly_eq(&filtered, &induced).unwrap());
    }

    #[test]
    fn poly_print_parse_round_trip(f in arb_map()) {
        let n = f.nvars();
        let names = &NAMES[..n];
        let src = format!("args({}) {}", names.join(", "), f.display_with(names));
        let (g, _) = parse_poly_map(&src, &[]).unwrap();
        prop_assert_eq!(f.comps(), g.comps());
    }

    #[test]
    fn every_matrix_is_linear(
        (n, k) in (1usize..=3, 1usize..=3),
        seed in prop::collection::vec(-2i64..=2, 9),
    ) {
        let rows = (0..k).map(|r| (0..n).map(|c| rat(seed[r * 3 + c])).collect()).collect();
        let f = MatrixMap::new(Shape::ground_power(n), Shape::ground_power(k), rows).unwrap();
        let m = BiproductModel::default();
        prop_assert!(m.matrix_eq(&f, &at_zero(&m, f.dom(), &m.differential(&f))).unwrap());
    }

    #[test]
    fn tower_truncation_commutes(f in arb_map()) {
        let t = tower_of(&f, 3).unwrap();
        let shifted = shift(&t.truncate(2)).unwrap();
        prop_assert!(tower_eq(&shifted, &shift(&t).unwrap().truncate(1)).unwrap());
        let lin = tower_linearize(&t.truncate(2)).unwrap();
        prop_assert!(tower_eq(&lin, &tower_linearize(&t).unwrap().truncate(2)).unwrap());
    }

    #[test]
    fn dual_numbers_match_polynomial_differential(
        f in arb_map(),
        pt in prop::collection::vec(-8i64..=8, 6),
    ) {
        let n = f.nvars();
        let names = &NAMES[..n];
        let src = format!("args({}) {}", names.join(", "), f.display_with(names));
        let (s, _) = parse_smooth_map(&src, &[]).unwrap();
        let dual = ClosedMorphism::from_smooth(&s);
        let dual = cartdiff::closed::ClosedModel::default().differential(&dual);
        let xs: Vec<i64> = pt[..2 * n].to_vec();
        let got = dual.eval_reals(&xs.iter().map(|&k| dyadic(k)).collect::<Vec<_>>()).unwrap();
        let df = PolyModel::new().differential(&f).unwrap();
        let want = df.eval(&xs.iter().map(|&k| ratio(k, 4)).collect::<Vec<_>>()).unwrap();
        let want: Vec<f64> = want.iter().map(rational_to_f64).collect();
        prop_assert_eq!(got, want);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn smooth_differential_matches_finite_differences(src in smooth_src()) {
        let (f, _) = parse_smooth_map(&format!("args(x, y) {src}"), &[]).unwrap();
        let dev = finite_difference_deviation(&SmoothModel::default(), &f, 1e-5).unwrap();
        prop_assert!(dev <= 1e-4, "{src}: deviation {dev:e}");
    }
}
