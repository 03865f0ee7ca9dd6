use std::sync::OnceLock;

use hpol_core::circle::{circ_dist, hausdorff, hausdorff_oracle, Arc, CirclePoint};
use hpol_core::dynamics::golden_alpha;
use hpol_core::entropy::{least_squares, OrbitCache};
use hpol_core::hyperspace::{induced_iterate, induced_map, ArcGrid};
use hpol_core::{DenjoyMap, DenjoyPoint, Family, LiftMap};
use proptest::prelude::*;

fn arc() -> impl Strategy<Value = Arc> {
    prop_oneof![
        1 => (0.0..1.0f64).prop_map(|x| Arc::point(CirclePoint::new(x))),
        1 => Just(Arc::full()),
        8 => (0.0..1.0f64, 1e-6..0.999_999f64)
            .prop_map(|(s, l)| Arc::from_start_len(CirclePoint::new(s), l)),
    ]
}

fn point() -> impl Strategy<Value = CirclePoint> {
    (0.0..1.0f64).prop_map(CirclePoint::new)
}

fn map() -> impl Strategy<Value = LiftMap> {
    prop_oneof![
        (0.0..1.0f64).prop_map(|a| LiftMap::rotation(a).unwrap()),
        (0.0..1.0f64, -0.95..0.95f64).prop_map(|(w, k)| LiftMap::arnold(w, k).unwrap()),
        (1i64..4, -0.95..0.95f64).prop_map(|(p, k)| LiftMap::rational_ms(p, 5, k).unwrap()),
    ]
}

fn denjoy() -> &'static DenjoyMap {
    static MAP: OnceLock<DenjoyMap> = OnceLock::new();
    MAP.get_or_init(|| DenjoyMap::with_truncation(golden_alpha(), 20_000).unwrap())
}

fn denjoy_point() -> impl Strategy<Value = DenjoyPoint> {
    prop_oneof![
        (-5000i64..5000, 0.0..=1.0f64).prop_map(|(n, t)| DenjoyPoint::gap(n, t)),
        (0.0..1.0f64).prop_map(DenjoyPoint::cantor),
    ]
}

/// Rotation sending `x` to `y` counterclockwise is shorter than to `z`.
fn ccw_before(x: CirclePoint, y: CirclePoint, z: CirclePoint) -> bool {
    x.ccw_offset(y) < x.ccw_offset(z)
}

proptest! {
    #[test]
    fn circ_dist_is_a_metric(x in point(), y in point(), z in point()) {
        prop_assert_eq!(circ_dist(x, y), circ_dist(y, x));
        prop_assert!(circ_dist(x, y) <= 0.5);
        prop_assert!(circ_dist(x, z) <= circ_dist(x, y) + circ_dist(y, z) + 1e-12);
        prop_assert_eq!(circ_dist(x, x), 0.0);
    }

    #[test]
    fn hausdorff_is_a_metric(a in arc(), b in arc(), c in arc()) {
        let ab = hausdorff(&a, &b);
        prop_assert_eq!(ab, hausdorff(&b, &a));
        prop_assert!((0.0..=0.5).contains(&ab));
        prop_assert!(hausdorff(&a, &c) <= ab + hausdorff(&b, &c) + 1e-12);
        prop_assert_eq!(hausdorff(&a, &a), 0.0);
    }

    #[test]
    fn hausdorff_matches_the_oracle(a in arc(), b in arc()) {
        let oracle = hausdorff_oracle(&a, &b, 1e-3).unwrap();
        prop_assert!((hausdorff(&a, &b) - oracle).abs() <= 2e-3);
    }

    #[test]
    fn rotations_induce_isometries(alpha in 0.0..1.0f64, a in arc(), b in arc()) {
        let f = LiftMap::rotation(alpha).unwrap();
        let d = hausdorff(&induced_map(&f, &a), &induced_map(&f, &b));
        prop_assert!((d - hausdorff(&a, &b)).abs() <= 1e-9);
    }

    #[test]
    fn induced_map_respects_composition(f in map(), a in arc(), k in 1u32..=20) {
        let fk = LiftMap::new(f.family(), k).unwrap();
        let iterated = induced_iterate(&f, &a, k);
        let direct = induced_map(&fk, &a);
        prop_assert!(hausdorff(&iterated, &direct) <= 1e-10);
    }

    #[test]
    fn arc_grid_is_a_delta_net(cells in 4usize..200, a in arc()) {
        let g = ArcGrid::with_cells(cells);
        prop_assert!(hausdorff(&a, &g.nearest(&a)) <= g.delta() + 1e-12);
    }

    #[test]
    fn lifts_are_degree_one_bijections(f in map(), x in -2.0..2.0f64, y in 0.0..1.0f64) {
        prop_assert!((f.lift(x + 1.0) - f.lift(x) - 1.0).abs() <= 1e-12);
        prop_assert!(f.lift(x + 1e-6) > f.lift(x));
        let back = f.eval(f.eval_inverse(CirclePoint::new(y)));
        prop_assert!(circ_dist(back, CirclePoint::new(y)) <= 1e-10);
    }

    #[test]
    fn relative_steps_track_differences(f in map(), c in 0.0..1.0f64, u in -1e-3..1e-3f64) {
        let (fc, du) = f.lift_relative(c, u);
        prop_assert!((fc - f.lift(c)).abs() <= 1e-12);
        prop_assert!((du - (f.lift(c + u) - f.lift(c))).abs() <= 1e-12);
    }

    #[test]
    fn scalar_cache_rows_follow_the_map(f in map(), x in 0.0..1.0f64) {
        let cache = OrbitCache::scalar(&f, &[x], 12).unwrap();
        prop_assert!(cache.spot_check(&f, 12, 1e-9));
    }

    #[test]
    fn denjoy_steps_preserve_cyclic_order(
        p in denjoy_point(), q in denjoy_point(), r in denjoy_point(), k in -50i64..50,
    ) {
        let d = denjoy();
        let (x, y, z) = (d.embed(p), d.embed(q), d.embed(r));
        prop_assume!(circ_dist(x, y) > 1e-9 && circ_dist(y, z) > 1e-9 && circ_dist(x, z) > 1e-9);
        let (x1, y1, z1) = (d.embed(p.step(k)), d.embed(q.step(k)), d.embed(r.step(k)));
        prop_assert_eq!(ccw_before(x, y, z), ccw_before(x1, y1, z1));
    }

    #[test]
    fn collapse_semiconjugates_to_the_rotation(p in denjoy_point(), k in -1000i64..1000) {
        let alpha = golden_alpha();
        let lhs = CirclePoint::new(p.step(k).collapse(alpha));
        let rhs = CirclePoint::new(p.collapse(alpha)).shifted(k as f64 * alpha);
        prop_assert!(circ_dist(lhs, rhs) <= 1e-11);
    }

    #[test]
    fn regression_recovers_power_laws(a in 0.0..3.0f64, c in 0.1..10.0f64) {
        let xs: Vec<f64> = (3..10).map(|k| ((1u64 << k) as f64).ln()).collect();
        let ys: Vec<f64> = xs.iter().map(|x| c.ln() + a * x).collect();
        let (slope, intercept, _) = least_squares(&xs, &ys);
        prop_assert!((slope - a).abs() <= 1e-9);
        prop_assert!((intercept - c.ln()).abs() <= 1e-8);
    }
}

#[test]
fn rotation_family_is_rigid() {
    assert!(matches!(LiftMap::rotation(0.3).unwrap().family(), Family::Rotation { .. }));
}
