use hpol_core::dynamics::golden_alpha;
use hpol_core::entropy::least_squares;
use hpol_core::verify::{build_an, build_interval_cover, verify_cover, verify_isometry};
use hpol_core::{DenjoyMap, LiftMap, SystemDescriptor};

#[test]
fn identity_cover_matches_rotation() {
    for eps in [0.3, 0.07] {
        let id = build_interval_cover(&LiftMap::rotation(0.0).unwrap(), 32, eps).unwrap();
        let rot = build_interval_cover(&LiftMap::rotation(0.3).unwrap(), 32, eps).unwrap();
        assert_eq!(id.len(), rot.len());
        assert_eq!(id.len(), (2.0 / eps).ceil() as usize);
    }
}

#[test]
fn arnold_cover_grows_linearly() {
    let f = LiftMap::arnold(0.0, 0.8).unwrap();
    let ns = [16usize, 32, 64, 128, 256];
    let xs: Vec<f64> = ns.iter().map(|&n| (n as f64).ln()).collect();
    let ys: Vec<f64> = ns
        .iter()
        .map(|&n| (build_interval_cover(&f, n, 0.1).unwrap().len() as f64).ln())
        .collect();
    let (slope, _, _) = least_squares(&xs, &ys);
    assert!((0.5..=1.5).contains(&slope), "{slope}");
}

#[test]
fn arnold_cover_at_n_64() {
    let f = LiftMap::arnold(0.0, 0.8).unwrap();
    let r = verify_cover(&f, 64, 0.1, 10_000, 1_000, 3).unwrap();
    assert!(r.covers_circle);
    assert_eq!(r.covered_fraction, 1.0);
    assert_eq!(r.family_count, (r.base_arcs as u64).pow(2));
    assert!(r.max_base_diameter < 0.05);
    assert!(r.max_pair_distance < 0.1);
    assert!(r.uncovered_witness.is_none());
    assert!(r.pass);
}

#[test]
fn an_sizes_and_witnesses() {
    let d = DenjoyMap::golden();
    let r = build_an(&d, 0.02, 10_000, 64).unwrap();
    assert!(r.a1_scan_agrees);
    for level in &r.levels {
        assert_eq!(level.size, r.a1_size + level.n as u64 - 1);
        assert!(level.size >= level.n as u64);
    }
    assert!(r.min_separation >= 0.02 - 2e-6);
    assert!(r.pass);
}

#[test]
fn degenerate_pairs_are_exact_isometries() {
    let r = verify_isometry(std::f64::consts::SQRT_2 - 1.0, 10_000, 9).unwrap();
    assert!(r.degenerate_max <= 1e-12);
    assert!(r.max_deviation <= 1e-9);
    assert!(r.pass);
}

#[test]
fn builtins_expected_values() {
    let expected: Vec<(String, u32)> = SystemDescriptor::builtins()
        .iter()
        .map(|d| (d.name.clone(), d.classify().unwrap().expected_hyperspace_hpol))
        .collect();
    let names: Vec<(&str, u32)> = expected.iter().map(|(n, e)| (n.as_str(), *e)).collect();
    assert_eq!(
        names,
        [("rotation", 0), ("arnold", 2), ("rational_ms", 2), ("denjoy", 2)]
    );
    assert!((golden_alpha() - (5f64.sqrt() - 1.0) / 2.0).abs() < 1e-15);
}
