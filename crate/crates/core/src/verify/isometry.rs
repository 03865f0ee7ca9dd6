use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::circle::{hausdorff, random_arc, Arc, CirclePoint};
use crate::dynamics::LiftMap;
use crate::error::Result;
use crate::hyperspace::induced_map;

/// Largest allowed `|d_H(fA, fB) - d_H(A, B)|` for a rigid rotation.
pub const ISOMETRY_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IsometryReport {
    pub alpha: f64,
    pub trials: usize,
    /// Over random pairs (points, proper arcs and the full circle mixed).
    pub random_max: f64,
    /// Over pairs of points only.
    pub degenerate_max: f64,
    /// Over pairs where an endpoint of `A` sits at the midpoint of the
    /// complement of `B`, where the closed form switches branches.
    pub adversarial_max: f64,
    pub max_deviation: f64,
    pub pass: bool,
}

fn deviation(f: &LiftMap, a: &Arc, b: &Arc) -> f64 {
    let before = hausdorff(a, b);
    let after = hausdorff(&induced_map(f, a), &induced_map(f, b));
    (after - before).abs()
}

/// An arc `A` with one endpoint within `1e-9` of the complement midpoint
/// of `B`.
fn adversarial_pair(rng: &mut ChaCha8Rng) -> (Arc, Arc) {
    let b = Arc::from_start_len(CirclePoint::new(rng.gen()), rng.gen_range(0.01..0.99));
    let (mid, _) = b.complement().unwrap();
    let jitter = rng.gen_range(-1e-9..1e-9);
    let len = rng.gen_range(0.0..0.99);
    let a = if rng.gen::<bool>() {
        Arc::from_start_len(mid.shifted(jitter), len)
    } else {
        Arc::from_start_len(mid.shifted(jitter - len), len)
    };
    (a, b)
}

/// Checks that `C(R_α)` preserves the Hausdorff distance on `trials`
/// random pairs of each kind.
pub fn verify_isometry(alpha: f64, trials: usize, seed: u64) -> Result<IsometryReport> {
    let f = LiftMap::rotation(alpha)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut random_max = 0.0f64;
    let mut degenerate_max = 0.0f64;
    let mut adversarial_max = 0.0f64;
    for _ in 0..trials {
        let (a, b) = (random_arc(&mut rng), random_arc(&mut rng));
        random_max = random_max.max(deviation(&f, &a, &b));
        let (x, y) = (
            Arc::point(CirclePoint::new(rng.gen())),
            Arc::point(CirclePoint::new(rng.gen())),
        );
        degenerate_max = degenerate_max.max(deviation(&f, &x, &y));
        let (a, b) = adversarial_pair(&mut rng);
        adversarial_max = adversarial_max.max(deviation(&f, &a, &b));
    }
    let max_deviation = random_max.max(degenerate_max).max(adversarial_max);
    Ok(IsometryReport {
        alpha,
        trials,
        random_max,
        degenerate_max,
        adversarial_max,
        max_deviation,
        pass: max_deviation <= ISOMETRY_TOL,
    })
}
