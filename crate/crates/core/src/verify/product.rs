use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::circle::hausdorff;
use crate::dynamics::{DenjoyPoint, System};
use crate::entropy::{estimate_hpol, EstimateRun, Protocol, Target};
use crate::error::{Error, Result};
use crate::hyperspace::{pi_map, CantorArc};

/// Band for the slope on `Y`.
pub const Y_BAND: (f64, f64) = (1.4, 2.6);
/// Allowed `|slope(Y) - 2·slope(NW)|`.
pub const PRODUCT_TOL: f64 = 0.5;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProductReport {
    pub nw: EstimateRun,
    pub y: EstimateRun,
    pub slope_nw: f64,
    pub slope_y: f64,
    /// `slope(Y)/slope(NW)`, 0 when the NW slope vanishes.
    pub ratio: f64,
    /// `|slope(Y) - 2·slope(NW)|`.
    pub product_gap: f64,
    pub conjugacy_arcs: usize,
    pub conjugacy_steps: usize,
    /// Arcs and steps at which `π ∘ C(f)^k ≠ (f × f)^k ∘ π` symbolically.
    pub conjugacy_mismatches: usize,
    /// Largest Hausdorff distance between the embedded `C(f)^k A` and the
    /// embedded arc spanned by the images of the endpoints.
    pub embedding_max: f64,
    pub pass: bool,
}

fn random_nw_point(rng: &mut ChaCha8Rng) -> DenjoyPoint {
    if rng.gen::<bool>() {
        DenjoyPoint::gap(rng.gen_range(-1000..=1000), if rng.gen() { 1.0 } else { 0.0 })
    } else {
        DenjoyPoint::cantor(rng.gen())
    }
}

/// Slopes on `NW(f)` and on `Y` (arcs with endpoints in `NW(f)`), and the
/// conjugacy square `π ∘ C(f) = (f × f) ∘ π` on `arcs` random arcs over
/// `steps` iterates.
pub fn verify_product(
    system: &System,
    nw_protocol: &Protocol,
    y_protocol: &Protocol,
    arcs: usize,
    steps: usize,
    seed: u64,
) -> Result<ProductReport> {
    let System::Denjoy(d) = system else {
        return Err(Error::Unsupported("the product check needs the Denjoy system"));
    };
    let nw = estimate_hpol(system, Target::Nw, nw_protocol)?;
    let y = estimate_hpol(system, Target::Product, y_protocol)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut mismatches = 0usize;
    let mut embedding_max = 0.0f64;
    for _ in 0..arcs {
        let a = CantorArc::new(random_nw_point(&mut rng), random_nw_point(&mut rng));
        let (x, y) = pi_map(&a);
        let mut img = a;
        for k in 1..=steps as i64 {
            img = img.step(1);
            if pi_map(&img) != (x.step(k), y.step(k)) {
                mismatches += 1;
            }
            if k == steps as i64 {
                embedding_max = embedding_max.max(hausdorff(&img.embed(d, 0), &a.embed(d, k)));
            }
        }
    }
    let slope_nw = nw.estimate.estimate;
    let slope_y = y.estimate.estimate;
    let ratio = if slope_nw > 0.0 { slope_y / slope_nw } else { 0.0 };
    let product_gap = (slope_y - 2.0 * slope_nw).abs();
    let pass = mismatches == 0
        && slope_y >= Y_BAND.0
        && slope_y <= Y_BAND.1
        && product_gap <= PRODUCT_TOL;
    Ok(ProductReport {
        nw,
        y,
        slope_nw,
        slope_y,
        ratio,
        product_gap,
        conjugacy_arcs: arcs,
        conjugacy_steps: steps,
        conjugacy_mismatches: mismatches,
        embedding_max,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{golden_alpha, DenjoyMap};
    use crate::entropy::Sampler;

    #[test]
    fn small_product_run() {
        let sys = System::Denjoy(DenjoyMap::with_truncation(golden_alpha(), 20_000).unwrap());
        let p = Protocol {
            sampler: Sampler::DenjoyWindow {
                back: 8,
                ahead: 8,
                stride: 1,
                angles: 8,
            },
            eps: alloc::vec![0.05],
            n: alloc::vec![8, 16, 32, 64],
            budget: Default::default(),
        };
        let r = verify_product(&sys, &p, &p, 200, 50, 1).unwrap();
        assert_eq!(r.conjugacy_mismatches, 0);
        assert!(r.embedding_max < 1e-9, "{}", r.embedding_max);
        assert!(r.slope_y > r.slope_nw);
        assert!(r.y.table.spanning_below_separated());
    }
}
