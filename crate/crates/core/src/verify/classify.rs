use alloc::string::String;
use serde::{Deserialize, Serialize};

use crate::dynamics::{Family, LiftMap, SystemDescriptor, System};
use crate::entropy::{estimate_hpol, EstimateRun, Protocol, Target};
use crate::error::Result;

/// Band for a slope whose expected value is 0.
pub const ZERO_BAND: (f64, f64) = (0.0, 0.25);
/// Band for a slope whose expected value is 2.
pub const TWO_BAND: (f64, f64) = (1.5, 2.5);
/// Allowed `|slope(f^q) - slope(f)|`.
pub const POWER_TOL: f64 = 0.3;

pub fn band_for(expected: u32) -> (f64, f64) {
    if expected == 0 {
        ZERO_BAND
    } else {
        TWO_BAND
    }
}

/// Reduction to `f^q` for a rational rotation number `p/q`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReductionReport {
    pub p: i64,
    pub q: u64,
    pub slope_f: f64,
    pub slope_fq: f64,
    /// Consecutive fixed points `a < b` of `f^q` (mod 1).
    pub invariant_arc: Option<(f64, f64)>,
    /// `max |F^q(x) - x - p|` over the two endpoints.
    pub endpoint_residual: f64,
    /// `|F^q(m) - m - p|` at the midpoint: `f^q` is not the identity there.
    pub midpoint_motion: f64,
    /// `F^q - p` maps sample points of `[a, b]` into `[a, b]`.
    pub arc_invariant: bool,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassifyReport {
    pub system: String,
    pub expected: u32,
    pub band: (f64, f64),
    pub measured: f64,
    pub run: EstimateRun,
    pub reduction: Option<ReductionReport>,
    pub pass: bool,
}

/// `f^q` with consecutive fixed points bounding an invariant arc on which
/// `f^q` moves points, and equal base-space slopes for `f` and `f^q`.
pub fn verify_reduction(f: &LiftMap, base: &Protocol) -> Result<Option<ReductionReport>> {
    let Some((p, q)) = f.rational_rotation() else {
        return Ok(None);
    };
    let fq = LiftMap::new(f.family(), f.power() * q as u32)?;
    let slope_f = estimate_hpol(&System::Lift(f.clone()), Target::Base, base)?
        .estimate
        .estimate;
    let slope_fq = estimate_hpol(&System::Lift(fq.clone()), Target::Base, base)?
        .estimate
        .estimate;
    let g = |x: f64| fq.lift(x) - p as f64;
    let pts = f.fixed_points_of_power(p, q);
    let (mut residual, mut motion, mut invariant) = (f64::INFINITY, 0.0, false);
    let arc = if pts.len() >= 2 {
        let (a, b) = (pts[0], pts[1]);
        residual = (g(a) - a).abs().max((g(b) - b).abs());
        let m = 0.5 * (a + b);
        motion = (g(m) - m).abs();
        invariant = (1..100).all(|i| {
            let x = a + (b - a) * i as f64 / 100.0;
            let y = g(x);
            y >= a - 1e-12 && y <= b + 1e-12
        });
        Some((a, b))
    } else {
        None
    };
    let pass = arc.is_some()
        && residual <= 1e-9
        && motion > 1e-6
        && invariant
        && (slope_f - slope_fq).abs() <= POWER_TOL;
    Ok(Some(ReductionReport {
        p,
        q,
        slope_f,
        slope_fq,
        invariant_arc: arc,
        endpoint_residual: residual,
        midpoint_motion: motion,
        arc_invariant: invariant,
        pass,
    }))
}

/// Expected `h_pol(C(f))` from the classification against the hyperspace
/// slope, plus the reduction to `f^q` for rational Morse–Smale maps when a
/// base-space protocol is given.
pub fn classify_and_verify(
    desc: &SystemDescriptor,
    system: &System,
    hyperspace: &Protocol,
    base: Option<&Protocol>,
) -> Result<ClassifyReport> {
    let class = desc.classify()?;
    let expected = class.expected_hyperspace_hpol;
    let band = band_for(expected);
    let run = estimate_hpol(system, Target::Hyperspace, hyperspace)?;
    let measured = run.estimate.estimate;
    let mut pass = measured >= band.0 && measured <= band.1;
    let reduction = match (system, base) {
        (System::Lift(f), Some(b)) if matches!(f.family(), Family::RationalMs { .. }) => {
            verify_reduction(f, b)?
        }
        _ => None,
    };
    if let Some(r) = &reduction {
        pass &= r.pass;
    }
    Ok(ClassifyReport {
        system: desc.name.clone(),
        expected,
        band,
        measured,
        run,
        reduction,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entropy::Sampler;

    fn base_protocol() -> Protocol {
        Protocol {
            sampler: Sampler::Orbit {
                per_domain: 4,
                stride: 1,
                back: 16,
                forward: 16,
            },
            eps: alloc::vec![0.05],
            n: alloc::vec![8, 16, 32, 64, 128],
            budget: Default::default(),
        }
    }

    #[test]
    fn rational_ms_reduction() {
        let f = LiftMap::rational_ms(1, 2, 0.5).unwrap();
        let r = verify_reduction(&f, &base_protocol()).unwrap().unwrap();
        assert_eq!((r.p, r.q), (1, 2));
        let (a, b) = r.invariant_arc.unwrap();
        assert!(a < b);
        assert!(r.endpoint_residual < 1e-9 && r.midpoint_motion > 1e-3 && r.arc_invariant);
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn irrational_rotation_has_no_reduction() {
        let f = LiftMap::rotation(core::f64::consts::SQRT_2 - 1.0).unwrap();
        assert!(verify_reduction(&f, &base_protocol()).unwrap().is_none());
    }

    #[test]
    fn rotation_is_classified_zero() {
        let desc = &SystemDescriptor::builtins()[0];
        let sys = desc.build().unwrap();
        let p = Protocol {
            sampler: Sampler::Grid { delta: 1.0 / 64.0 },
            eps: alloc::vec![0.2, 0.1],
            n: alloc::vec![8, 16, 32, 64],
            budget: Default::default(),
        };
        let r = classify_and_verify(desc, &sys, &p, None).unwrap();
        assert_eq!(r.expected, 0);
        assert!(r.pass, "{}", r.measured);
    }
}
