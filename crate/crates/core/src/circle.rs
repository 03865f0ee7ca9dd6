//! Geometry of `S¹ = ℝ/ℤ` with circumference 1.
//!
//! Distances use the arc-length metric `d(x, y) = min(|x - y|, 1 - |x - y|)`,
//! so every diameter is at most `1/2`. Subcontinua of the circle are exactly
//! points, proper closed arcs and the full circle; [`Arc`] covers all three.

use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::math::{abs, ceil, frac};

/// Tolerance for point equality and arc containment.
pub const POINT_TOL: f64 = 1e-12;

/// A point of the circle, stored as a position in `[0, 1)`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CirclePoint(f64);

impl CirclePoint {
    pub fn new(x: f64) -> Self {
        CirclePoint(frac(x))
    }

    #[inline]
    pub fn position(self) -> f64 {
        self.0
    }

    pub fn shifted(self, by: f64) -> Self {
        CirclePoint::new(self.0 + by)
    }

    /// Counterclockwise offset from `self` to `to`, in `[0, 1)`.
    #[inline]
    pub fn ccw_offset(self, to: CirclePoint) -> f64 {
        frac(to.0 - self.0)
    }
}

/// The arc-length metric on `S¹`.
#[inline]
pub fn circ_dist(x: CirclePoint, y: CirclePoint) -> f64 {
    lift_dist(x.0, y.0)
}

/// Circle distance between two lifted coordinates.
#[inline]
pub fn lift_dist(x: f64, y: f64) -> f64 {
    // `|x - y|` first, so that swapping the arguments is exact.
    let t = frac(abs(x - y));
    if t > 0.5 {
        1.0 - t
    } else {
        t
    }
}

/// An element of `C(S¹)`.
///
/// Proper arcs are stored as a start point and a counterclockwise length in
/// `(0, 1)`. Constructors normalize lengths within [`POINT_TOL`] of 0 or 1 to
/// a point or the full circle.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Arc {
    Point { at: CirclePoint },
    Proper { start: CirclePoint, len: f64 },
    Full,
}

impl Arc {
    pub fn point(p: CirclePoint) -> Self {
        Arc::Point { at: p }
    }

    pub fn full() -> Self {
        Arc::Full
    }

    pub fn from_start_len(start: CirclePoint, len: f64) -> Self {
        if len >= 1.0 - POINT_TOL {
            Arc::Full
        } else if len <= POINT_TOL {
            Arc::Point { at: start }
        } else {
            Arc::Proper { start, len }
        }
    }

    /// The arc traversed counterclockwise from `start` to `end`. Equal
    /// endpoints give a point; the full circle has no endpoint form.
    pub fn from_endpoints(start: CirclePoint, end: CirclePoint) -> Self {
        let len = start.ccw_offset(end);
        if len > 1.0 - POINT_TOL {
            // `end` sits just clockwise of `start`: same point up to rounding.
            return Arc::Point { at: start };
        }
        Arc::from_start_len(start, len)
    }

    pub fn start(&self) -> Option<CirclePoint> {
        match *self {
            Arc::Point { at } => Some(at),
            Arc::Proper { start, .. } => Some(start),
            Arc::Full => None,
        }
    }

    pub fn end(&self) -> Option<CirclePoint> {
        match *self {
            Arc::Point { at } => Some(at),
            Arc::Proper { start, len } => Some(start.shifted(len)),
            Arc::Full => None,
        }
    }

    pub fn length(&self) -> f64 {
        match *self {
            Arc::Point { .. } => 0.0,
            Arc::Proper { len, .. } => len,
            Arc::Full => 1.0,
        }
    }

    pub fn diameter(&self) -> f64 {
        self.length().min(0.5)
    }

    pub fn contains(&self, x: CirclePoint) -> bool {
        match *self {
            Arc::Full => true,
            Arc::Point { at } => circ_dist(at, x) <= POINT_TOL,
            Arc::Proper { start, len } => {
                let off = start.ccw_offset(x);
                off <= len + POINT_TOL || off >= 1.0 - POINT_TOL
            }
        }
    }

    /// `inner ⊂ self`, up to [`POINT_TOL`].
    pub fn contains_arc(&self, inner: &Arc) -> bool {
        match (*self, *inner) {
            (Arc::Full, _) => true,
            (_, Arc::Full) => false,
            (_, Arc::Point { at }) => self.contains(at),
            (Arc::Point { .. }, Arc::Proper { len, .. }) => len <= POINT_TOL,
            (Arc::Proper { start, len }, Arc::Proper { start: s2, len: l2 }) => {
                let mut off = start.ccw_offset(s2);
                if off > 1.0 - POINT_TOL {
                    off -= 1.0;
                }
                off + l2 <= len + POINT_TOL
            }
        }
    }

    /// Midpoint of the complementary open arc and its length, if nonempty.
    pub fn complement(&self) -> Option<(CirclePoint, f64)> {
        match *self {
            Arc::Full => None,
            Arc::Point { at } => Some((at.shifted(0.5), 1.0)),
            Arc::Proper { start, len } => {
                let gap = 1.0 - len;
                Some((start.shifted(len + 0.5 * gap), gap))
            }
        }
    }

    pub fn rotated(&self, by: f64) -> Self {
        match *self {
            Arc::Point { at } => Arc::Point { at: at.shifted(by) },
            Arc::Proper { start, len } => Arc::Proper {
                start: start.shifted(by),
                len,
            },
            Arc::Full => Arc::Full,
        }
    }
}

/// Random subcontinuum: a point or the full circle with probability 1/10
/// each, otherwise a proper arc with uniform start and length.
pub fn random_arc<R: rand::Rng + ?Sized>(rng: &mut R) -> Arc {
    match rng.gen_range(0..10) {
        0 => Arc::point(CirclePoint::new(rng.gen())),
        1 => Arc::Full,
        _ => Arc::from_start_len(CirclePoint::new(rng.gen()), rng.gen_range(0.0..1.0)),
    }
}

/// `d(x, B)`: zero on `B`, a tent over the complement of `B`.
pub fn dist_to_arc(x: CirclePoint, b: &Arc) -> f64 {
    match *b {
        Arc::Full => 0.0,
        Arc::Point { at } => circ_dist(x, at),
        Arc::Proper { start, len } => {
            let off = start.ccw_offset(x);
            if off <= len {
                0.0
            } else {
                (off - len).min(1.0 - off)
            }
        }
    }
}

/// `d(x, B)` for `B = [sb, sb + lb]` with `lb ∈ [0, 1)`.
#[inline]
fn dist_to_span(x: f64, sb: f64, lb: f64) -> f64 {
    let off = frac(x - sb);
    if off <= lb {
        0.0
    } else {
        (off - lb).min(1.0 - off)
    }
}

/// `sup_{x ∈ A} d(x, B)` for `A = [sa, sa + la]`, `B = [sb, sb + lb]`,
/// lengths in `[0, 1]` (0 is a point, 1 the full circle).
///
/// `d(·, B)` is piecewise linear with its only local maximum off `B` at the
/// midpoint of the complementary arc, so the supremum over `A` is attained
/// at an endpoint of `A` or at that midpoint when it lies in `A`.
#[inline]
fn directed(sa: f64, la: f64, sb: f64, lb: f64) -> f64 {
    if lb >= 1.0 {
        return 0.0;
    }
    let gap = 1.0 - lb;
    let mut h = dist_to_span(sa, sb, lb).max(dist_to_span(sa + la, sb, lb));
    if la >= 1.0 || frac(sb + lb + 0.5 * gap - sa) <= la {
        h = h.max(0.5 * gap);
    }
    h
}

/// Hausdorff distance between `[sa, sa + la]` and `[sb, sb + lb]`. Starts
/// may be any lifted coordinates; lengths are clamped to `[0, 1]`.
#[inline]
pub fn hausdorff_spans(sa: f64, la: f64, sb: f64, lb: f64) -> f64 {
    let la = la.clamp(0.0, 1.0);
    let lb = lb.clamp(0.0, 1.0);
    directed(sa, la, sb, lb).max(directed(sb, lb, sa, la)).min(0.5)
}

fn span_of(a: &Arc) -> (f64, f64) {
    match *a {
        Arc::Point { at } => (at.position(), 0.0),
        Arc::Proper { start, len } => (start.position(), len),
        Arc::Full => (0.0, 1.0),
    }
}

/// Closed-form Hausdorff distance between two subcontinua of `S¹`.
pub fn hausdorff(a: &Arc, b: &Arc) -> f64 {
    if a == b {
        return 0.0;
    }
    let (sa, la) = span_of(a);
    let (sb, lb) = span_of(b);
    hausdorff_spans(sa, la, sb, lb)
}

fn discretize(a: &Arc, delta: f64) -> Vec<CirclePoint> {
    match *a {
        Arc::Point { at } => alloc::vec![at],
        Arc::Full => {
            let m = ceil(1.0 / delta) as usize;
            (0..m).map(|i| CirclePoint::new(i as f64 / m as f64)).collect()
        }
        Arc::Proper { start, len } => {
            let m = ceil(len / delta) as usize;
            (0..=m)
                .map(|i| start.shifted(len * i as f64 / m as f64))
                .collect()
        }
    }
}

/// Brute-force Hausdorff distance on `delta`-spaced discretizations of both
/// arcs. Differs from [`hausdorff`] by at most `2·delta`.
pub fn hausdorff_oracle(a: &Arc, b: &Arc, delta: f64) -> Result<f64> {
    if !(delta > 0.0) {
        return Err(Error::InvalidParameter {
            name: "delta",
            reason: "must be positive",
        });
    }
    let pa = discretize(a, delta);
    let pb = discretize(b, delta);
    let sup_inf = |xs: &[CirclePoint], ys: &[CirclePoint]| {
        xs.iter()
            .map(|&x| {
                ys.iter()
                    .map(|&y| circ_dist(x, y))
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max)
    };
    Ok(sup_inf(&pa, &pb).max(sup_inf(&pb, &pa)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn p(x: f64) -> CirclePoint {
        CirclePoint::new(x)
    }

    fn proper(a: f64, b: f64) -> Arc {
        Arc::from_endpoints(p(a), p(b))
    }


    #[test]
    fn circ_dist_examples() {
        assert_eq!(circ_dist(p(0.0), p(0.0)), 0.0);
        assert!((circ_dist(p(0.1), p(0.9)) - 0.2).abs() < 1e-15);
        assert_eq!(circ_dist(p(0.25), p(0.75)), 0.5);
    }

    #[test]
    fn arc_contains_examples() {
        assert!(proper(0.1, 0.4).contains(p(0.2)));
        assert!(proper(0.9, 0.2).contains(p(0.0)));
        assert!(!proper(0.1, 0.4).contains(p(0.5)));
        assert!(Arc::Full.contains(p(0.37)));
        assert!(Arc::point(p(0.3)).contains(p(0.3)));
        assert!(!Arc::point(p(0.3)).contains(p(0.3 + 1e-9)));
    }

    #[test]
    fn length_and_diameter() {
        assert!((proper(0.9, 0.1).length() - 0.2).abs() < 1e-15);
        assert_eq!(Arc::Full.diameter(), 0.5);
        assert_eq!(proper(0.0, 0.8).diameter(), 0.5);
        assert_eq!(Arc::point(p(0.4)).diameter(), 0.0);
    }

    #[test]
    fn normalization_at_the_ends() {
        assert_eq!(Arc::from_start_len(p(0.2), 1.0 - 1e-13), Arc::Full);
        assert_eq!(
            Arc::from_start_len(p(0.2), 1e-13),
            Arc::point(p(0.2))
        );
    }

    #[test]
    fn hausdorff_examples() {
        let a = proper(0.3, 0.6);
        assert_eq!(hausdorff(&a, &a), 0.0);
        for x in [0.0, 0.13, 0.5, 0.99] {
            assert_eq!(hausdorff(&Arc::point(p(x)), &Arc::Full), 0.5);
        }
        assert_eq!(
            hausdorff(&Arc::point(p(0.0)), &Arc::point(p(0.5))),
            0.5
        );
    }

    #[test]
    fn quarter_arcs_match_oracle() {
        // Frozen from hausdorff_oracle(δ = 1e-4): 0.375, attained at the
        // complement midpoint 0.125 of B.
        let a = proper(0.0, 0.25);
        let b = proper(0.5, 0.75);
        let oracle = hausdorff_oracle(&a, &b, 1e-4).unwrap();
        assert!((oracle - 0.375).abs() <= 2e-4);
        assert!((hausdorff(&a, &b) - 0.375).abs() < 1e-15);
    }

    #[test]
    fn oracle_rejects_bad_delta() {
        assert!(hausdorff_oracle(&Arc::Full, &Arc::Full, 0.0).is_err());
        assert!(hausdorff_oracle(&Arc::Full, &Arc::Full, -1.0).is_err());
    }

    #[test]
    fn oracle_self_distance_and_two_points() {
        let a = proper(0.12, 0.71);
        assert!(hausdorff_oracle(&a, &a, 1e-3).unwrap() <= 2e-3);
        let d = hausdorff_oracle(&Arc::point(p(0.0)), &Arc::point(p(0.5)), 1e-3).unwrap();
        assert_eq!(d, 0.5);
    }

    #[test]
    fn complement_midpoint_case() {
        // Each arc contains the other's complement midpoint; the larger
        // half-gap (0.7/2) wins.
        let a = proper(0.6, 0.9);
        let b = proper(0.0, 0.5);
        let h = hausdorff(&a, &b);
        assert!((h - 0.35).abs() < 1e-12);
        let o = hausdorff_oracle(&a, &b, 1e-3).unwrap();
        assert!((h - o).abs() <= 2e-3);
    }

    #[test]
    fn closed_form_agrees_with_oracle_on_random_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let a = random_arc(&mut rng);
            let b = random_arc(&mut rng);
            let h = hausdorff(&a, &b);
            let o = hausdorff_oracle(&a, &b, 1e-3).unwrap();
            assert!((h - o).abs() <= 2e-3, "{a:?} {b:?} {h} {o}");
        }
    }

    #[test]
    fn metric_axioms_on_random_triples() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..1000 {
            let (a, b, c) = (
                random_arc(&mut rng),
                random_arc(&mut rng),
                random_arc(&mut rng),
            );
            let ab = hausdorff(&a, &b);
            assert_eq!(ab, hausdorff(&b, &a));
            assert!(ab <= 0.5);
            assert!(ab <= hausdorff(&a, &c) + hausdorff(&c, &b) + 1e-12);
            let (x, y, z) = (p(rng.gen()), p(rng.gen()), p(rng.gen()));
            assert_eq!(circ_dist(x, y), circ_dist(y, x));
            assert!(circ_dist(x, y) <= circ_dist(x, z) + circ_dist(z, y) + 1e-12);
        }
    }

    #[test]
    fn zero_distance_iff_equal() {
        let a = proper(0.2, 0.4);
        let b = proper(0.2, 0.4 + 1e-6);
        assert!(hausdorff(&a, &b) > 0.0);
        assert!(hausdorff(&Arc::Full, &Arc::from_start_len(p(0.3), 0.999)) > 0.0);
    }

    #[test]
    fn containment_of_arcs() {
        let outer = proper(0.9, 0.3);
        assert!(outer.contains_arc(&proper(0.95, 0.1)));
        assert!(!outer.contains_arc(&proper(0.85, 0.1)));
        assert!(outer.contains_arc(&Arc::point(p(0.0))));
        assert!(Arc::Full.contains_arc(&outer));
        assert!(!outer.contains_arc(&Arc::Full));
    }
}
