//! The Denjoy counterexample, built by blowing up the orbit `{nα}` of an
//! irrational rotation into wandering gaps `J_n` of length
//! `l_n = 1/((|n|+2)(|n|+3))`.
//!
//! Points are symbolic. A point in a gap is `Gap { n, t }` with `t ∈ [0, 1]`
//! its relative position in `J_n`; a point of the Cantor set is addressed by
//! its collapsed angle, stored as `base + turns·α` so that stepping only
//! touches an integer. Positions on the circle are produced by
//! [`DenjoyMap::embed`] when a metric is needed.

use alloc::vec::Vec;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::circle::{lift_dist, Arc, CirclePoint};
use crate::error::{Error, Result};
use crate::math::{abs, floor, frac, round, sqrt};

/// `Σ_{n ∈ ℤ} l_n`: `l_0 = 1/6` plus two tails of `1/3` each.
pub const GAP_TOTAL: f64 = 5.0 / 6.0;
/// Largest gap index accepted by [`DenjoyMap::gap`].
pub const GAP_INDEX_BUDGET: i64 = 1_000_000;
/// Target bound on the embedding error from truncating the gap sum.
pub const EMBED_TOL: f64 = 1e-6;

const BUCKET_BITS: u32 = 20;

/// Length of the gap `J_n` before normalization.
pub fn gap_length(n: i64) -> f64 {
    let m = n.unsigned_abs() as f64;
    1.0 / ((m + 2.0) * (m + 3.0))
}

/// `Σ_{|n| > depth} l_n = 2/(depth + 3)`.
pub fn gap_tail(depth: i64) -> f64 {
    2.0 / (depth as f64 + 3.0)
}

/// `m·α + extra` split into integer part and fraction in `[0, 1)`, with the
/// product evaluated exactly as a double-double.
fn split_turns(m: i64, alpha: f64, extra: f64) -> (f64, f64) {
    let x = m as f64;
    let hi = x * alpha;
    let lo = libm::fma(x, alpha, -hi);
    let mut whole = floor(hi);
    let mut f = (hi - whole) + lo + extra;
    let carry = floor(f);
    whole += carry;
    f -= carry;
    if f >= 1.0 {
        f -= 1.0;
        whole += 1.0;
    }
    (whole, f)
}

pub fn golden_alpha() -> f64 {
    (sqrt(5.0) - 1.0) / 2.0
}

/// A symbolic point of the Denjoy system.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DenjoyPoint {
    Gap { n: i64, t: f64 },
    Cantor { theta: f64, turns: i64 },
}

impl DenjoyPoint {
    pub fn gap(n: i64, t: f64) -> Self {
        DenjoyPoint::Gap {
            n,
            t: t.clamp(0.0, 1.0),
        }
    }

    pub fn cantor(theta: f64) -> Self {
        DenjoyPoint::Cantor {
            theta: frac(theta),
            turns: 0,
        }
    }

    /// `f^k` on symbols: gap `n` goes to gap `n + k`, angles rotate by `kα`.
    pub fn step(self, k: i64) -> Self {
        match self {
            DenjoyPoint::Gap { n, t } => DenjoyPoint::Gap { n: n + k, t },
            DenjoyPoint::Cantor { theta, turns } => DenjoyPoint::Cantor {
                theta,
                turns: turns + k,
            },
        }
    }

    /// True for points of the Cantor set `NW(f)`, gap endpoints included.
    pub fn is_nonwandering(self) -> bool {
        match self {
            DenjoyPoint::Gap { t, .. } => t == 0.0 || t == 1.0,
            DenjoyPoint::Cantor { .. } => true,
        }
    }

    /// The semiconjugacy `φ` to the rotation: gaps collapse to `{nα}`.
    pub fn collapse(self, alpha: f64) -> f64 {
        match self {
            DenjoyPoint::Gap { n, .. } => split_turns(n, alpha, 0.0).1,
            DenjoyPoint::Cantor { theta, turns } => split_turns(turns, alpha, theta).1,
        }
    }
}

/// `f^k(p)` for the Denjoy system.
pub fn denjoy_step(p: DenjoyPoint, k: i64) -> DenjoyPoint {
    p.step(k)
}

/// Numeric embedding tables for a Denjoy map.
#[derive(Clone, Debug)]
pub struct DenjoyMap {
    alpha: f64,
    truncation: i64,
    scale: f64,
    /// Sorted `{iα}` for `|i| ≤ truncation`.
    angles: Vec<f64>,
    /// `prefix[j]` = total length of the gaps at `angles[..j]`.
    prefix: Vec<f64>,
    buckets: Vec<u32>,
}

impl DenjoyMap {
    /// Golden-mean rotation with the default truncation.
    pub fn golden() -> Self {
        DenjoyMap::new(golden_alpha()).expect("golden mean is a valid angle")
    }

    /// Truncation chosen so the embedding error is at most [`EMBED_TOL`].
    pub fn new(alpha: f64) -> Result<Self> {
        DenjoyMap::with_truncation(alpha, Self::default_truncation())
    }

    /// Smallest depth with `2/(depth+3)/(1+L) ≤ EMBED_TOL`.
    pub fn default_truncation() -> i64 {
        let need = 2.0 / (EMBED_TOL * (1.0 + GAP_TOTAL));
        let mut d = (need - 3.0) as i64;
        while gap_tail(d) / (1.0 + GAP_TOTAL) > EMBED_TOL {
            d += 1;
        }
        while d > 0 && gap_tail(d - 1) / (1.0 + GAP_TOTAL) <= EMBED_TOL {
            d -= 1;
        }
        d
    }

    pub fn with_truncation(alpha: f64, truncation: i64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::InvalidParameter {
                name: "alpha",
                reason: "must lie in (0, 1)",
            });
        }
        for q in 1..=1000u32 {
            let x = q as f64 * alpha;
            if abs(x - round(x)) < 1e-9 {
                return Err(Error::InvalidParameter {
                    name: "alpha",
                    reason: "must be irrational (close to p/q with q <= 1000)",
                });
            }
        }
        if truncation < 1 {
            return Err(Error::InvalidParameter {
                name: "truncation",
                reason: "must be positive",
            });
        }
        let mut pairs: Vec<(f64, f64)> = (-truncation..=truncation)
            .map(|i| (split_turns(i, alpha, 0.0).1, gap_length(i)))
            .collect();
        pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        let mut angles = Vec::with_capacity(pairs.len());
        let mut prefix = Vec::with_capacity(pairs.len() + 1);
        // Compensated running sum.
        let (mut s, mut c) = (0.0f64, 0.0f64);
        prefix.push(0.0);
        for &(a, l) in &pairs {
            angles.push(a);
            let y = l - c;
            let t = s + y;
            c = (t - s) - y;
            s = t;
            prefix.push(s);
        }
        let nb = 1usize << BUCKET_BITS;
        let mut buckets = Vec::with_capacity(nb + 1);
        let mut j = 0usize;
        for b in 0..=nb {
            let edge = b as f64 / nb as f64;
            while j < angles.len() && angles[j] < edge {
                j += 1;
            }
            buckets.push(j as u32);
        }
        Ok(DenjoyMap {
            alpha,
            truncation,
            scale: 1.0 / (1.0 + GAP_TOTAL),
            angles,
            prefix,
            buckets,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn truncation(&self) -> i64 {
        self.truncation
    }

    /// Bound on `|embed - exact embedding|` from truncating the gap sum.
    pub fn embed_error_bound(&self) -> f64 {
        gap_tail(self.truncation) * self.scale
    }

    /// Sum of the truncated gap lengths, a direct partial sum of `L`.
    pub fn truncated_total(&self) -> f64 {
        *self.prefix.last().unwrap()
    }

    /// Total length of the gaps whose angle is strictly below `theta`.
    fn mass_below(&self, theta: f64) -> f64 {
        let nb = (self.buckets.len() - 1) as f64;
        let b = ((theta * nb) as usize).min(self.buckets.len() - 2);
        let lo = self.buckets[b] as usize;
        let hi = self.buckets[b + 1] as usize;
        let j = lo + self.angles[lo..hi].partition_point(|&a| a < theta);
        self.prefix[j]
    }

    /// Embedded position of the Cantor point with collapsed angle `theta`.
    fn embed_angle(&self, theta: f64) -> f64 {
        (theta + self.mass_below(theta)) * self.scale
    }

    /// Normalized length of `J_n`, zero beyond the truncation depth.
    pub fn embedded_gap_length(&self, n: i64) -> f64 {
        if n.abs() <= self.truncation {
            gap_length(n) * self.scale
        } else {
            0.0
        }
    }

    /// Lifted position of `f^k(p)`: `floor(Θ) + e(frac Θ)` where `Θ` is the
    /// unreduced collapsed angle, so continuous motion stays continuous.
    pub fn lift_position(&self, p: DenjoyPoint, k: i64) -> f64 {
        match p {
            DenjoyPoint::Gap { n, t } => {
                let m = n + k;
                let (base, th) = split_turns(m, self.alpha, 0.0);
                base + self.embed_angle(th) + t * self.embedded_gap_length(m)
            }
            DenjoyPoint::Cantor { theta, turns } => {
                let (base, th) = split_turns(turns + k, self.alpha, theta);
                base + self.embed_angle(th)
            }
        }
    }

    pub fn embed(&self, p: DenjoyPoint) -> CirclePoint {
        CirclePoint::new(self.lift_position(p, 0))
    }

    /// The embedded closed gap `J_n`.
    pub fn gap(&self, n: i64) -> Result<Arc> {
        if n.abs() > GAP_INDEX_BUDGET || n.abs() > self.truncation {
            return Err(Error::GapIndex {
                index: n,
                budget: GAP_INDEX_BUDGET.min(self.truncation),
            });
        }
        let a = self.embed(DenjoyPoint::gap(n, 0.0));
        Ok(Arc::from_start_len(a, self.embedded_gap_length(n)))
    }

    /// Max over a seeded sample of `|φ(f^steps x) - R_α^steps(φ x)|`, half
    /// gap points and half Cantor points. The right side is iterated one
    /// rotation at a time.
    pub fn semiconjugacy_check(&self, sample_size: usize, steps: u32, seed: u64) -> f64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut worst = 0.0f64;
        for i in 0..sample_size {
            let p = if i % 2 == 0 {
                DenjoyPoint::gap(rng.gen_range(-GAP_INDEX_BUDGET..=GAP_INDEX_BUDGET), rng.gen())
            } else {
                DenjoyPoint::cantor(rng.gen())
            };
            let lhs = p.step(steps as i64).collapse(self.alpha);
            let mut rhs = p.collapse(self.alpha);
            for _ in 0..steps {
                rhs = frac(rhs + self.alpha);
            }
            worst = worst.max(lift_dist(lhs, rhs));
        }
        worst
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circle::circ_dist;
    use std::sync::OnceLock;

    fn map() -> &'static DenjoyMap {
        static MAP: OnceLock<DenjoyMap> = OnceLock::new();
        MAP.get_or_init(DenjoyMap::golden)
    }

    #[test]
    fn step_examples() {
        assert_eq!(DenjoyPoint::gap(0, 0.5).step(1), DenjoyPoint::gap(1, 0.5));
        assert_eq!(DenjoyPoint::gap(5, 0.3).step(-5), DenjoyPoint::gap(0, 0.3));
        let a = golden_alpha();
        let p = DenjoyPoint::cantor(0.1).step(-2);
        assert!((p.collapse(a) - frac(0.1 - 2.0 * a)).abs() < 1e-15);
    }

    #[test]
    fn total_gap_length_by_partial_sums() {
        let direct: f64 = (-1_000_000i64..=1_000_000).map(gap_length).sum();
        assert!((direct + gap_tail(1_000_000) - GAP_TOTAL).abs() < 1e-12);
        let m = map();
        assert!((m.truncated_total() + gap_tail(m.truncation()) - GAP_TOTAL).abs() < 1e-12);
    }

    #[test]
    fn truncation_meets_bound() {
        let m = map();
        assert!(m.embed_error_bound() <= EMBED_TOL);
        assert!(gap_tail(m.truncation() - 1) / (1.0 + GAP_TOTAL) > EMBED_TOL);
        assert!(m.truncation() >= GAP_INDEX_BUDGET);
    }

    #[test]
    fn embed_of_zero_is_zero() {
        assert_eq!(map().embed(DenjoyPoint::cantor(0.0)).position(), 0.0);
    }

    #[test]
    fn embed_preserves_order() {
        let m = map();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            let (a, b): (f64, f64) = (rng.gen(), rng.gen());
            let (a, b) = if a < b { (a, b) } else { (b, a) };
            if a == b {
                continue;
            }
            let ea = m.embed(DenjoyPoint::cantor(a)).position();
            let eb = m.embed(DenjoyPoint::cantor(b)).position();
            assert!(ea < eb, "{a} {b} {ea} {eb}");
        }
    }

    #[test]
    fn gap_zero_length_and_endpoints() {
        let m = map();
        let g = m.gap(0).unwrap();
        assert!((g.length() - (1.0 / 6.0) / (1.0 + GAP_TOTAL)).abs() < 1e-15);
        let a = m.embed(DenjoyPoint::gap(0, 0.0));
        let b = m.embed(DenjoyPoint::gap(0, 1.0));
        assert_eq!(g.start(), Some(a));
        assert!(circ_dist(g.end().unwrap(), b) < 1e-15);
        assert!(m.gap(GAP_INDEX_BUDGET + 1).is_err());
    }

    #[test]
    fn gaps_are_disjoint() {
        let m = map();
        let mut spans: Vec<(f64, f64)> = (-1000i64..=1000)
            .map(|n| {
                let g = m.gap(n).unwrap();
                let s = g.start().unwrap().position();
                (s, s + g.length())
            })
            .collect();
        spans.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        for w in spans.windows(2) {
            assert!(w[0].1 < w[1].0);
        }
        let (first, last) = (spans[0], spans[spans.len() - 1]);
        assert!(last.1 < first.0 + 1.0);
        let g0 = m.gap(0).unwrap();
        let g1 = m.gap(1).unwrap();
        assert!(!g0.contains(g1.start().unwrap()) && !g1.contains(g0.start().unwrap()));
    }

    #[test]
    fn gap_lengths_decrease_in_index() {
        let m = map();
        for n in 0..1000 {
            let a = m.gap(n).unwrap().length();
            let b = m.gap(n + 1).unwrap().length();
            assert!(b < a);
            assert_eq!(m.gap(-n).unwrap().length(), a);
        }
    }

    #[test]
    fn gap_endpoints_agree_with_cantor_angles() {
        let m = map();
        for n in [-7i64, 0, 3, 250] {
            let a = m.embed(DenjoyPoint::gap(n, 0.0));
            let c = m.embed(DenjoyPoint::cantor(0.0).step(n));
            assert!(circ_dist(a, c) < 1e-12);
        }
    }

    #[test]
    fn semiconjugacy_deviation() {
        let m = map();
        assert!(m.semiconjugacy_check(10_000, 1, 3) <= 1e-12);
        assert!(m.semiconjugacy_check(10_000, 50, 4) <= 5e-11);
    }

    #[test]
    fn no_periodic_points() {
        let a = golden_alpha();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for k in 1..=50i64 {
            let mut min = f64::INFINITY;
            for _ in 0..1000 {
                let p = DenjoyPoint::cantor(rng.gen());
                let d = lift_dist(p.collapse(a), p.step(k).collapse(a));
                min = min.min(d);
            }
            assert!(min > 0.0);
        }
        let mut p = DenjoyPoint::gap(0, 0.5);
        let mut seen = std::collections::HashSet::new();
        for _ in 0..1000 {
            if let DenjoyPoint::Gap { n, .. } = p {
                assert!(seen.insert(n));
            }
            p = p.step(1);
        }
    }

    #[test]
    fn one_step_preserves_cyclic_order() {
        let m = map();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let ccw = |x: f64, y: f64, z: f64| {
            // True iff y lies on the ccw path from x to z.
            frac(y - x) < frac(z - x)
        };
        for _ in 0..1000 {
            let pts: Vec<DenjoyPoint> = (0..3)
                .map(|_| {
                    if rng.gen_bool(0.5) {
                        DenjoyPoint::cantor(rng.gen())
                    } else {
                        DenjoyPoint::gap(rng.gen_range(-500..500), rng.gen())
                    }
                })
                .collect();
            let before: Vec<f64> = pts.iter().map(|&p| m.lift_position(p, 0)).collect();
            let after: Vec<f64> = pts.iter().map(|&p| m.lift_position(p, 1)).collect();
            assert_eq!(
                ccw(before[0], before[1], before[2]),
                ccw(after[0], after[1], after[2])
            );
        }
    }

    #[test]
    fn rejects_rational_alpha() {
        assert!(DenjoyMap::with_truncation(0.5, 10).is_err());
        assert!(DenjoyMap::with_truncation(0.0, 10).is_err());
    }
}
