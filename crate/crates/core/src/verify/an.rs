use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

use crate::circle::lift_dist;
use crate::dynamics::{gap_length, DenjoyMap, DenjoyPoint, EMBED_TOL, GAP_TOTAL};
use crate::error::{Error, Result};
use crate::math::{floor, frac, sqrt};

/// Sorted disjoint inclusive integer intervals.
type IndexSet = Vec<(i64, i64)>;

fn normalize(mut v: IndexSet) -> IndexSet {
    v.sort_unstable();
    let mut out: IndexSet = Vec::with_capacity(v.len());
    for (a, b) in v {
        match out.last_mut() {
            Some(last) if a <= last.1 + 1 => last.1 = last.1.max(b),
            _ => out.push((a, b)),
        }
    }
    out
}

fn size(v: &IndexSet) -> u64 {
    v.iter().map(|&(a, b)| (b - a + 1) as u64).sum()
}

/// `f⁻¹(A) ∪ A₁`: `f` maps `J_m` onto `J_{m+1}`, so preimages shift indices
/// down by one.
fn next_level(a: &IndexSet, a1: &IndexSet) -> IndexSet {
    let mut v: IndexSet = a.iter().map(|&(x, y)| (x - 1, y - 1)).collect();
    v.extend_from_slice(a1);
    normalize(v)
}

fn indices(v: &IndexSet) -> impl Iterator<Item = i64> + '_ {
    v.iter().flat_map(|&(a, b)| a..=b)
}

/// Largest `M ≥ 0` with `(M + 2)(M + 3) < t`, or `None` if `M = 0` fails.
fn radius_below(t: f64) -> Option<i64> {
    let ok = |m: i64| (((m + 2) * (m + 3)) as f64) < t;
    if !ok(0) {
        return None;
    }
    // root of (m + 2)(m + 3) = t
    let mut m = floor((sqrt(1.0 + 4.0 * t) - 5.0) / 2.0).max(0.0) as i64;
    while !ok(m) {
        m -= 1;
    }
    while ok(m + 1) {
        m += 1;
    }
    Some(m)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnLevel {
    pub n: usize,
    pub size: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnReport {
    pub eps: f64,
    /// `A₁ = {m : |m| ≤ a1_radius}`.
    pub a1_radius: i64,
    pub a1_size: u64,
    /// The closed form agrees with a scan of embedded gap lengths.
    pub a1_scan_agrees: bool,
    pub max_level: usize,
    /// `min_n (|A_n| - n)` over all levels.
    pub min_margin: i64,
    /// `|A_n| = |A₁| + n - 1` at every level.
    pub sizes_follow_window: bool,
    /// Sizes at powers of two.
    pub levels: Vec<AnLevel>,
    pub witness_max_level: usize,
    /// `ε - 2·EMBED_TOL`.
    pub separation_bound: f64,
    /// Smallest pairwise `d_n` among the witnesses of any checked level.
    pub min_separation: f64,
    pub pass: bool,
}

/// Witnesses for `A_n`: a Cantor point at the midpoint of each
/// complementary interval of the collapsed angles.
pub fn an_witnesses(alpha: f64, a: &[(i64, i64)]) -> Vec<DenjoyPoint> {
    let mut th: Vec<f64> = indices(&a.to_vec())
        .map(|m| DenjoyPoint::gap(m, 0.0).collapse(alpha))
        .collect();
    th.sort_by(|x, y| x.partial_cmp(y).unwrap());
    let k = th.len();
    (0..k)
        .map(|i| {
            let lo = th[i];
            let hi = if i + 1 < k { th[i + 1] } else { th[0] + 1.0 };
            DenjoyPoint::cantor(frac(0.5 * (lo + hi)))
        })
        .collect()
}

/// Smallest pairwise `d_n` among points, with `d_n = max_{k<n}` distance of
/// the embedded `k`-th images.
fn min_pairwise_dyn_dist(d: &DenjoyMap, pts: &[DenjoyPoint], n: usize) -> f64 {
    let pos: Vec<Vec<f64>> = pts
        .iter()
        .map(|&p| (0..n as i64).map(|k| d.lift_position(p, k)).collect())
        .collect();
    let mut worst = f64::INFINITY;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let dist = (0..n)
                .map(|k| lift_dist(pos[i][k], pos[j][k]))
                .fold(0.0f64, f64::max);
            worst = worst.min(dist);
        }
    }
    worst
}

/// Runs the wandering-interval recursion up to `max_level` and checks the
/// witnesses' pairwise separation for every level up to `witness_level`.
pub fn build_an(d: &DenjoyMap, eps: f64, max_level: usize, witness_level: usize) -> Result<AnReport> {
    let scale = 1.0 / (1.0 + GAP_TOTAL);
    if !(eps > 0.0) || gap_length(0) * scale <= eps {
        return Err(Error::InvalidParameter {
            name: "eps",
            reason: "must be positive and below the largest embedded gap",
        });
    }
    if max_level == 0 || witness_level > max_level {
        return Err(Error::InvalidParameter {
            name: "max_level",
            reason: "need 1 ≤ witness level ≤ max level",
        });
    }
    // l_m/(1 + L) > ε  ⇔  (|m| + 2)(|m| + 3) < 1/(ε(1 + L))
    let radius = radius_below(1.0 / (eps * (1.0 + GAP_TOTAL))).unwrap();
    let a1: IndexSet = alloc::vec![(-radius, radius)];
    let scan: IndexSet = normalize(
        (-(radius + 10)..=radius + 10)
            .filter(|&m| d.embedded_gap_length(m) > eps)
            .map(|m| (m, m))
            .collect(),
    );
    let a1_size = size(&a1);
    let mut a = a1.clone();
    let mut min_margin = i64::MAX;
    let mut sizes_follow_window = true;
    let mut levels = Vec::new();
    let mut min_separation = f64::INFINITY;
    for n in 1..=max_level {
        if n > 1 {
            a = next_level(&a, &a1);
        }
        let s = size(&a);
        min_margin = min_margin.min(s as i64 - n as i64);
        sizes_follow_window &= s == a1_size + n as u64 - 1;
        if n.is_power_of_two() {
            levels.push(AnLevel { n, size: s });
        }
        if n <= witness_level {
            let w = an_witnesses(d.alpha(), &a);
            min_separation = min_separation.min(min_pairwise_dyn_dist(d, &w, n));
        }
    }
    let separation_bound = eps - 2.0 * EMBED_TOL;
    let pass = min_margin >= 0 && scan == a1 && min_separation >= separation_bound;
    Ok(AnReport {
        eps,
        a1_radius: radius,
        a1_size,
        a1_scan_agrees: scan == a1,
        max_level,
        min_margin,
        sizes_follow_window,
        levels,
        witness_max_level: witness_level,
        separation_bound,
        min_separation,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::golden_alpha;

    #[test]
    fn recursion_on_intervals() {
        let a1: IndexSet = alloc::vec![(-2, 2)];
        let a2 = next_level(&a1, &a1);
        assert_eq!(a2, alloc::vec![(-3, 2)]);
        let gappy: IndexSet = alloc::vec![(0, 0), (5, 6)];
        assert_eq!(next_level(&gappy, &a1), alloc::vec![(-2, 2), (4, 5)]);
        assert_eq!(size(&alloc::vec![(-3, 2), (4, 5)]), 8);
    }

    #[test]
    fn radius_matches_integer_scan() {
        for t in [6.5, 12.0, 12.0001, 27.27, 30.0, 1e6, 1234.5] {
            let m = radius_below(t).unwrap();
            assert!((((m + 2) * (m + 3)) as f64) < t);
            assert!((((m + 3) * (m + 4)) as f64) >= t);
        }
        assert_eq!(radius_below(6.0), None);
    }

    #[test]
    fn witnesses_separate_components() {
        let a: IndexSet = alloc::vec![(-2, 2)];
        let w = an_witnesses(golden_alpha(), &a);
        assert_eq!(w.len(), 5);
        let mut th: Vec<f64> = w.iter().map(|p| p.collapse(golden_alpha())).collect();
        th.sort_by(|x, y| x.partial_cmp(y).unwrap());
        th.dedup();
        assert_eq!(th.len(), 5);
    }

    #[test]
    fn eps_too_large_is_refused() {
        let d = DenjoyMap::with_truncation(golden_alpha(), 1000).unwrap();
        assert!(build_an(&d, 0.1, 10, 5).is_err());
        assert!(build_an(&d, 0.05, 10, 5).is_ok());
    }
}
