use alloc::vec::Vec;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::circle::{hausdorff_spans, random_arc, Arc};
use crate::dynamics::LiftMap;
use crate::error::{Error, Result};
use crate::math::{floor, frac, ln};

/// Consecutive base arcs overlap by this fraction of the earlier arc.
pub const OVERLAP: f64 = 1e-6;
/// Relative precision of the right-endpoint bisection.
const BISECT_REL: f64 = 1e-12;
/// Refuse sweeps that need more arcs than this.
pub const MAX_BASE_ARCS: usize = 1 << 22;

/// Chart `u ↦ base + u` used by the cover. Points are tracked through the
/// orbit of `base` by their increments, so arcs much shorter than the float
/// spacing at `base + u` keep their length.
#[derive(Clone, Debug)]
struct Chart<'a> {
    f: &'a LiftMap,
    /// `F^k(base)` for `k < n`.
    bases: Vec<f64>,
}

impl<'a> Chart<'a> {
    fn new(f: &'a LiftMap, base: f64, n: usize) -> Self {
        let mut bases = Vec::with_capacity(n);
        let mut c = base;
        for _ in 0..n {
            bases.push(c);
            c = f.lift(c);
        }
        Chart { f, bases }
    }

    fn orbit(&self, u: f64) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.bases.len());
        let mut u = u;
        for (k, &c) in self.bases.iter().enumerate() {
            out.push(u);
            if k + 1 < self.bases.len() {
                u = self.f.lift_relative(c, u).1;
            }
        }
        out
    }

    /// `max_k |f^k([s, e])|` over the horizon, stopping once it reaches
    /// `bound`.
    fn dyn_len(&self, s_orbit: &[f64], e: f64, bound: f64) -> f64 {
        let mut u = e;
        let mut worst = 0.0f64;
        for (k, &c) in self.bases.iter().enumerate() {
            worst = worst.max(u - s_orbit[k]);
            if worst >= bound {
                break;
            }
            if k + 1 < self.bases.len() {
                u = self.f.lift_relative(c, u).1;
            }
        }
        worst
    }
}

/// Base point of the chart: the fixed point with the largest derivative
/// when the rotation number is an integer, else 0. Arcs pile up at
/// repellers, so that is where the chart needs its resolution.
pub fn chart_base(f: &LiftMap) -> f64 {
    let Some((p, 1)) = f.rational_rotation() else {
        return 0.0;
    };
    let pts = f.fixed_points_of_power(p, 1);
    let Some(&c) = pts
        .iter()
        .max_by(|a, b| f.derivative(**a).partial_cmp(&f.derivative(**b)).unwrap())
    else {
        return 0.0;
    };
    // prefer a float that is fixed exactly
    let mut cands = [c; 5];
    let (mut lo, mut hi) = (c, c);
    for i in 0..2 {
        lo = next_down(lo);
        hi = next_up(hi);
        cands[1 + 2 * i] = lo;
        cands[2 + 2 * i] = hi;
    }
    cands
        .iter()
        .copied()
        .find(|&x| f.lift(x) - x == p as f64)
        .unwrap_or(c)
}

fn next_up(x: f64) -> f64 {
    if x == 0.0 {
        return f64::from_bits(1);
    }
    let b = x.to_bits();
    f64::from_bits(if x > 0.0 { b + 1 } else { b - 1 })
}

fn next_down(x: f64) -> f64 {
    -next_up(-x)
}

/// Base arcs `I_j = [starts[j], ends[j]]` in chart coordinates, numbered
/// counterclockwise from `-1/2`, each of `d_n`-diameter below `ε/2`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntervalCover {
    pub n: usize,
    pub eps: f64,
    pub base: f64,
    pub starts: Vec<f64>,
    pub ends: Vec<f64>,
    /// Largest `d_n`-diameter among the base arcs.
    pub max_diameter: f64,
}

/// Sweeps `[-1/2, 1/2)` in the chart, extending each arc to maximal
/// `d_n`-diameter below `ε/2` by bisection on its right endpoint.
pub fn build_interval_cover(f: &LiftMap, n: usize, eps: f64) -> Result<IntervalCover> {
    if n == 0 {
        return Err(Error::InvalidParameter {
            name: "n",
            reason: "must be at least 1",
        });
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidParameter {
            name: "eps",
            reason: "must lie in (0, 1)",
        });
    }
    let half = 0.5 * eps;
    let base = chart_base(f);
    let chart = Chart::new(f, base, n);
    let (mut starts, mut ends) = (Vec::new(), Vec::new());
    let mut max_diameter = 0.0f64;
    let mut x = -0.5;
    let mut guess = 0.5 * half;
    loop {
        if starts.len() >= MAX_BASE_ARCS {
            return Err(Error::Budget {
                dimension: "base arcs",
                requested: starts.len() as u64 + 1,
                limit: MAX_BASE_ARCS as u64,
            });
        }
        let s_orbit = chart.orbit(x);
        let valid = |e: f64| chart.dyn_len(&s_orbit, e, half) < half;
        let mut lo;
        let mut hi = x + guess.min(half);
        if valid(hi) {
            loop {
                lo = hi;
                let next = x + 2.0 * (hi - x);
                if next - x >= half {
                    hi = x + half;
                    break;
                }
                hi = next;
                if !valid(hi) {
                    break;
                }
            }
        } else {
            loop {
                let mid = x + 0.5 * (hi - x);
                if mid <= x {
                    return Err(Error::Cover("no float arc to the right of a point meets the bound"));
                }
                if valid(mid) {
                    lo = mid;
                    break;
                }
                hi = mid;
            }
        }
        while hi - lo > BISECT_REL * (lo - x) {
            let mid = lo + 0.5 * (hi - lo);
            if mid <= lo || mid >= hi {
                break;
            }
            if valid(mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let mut y = lo;
        let ov = (y - x) * OVERLAP;
        if y >= 0.5 {
            y = y.min(0.5 + ov);
        }
        max_diameter = max_diameter.max(chart.dyn_len(&s_orbit, y, f64::INFINITY));
        starts.push(x);
        ends.push(y);
        if y >= 0.5 {
            break;
        }
        guess = y - x;
        x = y - ov;
    }
    Ok(IntervalCover {
        n,
        eps,
        base,
        starts,
        ends,
        max_diameter,
    })
}

/// Position of a circle point in the chart, in `[-1/2, 1/2)`.
fn to_chart(base: f64, p: f64) -> f64 {
    let u = p - base;
    u - floor(u + 0.5)
}

/// An element of `C(S¹)` in chart coordinates: `[a, a + len]`.
#[derive(Clone, Copy, Debug, PartialEq)]
struct Span {
    a: f64,
    len: f64,
    full: bool,
}

impl IntervalCover {
    pub fn len(&self) -> usize {
        self.starts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.starts.is_empty()
    }

    pub fn family_count(&self) -> u64 {
        let n = self.len() as u64;
        n * n
    }

    /// Consecutive arcs overlap or touch and the last one closes up on the
    /// first, so the closed arcs cover the circle.
    pub fn covers_circle(&self) -> bool {
        let m = self.len();
        m > 0
            && self.starts[0] == -0.5
            && (0..m).all(|j| self.starts[j] < self.ends[j])
            && (1..m).all(|j| self.starts[j] <= self.ends[j - 1])
            && self.ends[m - 1] >= self.starts[0] + 1.0
    }

    /// Lifted start of `I_{j + t}` seen from `I_j`.
    fn s_at(&self, j: usize, t: usize) -> f64 {
        let m = self.len();
        let i = j + t;
        self.starts[i % m] + (i / m) as f64
    }

    fn e_at(&self, j: usize, t: usize) -> f64 {
        let m = self.len();
        let i = j + t;
        self.ends[i % m] + (i / m) as f64
    }

    fn span(&self, arc: &Arc) -> Span {
        match *arc {
            Arc::Full => Span {
                a: -0.5,
                len: 1.0,
                full: true,
            },
            Arc::Point { at } => Span {
                a: to_chart(self.base, at.position()),
                len: 0.0,
                full: false,
            },
            Arc::Proper { start, len } => Span {
                a: to_chart(self.base, start.position()),
                len,
                full: false,
            },
        }
    }

    /// Least `j` with `a ∈ I_j`.
    fn least_index(&self, a: f64) -> usize {
        self.ends.partition_point(|&e| e < a).min(self.len() - 1)
    }

    /// Window `(j1, k)`: `k` is least with `[a, a + len] ⊂ I_{j1} ∪ … ∪ I_{j1+k}`,
    /// capped at `N - 1`.
    fn window(&self, j1: usize, s: &Span) -> usize {
        let m = self.len();
        if s.full {
            return m - 1;
        }
        let b = s.a + s.len;
        let (mut lo, mut hi) = (0usize, m);
        while lo < hi {
            let mid = (lo + hi) / 2;
            if self.e_at(j1, mid) >= b {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        lo.min(m - 1)
    }

    fn first_index(&self, j: usize, k: usize) -> usize {
        let m = self.len();
        (j + m - k.div_ceil(2) % m) % m
    }

    /// Family of `(j, k)`: arcs inside `I_{j1} ∪ … ∪ I_{j1+k}` that contain
    /// `I_{j1+1} ∪ … ∪ I_{j1+k-1}` (`I_{j1} ∩ I_{j1+1}` when `k = 1`), where
    /// `j1 = j - ⌈k/2⌉`. For `k = N - 1` the outer window is the circle.
    fn member(&self, s: &Span, j: usize, k: usize) -> bool {
        let m = self.len();
        let j1 = self.first_index(j, k);
        let r0 = self.s_at(j1, 0);
        let r_len = if k + 1 >= m { 1.0 } else { self.e_at(j1, k) - r0 };
        let inside = if r_len >= 1.0 {
            true
        } else if s.full {
            false
        } else {
            frac(s.a - r0) + s.len <= r_len
        };
        if !inside {
            return false;
        }
        let (i0, i_len) = match k {
            0 => return true,
            1 => {
                let i0 = self.s_at(j1, 1);
                (i0, self.e_at(j1, 0) - i0)
            }
            _ => {
                let i0 = self.s_at(j1, 1);
                (i0, self.e_at(j1, k - 1) - i0)
            }
        };
        if s.full {
            return true;
        }
        if i_len >= 1.0 {
            return false;
        }
        frac(i0 - s.a) + i_len.max(0.0) <= s.len
    }

    /// Family `(j, k)` of an arc by the least-index rule; other indices
    /// containing the start and then all families are tried if the rule's
    /// family does not contain the arc. The flag reports a fallback.
    pub fn assign(&self, arc: &Arc) -> Option<((usize, usize), bool)> {
        let s = self.span(arc);
        let m = self.len();
        let j1 = self.least_index(s.a);
        let k = self.window(j1, &s);
        let j = (j1 + k.div_ceil(2)) % m;
        if self.member(&s, j, k) {
            return Some(((j, k), false));
        }
        let mut i = j1 + 1;
        while i < m && self.starts[i] <= s.a {
            let k = self.window(i, &s);
            let j = (i + k.div_ceil(2)) % m;
            if self.member(&s, j, k) {
                return Some(((j, k), true));
            }
            i += 1;
        }
        for k in 0..m {
            for j in 0..m {
                if self.member(&s, j, k) {
                    return Some(((j, k), true));
                }
            }
        }
        None
    }

    /// Random member of family `(j, k)`, or `None` if the draw falls
    /// outside it.
    fn sample_member(&self, rng: &mut ChaCha8Rng, j: usize, k: usize) -> Option<Arc> {
        let m = self.len();
        let j1 = self.first_index(j, k);
        let (a, b) = if k == 0 {
            let a = rng.gen_range(self.s_at(j1, 0)..=self.e_at(j1, 0));
            (a, rng.gen_range(a..=self.e_at(j1, 0)))
        } else {
            let a = rng.gen_range(self.s_at(j1, 0)..=self.s_at(j1, 1));
            let lo = self.e_at(j1, k - 1);
            let hi = self.e_at(j1, k).min(a + 1.0);
            if lo > hi {
                return Some(Arc::Full);
            }
            (a, rng.gen_range(lo..=hi))
        };
        let arc = if b - a >= 1.0 {
            Arc::Full
        } else if b == a {
            Arc::point(crate::CirclePoint::new(self.base + a))
        } else {
            Arc::Proper {
                start: crate::CirclePoint::new(self.base + a),
                len: b - a,
            }
        };
        let _ = m;
        self.member(&self.span(&arc), j, k).then_some(arc)
    }

    /// `max_{k<n} d_H(f^k A, f^k B)` with both arcs tracked in the chart.
    fn dyn_hausdorff(&self, chart: &Chart, x: &Arc, y: &Arc) -> f64 {
        let track = |arc: &Arc| -> (Vec<f64>, Vec<f64>, bool) {
            let s = self.span(arc);
            let a = chart.orbit(s.a);
            let b = if s.len == 0.0 { a.clone() } else { chart.orbit(s.a + s.len) };
            (a, b, s.full)
        };
        let (xa, xb, xf) = track(x);
        let (ya, yb, yf) = track(y);
        let mut worst = 0.0f64;
        for k in 0..chart.bases.len() {
            let lx = if xf { 1.0 } else { xb[k] - xa[k] };
            let ly = if yf { 1.0 } else { yb[k] - ya[k] };
            worst = worst.max(hausdorff_spans(xa[k], lx, ya[k], ly));
        }
        worst
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoverReport {
    pub n: usize,
    pub eps: f64,
    /// Number `N` of base arcs.
    pub base_arcs: usize,
    pub family_count: u64,
    pub covers_circle: bool,
    pub max_base_diameter: f64,
    pub sampled_arcs: usize,
    pub covered_fraction: f64,
    /// Arcs whose least-index family did not contain them.
    pub fallbacks: usize,
    pub uncovered_witness: Option<Arc>,
    pub sampled_pairs: usize,
    pub max_pair_distance: f64,
    /// `log N² / log n`.
    pub log_ratio: f64,
    pub pass: bool,
}

/// Builds the cover for `(n, ε)`, assigns `arcs` random arcs to families
/// and measures `d_H^n` on `pairs` random same-family pairs.
pub fn verify_cover(
    f: &LiftMap,
    n: usize,
    eps: f64,
    arcs: usize,
    pairs: usize,
    seed: u64,
) -> Result<CoverReport> {
    let cover = build_interval_cover(f, n, eps)?;
    let chart = Chart::new(f, cover.base, n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut covered = 0usize;
    let mut fallbacks = 0usize;
    let mut uncovered_witness = None;
    for _ in 0..arcs {
        let a = random_arc(&mut rng);
        match cover.assign(&a) {
            Some((_, fb)) => {
                covered += 1;
                fallbacks += fb as usize;
            }
            None => {
                uncovered_witness.get_or_insert(a);
            }
        }
    }
    let mut max_pair_distance = 0.0f64;
    let mut sampled_pairs = 0usize;
    let mut attempts = 0usize;
    while sampled_pairs < pairs && attempts < 100 * pairs.max(1) {
        attempts += 1;
        let a = random_arc(&mut rng);
        let Some(((j, k), _)) = cover.assign(&a) else {
            continue;
        };
        let Some(b) = cover.sample_member(&mut rng, j, k) else {
            continue;
        };
        max_pair_distance = max_pair_distance.max(cover.dyn_hausdorff(&chart, &a, &b));
        sampled_pairs += 1;
    }
    let base_arcs = cover.len();
    let family_count = cover.family_count();
    let covers_circle = cover.covers_circle();
    let covered_fraction = if arcs == 0 { 1.0 } else { covered as f64 / arcs as f64 };
    let log_ratio = if n > 1 {
        ln(family_count as f64) / ln(n as f64)
    } else {
        f64::INFINITY
    };
    let pass = covers_circle
        && cover.max_diameter < 0.5 * eps
        && covered == arcs
        && sampled_pairs == pairs
        && max_pair_distance < eps;
    Ok(CoverReport {
        n,
        eps,
        base_arcs,
        family_count,
        covers_circle,
        max_base_diameter: cover.max_diameter,
        sampled_arcs: arcs,
        covered_fraction,
        fallbacks,
        uncovered_witness,
        sampled_pairs,
        max_pair_distance,
        log_ratio,
        pass,
    })
}
