//! Sample builders: uniform grids, orbit-adapted samples for maps with
//! periodic points, and symbolic Denjoy samples.
//!
//! Uniform grids cannot resolve points close to a repelling periodic orbit,
//! so for Morse–Smale maps every orbit in a grid finishes its transit within
//! a few dozen iterates and counts stop growing. The orbit-adapted sample
//! instead takes a fundamental domain `D` in each cycle of wandering
//! intervals and uses the points `f^j(d)`, `d ∈ D`, over a window of `j`.
//! Rows are read off one precomputed orbit per `d`, so a point that starts
//! within `1e-100` of the repeller still leaves it at the right time.

use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

use super::cache::{lift_orbit, unit_shift, Elem, OrbitCache, RowRef};
use crate::dynamics::{DenjoyMap, DenjoyPoint, LiftMap};
use crate::error::{Error, Result};
use crate::math::frac;

/// Parameters of the orbit-adapted sample.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrbitSampler {
    /// Points per fundamental domain.
    pub per_domain: usize,
    /// Spacing of the time offsets `j`.
    pub stride: usize,
    /// Offsets run over `-(horizon + back) ≤ j ≤ forward`.
    pub back: usize,
    pub forward: usize,
}

/// A cycle of wandering intervals under `f` and a fundamental domain of
/// `f^q` in its first interval, in lift coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct WanderingCycle {
    pub intervals: Vec<usize>,
    pub domain: (f64, f64),
}

/// Periodic points, wandering intervals `(P_i, P_{i+1})` and their cycles.
#[derive(Clone, Debug, PartialEq)]
pub struct WanderingStructure {
    pub rotation: (i64, u64),
    pub periodic: Vec<f64>,
    pub cycles: Vec<WanderingCycle>,
}

pub fn wandering_structure(f: &LiftMap) -> Result<WanderingStructure> {
    let (p, q) = f
        .rational_rotation()
        .ok_or(Error::Unsupported("orbit sample needs a rational rotation number"))?;
    let per = f.fixed_points_of_power(p, q);
    if per.is_empty() {
        return Err(Error::Unsupported("orbit sample needs periodic points"));
    }
    let r = per.len();
    let upper = |i: usize| if i + 1 < r { per[i + 1] } else { per[0] + 1.0 };
    let mid = |i: usize| 0.5 * (per[i] + upper(i));
    let locate = |y: f64| {
        let y = frac(y);
        let k = per.partition_point(|&x| x <= y);
        if k == 0 {
            r - 1
        } else {
            k - 1
        }
    };
    let sigma: Vec<usize> = (0..r).map(|i| locate(f.lift(mid(i)))).collect();
    let mut seen = alloc::vec![false; r];
    let mut cycles = Vec::new();
    for start in 0..r {
        if seen[start] {
            continue;
        }
        let mut members = Vec::new();
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            members.push(i);
            i = sigma[i];
        }
        let x0 = mid(start);
        let mut x1 = x0;
        for _ in 0..q {
            x1 = f.lift(x1);
        }
        x1 -= p as f64;
        cycles.push(WanderingCycle {
            intervals: members,
            domain: (x0, x1),
        });
    }
    Ok(WanderingStructure {
        rotation: (p, q),
        periodic: per,
        cycles,
    })
}

/// Orbits and rows of the scalar orbit-adapted sample, rows sorted by
/// position at time 0.
fn orbit_rows(
    f: &LiftMap,
    s: &OrbitSampler,
    horizon: usize,
) -> Result<(Vec<Vec<f64>>, Vec<RowRef>)> {
    if s.per_domain == 0 || s.stride == 0 {
        return Err(Error::InvalidParameter {
            name: "orbit sampler",
            reason: "per_domain and stride must be positive",
        });
    }
    let ws = wandering_structure(f)?;
    let back = horizon + s.back;
    let len = back + s.forward + horizon;
    let mut tracks = Vec::new();
    let mut rows = Vec::new();
    for cyc in &ws.cycles {
        let (x0, x1) = cyc.domain;
        for t in 0..s.per_domain {
            let d = x0 + (x1 - x0) * t as f64 / s.per_domain as f64;
            let mut orbit = alloc::vec![0.0; len];
            orbit[back] = d;
            for k in (0..back).rev() {
                orbit[k] = f.lift_inverse(orbit[k + 1]);
            }
            for k in (back + 1)..len {
                orbit[k] = f.lift(orbit[k - 1]);
            }
            let track = tracks.len() as u32;
            tracks.push(orbit);
            let mut start = 0;
            while start <= back + s.forward {
                let x = tracks[track as usize][start];
                rows.push(RowRef {
                    track,
                    start: start as u32,
                    shift: unit_shift(x),
                });
                start += s.stride;
            }
        }
    }
    for &x in &ws.periodic {
        tracks.push(lift_orbit(f, x, horizon));
        rows.push(RowRef {
            track: (tracks.len() - 1) as u32,
            start: 0,
            shift: 0.0,
        });
    }
    let key = |r: &RowRef| tracks[r.track as usize][r.start as usize] - r.shift;
    rows.sort_by(|a, b| key(a).partial_cmp(&key(b)).unwrap());
    Ok((tracks, rows))
}

/// Number of scalar points the orbit sampler produces for `f`.
pub fn orbit_sample_size(f: &LiftMap, s: &OrbitSampler, horizon: usize) -> Result<usize> {
    let ws = wandering_structure(f)?;
    let offsets = (horizon + s.back + s.forward) / s.stride.max(1) + 1;
    Ok(ws.cycles.len() * s.per_domain * offsets + ws.periodic.len())
}

pub fn orbit_scalar_cache(f: &LiftMap, s: &OrbitSampler, horizon: usize) -> Result<OrbitCache> {
    let (tracks, rows) = orbit_rows(f, s, horizon)?;
    let elems = (0..rows.len() as u32).map(Elem::Point).collect();
    OrbitCache::from_parts(horizon, tracks, rows, elems, true)
}

/// All arcs between points of the orbit-adapted sample.
pub fn orbit_arc_cache(f: &LiftMap, s: &OrbitSampler, horizon: usize) -> Result<OrbitCache> {
    let (tracks, rows) = orbit_rows(f, s, horizon)?;
    pair_cache(horizon, tracks, rows, true)
}

/// Every ordered pair `(x, y)` of rows as the arc from `x` counterclockwise
/// to `y`, `x = y` as a point, optionally followed by the full circle.
/// Rows must have their time-0 value in `[0, 1)`.
pub fn pair_cache(
    horizon: usize,
    tracks: Vec<Vec<f64>>,
    rows: Vec<RowRef>,
    with_full: bool,
) -> Result<OrbitCache> {
    let v0: Vec<f64> = rows
        .iter()
        .map(|r| tracks[r.track as usize][r.start as usize] - r.shift)
        .collect();
    let m = rows.len();
    let mut elems = Vec::with_capacity(m * m + 1);
    for x in 0..m {
        for y in 0..m {
            elems.push(if x == y {
                Elem::Point(x as u32)
            } else {
                Elem::Span {
                    from: x as u32,
                    to: y as u32,
                    wrap: if v0[y] >= v0[x] { 0.0 } else { 1.0 },
                }
            });
        }
    }
    if with_full {
        elems.push(Elem::Full);
    }
    OrbitCache::from_parts(horizon, tracks, rows, elems, false)
}

/// Uniform scalar grid `{i/m}`.
pub fn scalar_grid_cache(f: &LiftMap, cells: usize, horizon: usize) -> Result<OrbitCache> {
    let pts: Vec<f64> = (0..cells).map(|i| i as f64 / cells as f64).collect();
    OrbitCache::scalar(f, &pts, horizon)
}

/// Gap endpoints `a_m, b_m` for `|m| ≤ depth` and `angles` Cantor points at
/// `(i + 1/2)/angles`, ordered by collapsed angle.
pub fn denjoy_nw_points(alpha: f64, depth: i64, angles: usize) -> Vec<DenjoyPoint> {
    let mut pts: Vec<DenjoyPoint> = Vec::new();
    for m in -depth..=depth {
        pts.push(DenjoyPoint::gap(m, 0.0));
        pts.push(DenjoyPoint::gap(m, 1.0));
    }
    for i in 0..angles {
        pts.push(DenjoyPoint::cantor((i as f64 + 0.5) / angles as f64));
    }
    sort_by_angle(&mut pts, alpha);
    pts
}

fn sort_by_angle(pts: &mut [DenjoyPoint], alpha: f64) {
    let key = |p: &DenjoyPoint| {
        let t = match *p {
            DenjoyPoint::Gap { t, .. } => t,
            DenjoyPoint::Cantor { .. } => 0.0,
        };
        (p.collapse(alpha), t)
    };
    pts.sort_by(|a, b| key(a).partial_cmp(&key(b)).unwrap());
}

/// Gap endpoints for `m ∈ [lo, hi]` with step `stride`, plus Cantor angles,
/// ordered by collapsed angle.
pub fn denjoy_window_points(
    alpha: f64,
    lo: i64,
    hi: i64,
    stride: i64,
    angles: usize,
) -> Vec<DenjoyPoint> {
    let mut pts = Vec::new();
    let mut m = lo;
    while m <= hi {
        pts.push(DenjoyPoint::gap(m, 0.0));
        pts.push(DenjoyPoint::gap(m, 1.0));
        m += stride.max(1);
    }
    for i in 0..angles {
        pts.push(DenjoyPoint::cantor((i as f64 + 0.5) / angles as f64));
    }
    sort_by_angle(&mut pts, alpha);
    pts
}

fn denjoy_rows(d: &DenjoyMap, pts: &[DenjoyPoint], horizon: usize) -> (Vec<Vec<f64>>, Vec<RowRef>) {
    let tracks: Vec<Vec<f64>> = pts
        .iter()
        .map(|&p| (0..horizon as i64).map(|k| d.lift_position(p, k)).collect())
        .collect();
    let rows = tracks
        .iter()
        .enumerate()
        .map(|(i, t)| RowRef {
            track: i as u32,
            start: 0,
            shift: unit_shift(t[0]),
        })
        .collect();
    (tracks, rows)
}

pub fn denjoy_scalar_cache(d: &DenjoyMap, pts: &[DenjoyPoint], horizon: usize) -> Result<OrbitCache> {
    let (tracks, rows) = denjoy_rows(d, pts, horizon);
    let elems = (0..pts.len() as u32).map(Elem::Point).collect();
    OrbitCache::from_parts(horizon, tracks, rows, elems, true)
}

/// Arcs `[x, y]` over all ordered pairs of the points, degenerate included.
pub fn denjoy_arc_cache(d: &DenjoyMap, pts: &[DenjoyPoint], horizon: usize) -> Result<OrbitCache> {
    let (tracks, rows) = denjoy_rows(d, pts, horizon);
    pair_cache(horizon, tracks, rows, false)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arnold_structure() {
        let f = LiftMap::arnold(0.0, 0.8).unwrap();
        let ws = wandering_structure(&f).unwrap();
        assert_eq!(ws.rotation, (0, 1));
        assert_eq!(ws.cycles.len(), 2);
        let ms = LiftMap::rational_ms(1, 2, 0.5).unwrap();
        let ws = wandering_structure(&ms).unwrap();
        assert_eq!(ws.periodic.len(), 4);
        assert_eq!(ws.cycles.len(), 2);
        assert!(ws.cycles.iter().all(|c| c.intervals.len() == 2));
        assert!(wandering_structure(&LiftMap::rotation(0.3).unwrap()).is_err());
    }

    #[test]
    fn orbit_rows_follow_the_map() {
        let f = LiftMap::arnold(0.0, 0.8).unwrap();
        let s = OrbitSampler {
            per_domain: 3,
            stride: 5,
            back: 4,
            forward: 6,
        };
        let c = orbit_scalar_cache(&f, &s, 40).unwrap();
        assert_eq!(c.len(), orbit_sample_size(&f, &s, 40).unwrap());
        assert!(c.spot_check(&f, 200, 1e-12));
        for i in 0..c.len() {
            let x = c.row_value(i as u32, 0);
            assert!((0.0..1.0).contains(&x));
        }
    }

    #[test]
    fn deep_backward_points_escape_on_time() {
        // A point 60 steps before the fundamental domain reaches it at k = 60.
        let f = LiftMap::arnold(0.0, 0.8).unwrap();
        let s = OrbitSampler {
            per_domain: 1,
            stride: 1,
            back: 0,
            forward: 0,
        };
        let c = orbit_scalar_cache(&f, &s, 60).unwrap();
        let ws = wandering_structure(&f).unwrap();
        let d = ws.cycles[0].domain.0;
        let near_zero = (0..c.len())
            .find(|&i| {
                let x = c.row_value(i as u32, 0);
                x > 0.0 && x < 1e-12
            })
            .unwrap();
        let x59 = c.row_value(near_zero as u32, 59);
        assert!(x59 > 0.0 && x59 < d);
    }

    #[test]
    fn pair_cache_lengths() {
        let f = LiftMap::rotation(0.1).unwrap();
        let pts = [0.2, 0.7];
        let tracks: Vec<Vec<f64>> = pts.iter().map(|&x| lift_orbit(&f, x, 4)).collect();
        let rows = (0..2)
            .map(|i| RowRef {
                track: i,
                start: 0,
                shift: 0.0,
            })
            .collect();
        let c = pair_cache(4, tracks, rows, true).unwrap();
        assert_eq!(c.len(), 5);
        assert!((c.span_at(1, 3).1 - 0.5).abs() < 1e-12);
        assert!((c.span_at(2, 3).1 - 0.5).abs() < 1e-12);
        assert_eq!(c.span_at(0, 2).1, 0.0);
    }
}
