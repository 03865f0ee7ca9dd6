use alloc::vec::Vec;

use crate::circle::{hausdorff_spans, lift_dist};
use crate::dynamics::LiftMap;
use crate::error::{Error, Result};
use crate::hyperspace::ArcGrid;
use crate::math::floor;

/// A window into a stored orbit: the value at time `k` is
/// `tracks[track][start + k] - shift`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RowRef {
    pub track: u32,
    pub start: u32,
    pub shift: f64,
}

/// A sample element. Arc lengths at time `k` are
/// `row(to)[k] + wrap - row(from)[k]`, which stays valid for every `k`
/// because lifts commute with integer translation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Elem {
    Point(u32),
    Span { from: u32, to: u32, wrap: f64 },
    Full,
}

/// Iterates of every sample element for `0 ≤ k < horizon`, stored as
/// scalar orbits of endpoints.
#[derive(Clone, Debug)]
pub struct OrbitCache {
    horizon: usize,
    tracks: Vec<Vec<f64>>,
    rows: Vec<RowRef>,
    elems: Vec<Elem>,
    scalar: bool,
}

/// Resolved element for the inner distance loop.
#[derive(Clone, Copy)]
pub(crate) enum View<'a> {
    Point(&'a [f64], f64),
    Span(&'a [f64], f64, &'a [f64], f64),
    Full,
}

impl<'a> View<'a> {
    /// Start and length at time `k`.
    #[inline]
    pub(crate) fn at(&self, k: usize) -> (f64, f64) {
        match *self {
            View::Point(r, s) => (r[k] - s, 0.0),
            View::Span(a, sa, b, sb) => {
                let x = a[k] - sa;
                (x, b[k] - sb - x)
            }
            View::Full => (0.0, 1.0),
        }
    }
}

impl OrbitCache {
    /// Assembles a cache from orbit tracks. Every row must have `horizon`
    /// values available.
    pub fn from_parts(
        horizon: usize,
        tracks: Vec<Vec<f64>>,
        rows: Vec<RowRef>,
        elems: Vec<Elem>,
        scalar: bool,
    ) -> Result<Self> {
        if horizon == 0 {
            return Err(Error::InvalidParameter {
                name: "horizon",
                reason: "must be at least 1",
            });
        }
        for r in &rows {
            let len = tracks.get(r.track as usize).map_or(0, |t| t.len());
            if (r.start as usize) + horizon > len {
                return Err(Error::HorizonExceeded {
                    requested: r.start as usize + horizon,
                    available: len,
                });
            }
        }
        for e in &elems {
            let ok = match *e {
                Elem::Point(r) => (r as usize) < rows.len(),
                Elem::Span { from, to, .. } => {
                    !scalar && (from as usize) < rows.len() && (to as usize) < rows.len()
                }
                Elem::Full => !scalar,
            };
            if !ok {
                return Err(Error::InvalidParameter {
                    name: "elems",
                    reason: "element refers to a missing row or is not scalar",
                });
            }
        }
        Ok(OrbitCache {
            horizon,
            tracks,
            rows,
            elems,
            scalar,
        })
    }

    /// Scalar sample: the orbits of `points` under `f`, as lift values.
    pub fn scalar(f: &LiftMap, points: &[f64], horizon: usize) -> Result<Self> {
        let tracks: Vec<Vec<f64>> = points.iter().map(|&x| lift_orbit(f, x, horizon)).collect();
        let rows = (0..points.len())
            .map(|i| RowRef {
                track: i as u32,
                start: 0,
                shift: 0.0,
            })
            .collect();
        let elems = (0..points.len() as u32).map(Elem::Point).collect();
        OrbitCache::from_parts(horizon, tracks, rows, elems, true)
    }

    /// Arc sample: every arc of `grid`, sharing the orbits of the grid points.
    pub fn arc_grid(f: &LiftMap, grid: &ArcGrid, horizon: usize) -> Result<Self> {
        let m = grid.cells();
        let tracks: Vec<Vec<f64>> = (0..m)
            .map(|i| lift_orbit(f, i as f64 / m as f64, horizon))
            .collect();
        let rows = (0..m)
            .map(|i| RowRef {
                track: i as u32,
                start: 0,
                shift: 0.0,
            })
            .collect();
        let mut elems = Vec::with_capacity(grid.len());
        for i in 0..m {
            for j in 0..=m {
                elems.push(if j == 0 {
                    Elem::Point(i as u32)
                } else if j == m {
                    Elem::Full
                } else {
                    let to = (i + j) % m;
                    Elem::Span {
                        from: i as u32,
                        to: to as u32,
                        wrap: if i + j >= m { 1.0 } else { 0.0 },
                    }
                });
            }
        }
        OrbitCache::from_parts(horizon, tracks, rows, elems, false)
    }

    /// Arc sample from explicit arcs, two endpoint orbits per arc.
    pub fn arcs(f: &LiftMap, arcs: &[crate::circle::Arc], horizon: usize) -> Result<Self> {
        use crate::circle::Arc;
        let mut tracks = Vec::new();
        let mut rows = Vec::new();
        let mut elems = Vec::with_capacity(arcs.len());
        let push = |x: f64, tracks: &mut Vec<Vec<f64>>, rows: &mut Vec<RowRef>| {
            tracks.push(lift_orbit(f, x, horizon));
            rows.push(RowRef {
                track: (tracks.len() - 1) as u32,
                start: 0,
                shift: 0.0,
            });
            (rows.len() - 1) as u32
        };
        for a in arcs {
            elems.push(match *a {
                Arc::Full => Elem::Full,
                Arc::Point { at } => Elem::Point(push(at.position(), &mut tracks, &mut rows)),
                Arc::Proper { start, len } => {
                    let from = push(start.position(), &mut tracks, &mut rows);
                    let to = push(start.position() + len, &mut tracks, &mut rows);
                    Elem::Span {
                        from,
                        to,
                        wrap: 0.0,
                    }
                }
            });
        }
        OrbitCache::from_parts(horizon, tracks, rows, elems, false)
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn is_scalar(&self) -> bool {
        self.scalar
    }

    pub fn elem(&self, i: usize) -> Elem {
        self.elems[i]
    }

    /// Number of stored orbit values.
    pub fn stored_values(&self) -> usize {
        self.tracks.iter().map(|t| t.len()).sum()
    }

    #[inline]
    fn row(&self, r: u32) -> (&[f64], f64) {
        let r = self.rows[r as usize];
        (&self.tracks[r.track as usize][r.start as usize..], r.shift)
    }

    /// Lift value of row `r` at time `k`.
    pub fn row_value(&self, r: u32, k: usize) -> f64 {
        let (t, s) = self.row(r);
        t[k] - s
    }

    #[inline]
    pub(crate) fn view(&self, i: usize) -> View<'_> {
        match self.elems[i] {
            Elem::Point(r) => {
                let (t, s) = self.row(r);
                View::Point(t, s)
            }
            Elem::Span { from, to, wrap } => {
                let (a, sa) = self.row(from);
                let (b, sb) = self.row(to);
                View::Span(a, sa, b, sb - wrap)
            }
            Elem::Full => View::Full,
        }
    }

    /// Start (lifted) and length of element `i` at time `k`.
    pub fn span_at(&self, i: usize, k: usize) -> (f64, f64) {
        self.view(i).at(k)
    }

    #[inline]
    pub(crate) fn dist_views(&self, a: &View, b: &View, k: usize) -> f64 {
        if self.scalar {
            if let (View::Point(x, sx), View::Point(y, sy)) = (a, b) {
                return lift_dist(x[k] - sx, y[k] - sy);
            }
        }
        let (sa, la) = a.at(k);
        let (sb, lb) = b.at(k);
        hausdorff_spans(sa, la, sb, lb)
    }

    /// Distance between elements `i` and `j` at time `k`.
    pub fn dist_at(&self, i: usize, j: usize, k: usize) -> f64 {
        self.dist_views(&self.view(i), &self.view(j), k)
    }

    /// `d_n(i, j) = max_{k < n} d(f^k i, f^k j)`.
    pub fn dyn_dist(&self, i: usize, j: usize, n: usize) -> Result<f64> {
        self.check_horizon(n)?;
        let (a, b) = (self.view(i), self.view(j));
        Ok((0..n).map(|k| self.dist_views(&a, &b, k)).fold(0.0, f64::max))
    }

    pub(crate) fn check_horizon(&self, n: usize) -> Result<()> {
        if n > self.horizon {
            return Err(Error::HorizonExceeded {
                requested: n,
                available: self.horizon,
            });
        }
        if n == 0 {
            return Err(Error::InvalidParameter {
                name: "n",
                reason: "must be at least 1",
            });
        }
        Ok(())
    }

    /// True iff `d(f^k i, f^k j) < eps` for every `k` in `[from, n)`.
    #[inline]
    pub(crate) fn close_on(&self, i: usize, j: usize, from: usize, n: usize, eps: f64) -> bool {
        let (a, b) = (self.view(i), self.view(j));
        if self.scalar {
            if let (View::Point(x, sx), View::Point(y, sy)) = (&a, &b) {
                let (x, y) = (&x[from..n], &y[from..n]);
                return x
                    .iter()
                    .zip(y)
                    .all(|(&u, &v)| lift_dist(u - sx, v - sy) < eps);
            }
        }
        (from..n).all(|k| self.dist_views(&a, &b, k) < eps)
    }

    /// Checks `row[k+1] = F(row[k])` within `tol` at `samples` spread
    /// positions, for caches built from `f`.
    pub fn spot_check(&self, f: &LiftMap, samples: usize, tol: f64) -> bool {
        if self.horizon < 2 || self.rows.is_empty() {
            return true;
        }
        let nr = self.rows.len();
        (0..samples).all(|s| {
            let r = ((s * 7919) % nr) as u32;
            let k = (s * 104_729) % (self.horizon - 1);
            let (t, sh) = self.row(r);
            let x = t[k] - sh;
            let y = t[k + 1] - sh;
            let fx = f.lift(x);
            (fx - y).abs() <= tol * (1.0 + fx.abs())
        })
    }
}

/// `F^k(x)` for `0 ≤ k < len`.
pub fn lift_orbit(f: &LiftMap, x: f64, len: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(len);
    let mut y = x;
    for _ in 0..len {
        out.push(y);
        y = f.lift(y);
    }
    out
}

/// Row shift that brings a lift value into `[0, 1)`.
pub fn unit_shift(x: f64) -> f64 {
    floor(x)
}
