//! `C(S¹)` as a space of arcs: the induced map, arc grids, and the
//! Cantor-endpoint arcs `Y` of a Denjoy system.
//!
//! Every map here preserves orientation, so `C(f)` acts on an arc through
//! its endpoints.

use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

use crate::circle::{hausdorff_spans, Arc, CirclePoint};
use crate::dynamics::{DenjoyMap, DenjoyPoint, LiftMap};
use crate::error::{Error, Result};
use crate::math::{abs, frac, round};

/// Arcs `{start = iδ, length = jδ}` for `0 ≤ i < 1/δ`, `0 ≤ j ≤ 1/δ`, in
/// lexicographic `(i, j)` order.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArcGrid {
    cells: usize,
}

impl ArcGrid {
    /// `delta` must be the reciprocal of a positive integer.
    pub fn new(delta: f64) -> Result<Self> {
        if !(delta > 0.0 && delta <= 1.0) {
            return Err(Error::InvalidParameter {
                name: "delta",
                reason: "must lie in (0, 1]",
            });
        }
        let m = round(1.0 / delta);
        if abs(m * delta - 1.0) > 1e-9 {
            return Err(Error::InvalidParameter {
                name: "delta",
                reason: "1/delta must be an integer",
            });
        }
        Ok(ArcGrid { cells: m as usize })
    }

    pub fn with_cells(cells: usize) -> Self {
        ArcGrid {
            cells: cells.max(1),
        }
    }

    pub fn cells(&self) -> usize {
        self.cells
    }

    pub fn delta(&self) -> f64 {
        1.0 / self.cells as f64
    }

    pub fn len(&self) -> usize {
        self.cells * (self.cells + 1)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Start index and length index of arc `idx`.
    pub fn coords(&self, idx: usize) -> (usize, usize) {
        (idx / (self.cells + 1), idx % (self.cells + 1))
    }

    pub fn arc(&self, idx: usize) -> Arc {
        let (i, j) = self.coords(idx);
        let m = self.cells as f64;
        Arc::from_start_len(CirclePoint::new(i as f64 / m), j as f64 / m)
    }

    pub fn iter(&self) -> impl Iterator<Item = Arc> + '_ {
        (0..self.len()).map(move |i| self.arc(i))
    }

    /// The grid arc with rounded start and length, within `δ` of `a`.
    pub fn nearest(&self, a: &Arc) -> Arc {
        let m = self.cells as f64;
        match *a {
            Arc::Full => Arc::Full,
            _ => {
                let s = a.start().unwrap().position();
                let i = round(s * m) % m;
                let j = round(a.length() * m).min(m);
                Arc::from_start_len(CirclePoint::new(i / m), j / m)
            }
        }
    }
}

/// `C(f)(A) = f(A)`.
pub fn induced_map(f: &LiftMap, a: &Arc) -> Arc {
    induced_iterate(f, a, 1)
}

/// `C(f)^k(A)` for `k ≥ 0`, iterating the lifted endpoints.
pub fn induced_iterate(f: &LiftMap, a: &Arc, k: u32) -> Arc {
    match *a {
        Arc::Full => Arc::Full,
        Arc::Point { at } => Arc::point(f.iterate(at, k as i64)),
        Arc::Proper { start, len } => {
            let s = f.lift_iterate(start.position(), k as i64);
            let e = f.lift_iterate(start.position() + len, k as i64);
            Arc::from_start_len(CirclePoint::new(s), e - s)
        }
    }
}

fn lifted_span(a: &Arc) -> (f64, f64) {
    match *a {
        Arc::Full => (0.0, 1.0),
        Arc::Point { at } => (at.position(), at.position()),
        Arc::Proper { start, len } => (start.position(), start.position() + len),
    }
}

/// `max_{0 ≤ k < n} d_H(C(f)^k A, C(f)^k B)`.
pub fn induced_hausdorff_dyn(f: &LiftMap, a: &Arc, b: &Arc, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidParameter {
            name: "n",
            reason: "must be at least 1",
        });
    }
    let (full_a, full_b) = (matches!(a, Arc::Full), matches!(b, Arc::Full));
    let (mut sa, mut ea) = lifted_span(a);
    let (mut sb, mut eb) = lifted_span(b);
    let mut worst = 0.0f64;
    for k in 0..n {
        if k > 0 {
            if !full_a {
                sa = f.lift(sa);
                ea = if matches!(a, Arc::Point { .. }) { sa } else { f.lift(ea) };
            }
            if !full_b {
                sb = f.lift(sb);
                eb = if matches!(b, Arc::Point { .. }) { sb } else { f.lift(eb) };
            }
        }
        worst = worst.max(hausdorff_spans(sa, ea - sa, sb, eb - sb));
    }
    Ok(worst)
}

/// An arc `[x, y]` of a Denjoy system with endpoints in `NW(f)`, traversed
/// counterclockwise from `x` to `y`. `x == y` is the degenerate arc.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CantorArc {
    pub x: DenjoyPoint,
    pub y: DenjoyPoint,
}

impl CantorArc {
    pub fn new(x: DenjoyPoint, y: DenjoyPoint) -> Self {
        CantorArc { x, y }
    }

    pub fn degenerate(x: DenjoyPoint) -> Self {
        CantorArc { x, y: x }
    }

    pub fn is_degenerate(&self) -> bool {
        self.x == self.y
    }

    /// `C(f)^k`, endpointwise and exact.
    pub fn step(&self, k: i64) -> Self {
        CantorArc {
            x: self.x.step(k),
            y: self.y.step(k),
        }
    }

    /// The embedded arc `f^k([x, y])`.
    pub fn embed(&self, d: &DenjoyMap, k: i64) -> Arc {
        let s = d.lift_position(self.x, k);
        if self.is_degenerate() {
            return Arc::point(CirclePoint::new(s));
        }
        let e = d.lift_position(self.y, k);
        Arc::from_start_len(CirclePoint::new(s), frac(e - s))
    }
}

/// `π([x, y]) = (x, y)`.
pub fn pi_map(a: &CantorArc) -> (DenjoyPoint, DenjoyPoint) {
    (a.x, a.y)
}

/// Endpoints `a_n = Gap(n, 0)` and `b_n = Gap(n, 1)` for `|n| ≤ depth`,
/// followed by Cantor points at the given angles.
pub fn cantor_endpoints(depth: i64, angles: &[f64]) -> Vec<DenjoyPoint> {
    let mut pts = Vec::with_capacity((4 * depth + 2) as usize + angles.len());
    for n in -depth..=depth {
        pts.push(DenjoyPoint::gap(n, 0.0));
        pts.push(DenjoyPoint::gap(n, 1.0));
    }
    pts.extend(angles.iter().map(|&t| DenjoyPoint::cantor(t)));
    pts
}

/// All arcs `[x, y]` over the endpoint set of [`cantor_endpoints`],
/// degenerate ones included. Images under `C(f)^k` stay in the set while
/// `|n| + k ≤ depth` for the gap endpoints involved.
pub fn cantor_arc_space(depth: i64, angles: &[f64]) -> Vec<CantorArc> {
    let pts = cantor_endpoints(depth, angles);
    let mut arcs = Vec::with_capacity(pts.len() * pts.len());
    for &x in &pts {
        for &y in &pts {
            arcs.push(CantorArc::new(x, y));
        }
    }
    arcs
}
