use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

use crate::circle::CirclePoint;
use crate::error::{Error, Result};
use crate::math::{abs, cos_turns, frac, gcd, round, sin_turns, TWO_PI};

/// Grid used to check monotonicity of a lift at construction.
const MONOTONE_GRID: usize = 10_000;
/// Grid for the sign-change scan of `F^q(x) - x - p`.
const PERIODIC_GRID: usize = 100_000;

/// Parametric families of degree-one lifts.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Family {
    /// `F(x) = x + α`.
    Rotation { alpha: f64 },
    /// `F(x) = x + Ω + (K/2π)·sin(2πx)`, `|K| < 1`.
    Arnold { omega: f64, k: f64 },
    /// `F(x) = x + p/q + (K/(2πq))·sin(2πqx)`, `|K| < 1`, `gcd(p, q) = 1`.
    /// Rotation number `p/q` with `2q` hyperbolic periodic points.
    RationalMs { p: i64, q: u64, k: f64 },
}

impl Family {
    fn validate(&self) -> Result<()> {
        let finite = |name, v: f64| {
            if v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidParameter {
                    name,
                    reason: "must be finite",
                })
            }
        };
        match *self {
            Family::Rotation { alpha } => finite("alpha", alpha),
            Family::Arnold { omega, k } => {
                finite("omega", omega)?;
                finite("k", k)?;
                if abs(k) >= 1.0 {
                    return Err(Error::InvalidParameter {
                        name: "k",
                        reason: "|K| < 1 is required for a homeomorphism",
                    });
                }
                Ok(())
            }
            Family::RationalMs { p, q, k } => {
                finite("k", k)?;
                if q == 0 {
                    return Err(Error::InvalidParameter {
                        name: "q",
                        reason: "must be positive",
                    });
                }
                if gcd(p.unsigned_abs(), q) != 1 {
                    return Err(Error::InvalidParameter {
                        name: "p",
                        reason: "gcd(p, q) must be 1",
                    });
                }
                if abs(k) >= 1.0 {
                    return Err(Error::InvalidParameter {
                        name: "k",
                        reason: "|K| < 1 is required for a homeomorphism",
                    });
                }
                Ok(())
            }
        }
    }

    #[inline]
    fn step(&self, x: f64) -> f64 {
        match *self {
            Family::Rotation { alpha } => x + alpha,
            Family::Arnold { omega, k } => x + omega + k / TWO_PI * sin_turns(x),
            Family::RationalMs { p, q, k } => {
                let q = q as f64;
                x + p as f64 / q + k / (TWO_PI * q) * sin_turns(q * x)
            }
        }
    }

    /// `(F(c), F(c + u) - F(c))`, the increment evaluated without
    /// cancellation so that it keeps relative precision for tiny `u`.
    #[inline]
    fn step_relative(&self, c: f64, u: f64) -> (f64, f64) {
        let du = match *self {
            Family::Rotation { .. } => u,
            // sin(2π(c+u)) - sin(2πc) = 2 cos(2π(c + u/2)) sin(πu)
            Family::Arnold { k, .. } => {
                u + k / core::f64::consts::PI * cos_turns(c + 0.5 * u) * sin_turns(0.5 * u)
            }
            Family::RationalMs { q, k, .. } => {
                let q = q as f64;
                u + k / (core::f64::consts::PI * q)
                    * cos_turns(q * c + 0.5 * q * u)
                    * sin_turns(0.5 * q * u)
            }
        };
        (self.step(c), du)
    }

    fn derivative(&self, x: f64) -> f64 {
        match *self {
            Family::Rotation { .. } => 1.0,
            Family::Arnold { k, .. } => 1.0 + k * cos_turns(x),
            Family::RationalMs { q, k, .. } => 1.0 + k * cos_turns(q as f64 * x),
        }
    }

    /// `sup_x |F(x) - x|`.
    fn displacement_bound(&self) -> f64 {
        match *self {
            Family::Rotation { alpha } => abs(alpha),
            Family::Arnold { omega, k } => abs(omega) + abs(k) / TWO_PI,
            Family::RationalMs { p, q, k } => {
                abs(p as f64) / q as f64 + abs(k) / (TWO_PI * q as f64)
            }
        }
    }

    /// Rotation number as a reduced fraction when it is known in closed form.
    fn closed_form_rotation(&self) -> Option<(i64, u64)> {
        match *self {
            Family::Rotation { .. } => None,
            Family::Arnold { omega, k } if omega == 0.0 && k != 0.0 => Some((0, 1)),
            Family::Arnold { .. } => None,
            Family::RationalMs { p, q, .. } => Some((p, q)),
        }
    }
}

/// An orientation-preserving circle homeomorphism given by a lift
/// `F: ℝ → ℝ`, strictly increasing with `F(x + 1) = F(x) + 1`, optionally
/// composed with itself `power` times.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LiftMap {
    family: Family,
    power: u32,
}

impl LiftMap {
    pub fn new(family: Family, power: u32) -> Result<Self> {
        family.validate()?;
        if power == 0 {
            return Err(Error::InvalidParameter {
                name: "power",
                reason: "must be at least 1",
            });
        }
        let map = LiftMap { family, power };
        map.check_lift()?;
        Ok(map)
    }

    pub fn rotation(alpha: f64) -> Result<Self> {
        LiftMap::new(Family::Rotation { alpha }, 1)
    }

    pub fn arnold(omega: f64, k: f64) -> Result<Self> {
        LiftMap::new(Family::Arnold { omega, k }, 1)
    }

    pub fn rational_ms(p: i64, q: u64, k: f64) -> Result<Self> {
        LiftMap::new(Family::RationalMs { p, q, k }, 1)
    }

    /// `f ∘ f`.
    pub fn square(&self) -> Self {
        LiftMap {
            family: self.family,
            power: self.power * 2,
        }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn power(&self) -> u32 {
        self.power
    }

    /// Checks the base map only: powers of a homeomorphism are
    /// homeomorphisms, while a grid sample of a high power collapses
    /// numerically onto attracting points.
    fn check_lift(&self) -> Result<()> {
        let base = LiftMap {
            family: self.family,
            power: 1,
        };
        base.check_base()
    }

    fn check_base(&self) -> Result<()> {
        let mut prev = self.lift(0.0);
        for i in 1..=MONOTONE_GRID {
            let x = i as f64 / MONOTONE_GRID as f64;
            let y = self.lift(x);
            if !(y > prev) {
                return Err(Error::NotMonotone { at: x });
            }
            prev = y;
        }
        for i in 0..64 {
            let x = i as f64 / 64.0 + 0.003;
            let defect = abs(self.lift(x + 1.0) - self.lift(x) - 1.0);
            if defect > 1e-12 {
                return Err(Error::NotDegreeOne { at: x, defect });
            }
        }
        Ok(())
    }

    #[inline]
    pub fn lift(&self, mut x: f64) -> f64 {
        for _ in 0..self.power {
            x = self.family.step(x);
        }
        x
    }

    /// Derivative of the lift, by the chain rule along the orbit.
    /// `(F(c), F(c + u) - F(c))` with the increment computed directly, for
    /// tracking points in a chart around the orbit of `c`.
    pub fn lift_relative(&self, mut c: f64, mut u: f64) -> (f64, f64) {
        for _ in 0..self.power {
            (c, u) = self.family.step_relative(c, u);
        }
        (c, u)
    }

    pub fn derivative(&self, mut x: f64) -> f64 {
        let mut d = 1.0;
        for _ in 0..self.power {
            d *= self.family.derivative(x);
            x = self.family.step(x);
        }
        d
    }

    /// `F⁻¹(y)` by monotone bisection down to adjacent floats.
    pub fn lift_inverse(&self, y: f64) -> f64 {
        if let Family::Rotation { alpha } = self.family {
            return y - alpha * self.power as f64;
        }
        let b = self.family.displacement_bound() * self.power as f64 + 1e-9;
        let (mut lo, mut hi) = (y - b, y + b);
        for _ in 0..200 {
            let mid = lo + 0.5 * (hi - lo);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.lift(mid) < y {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        if abs(self.lift(lo) - y) <= abs(self.lift(hi) - y) {
            lo
        } else {
            hi
        }
    }

    /// `F^k(x)` for any integer `k`.
    pub fn lift_iterate(&self, mut x: f64, k: i64) -> f64 {
        if k >= 0 {
            for _ in 0..k {
                x = self.lift(x);
            }
        } else {
            for _ in 0..(-k) {
                x = self.lift_inverse(x);
            }
        }
        x
    }

    pub fn eval(&self, x: CirclePoint) -> CirclePoint {
        CirclePoint::new(self.lift(x.position()))
    }

    pub fn eval_inverse(&self, y: CirclePoint) -> CirclePoint {
        CirclePoint::new(self.lift_inverse(y.position()))
    }

    pub fn iterate(&self, x: CirclePoint, k: i64) -> CirclePoint {
        CirclePoint::new(self.lift_iterate(x.position(), k))
    }

    /// Rotation number in closed form, when the family provides one.
    pub fn declared_rotation(&self) -> Option<f64> {
        let m = self.power as f64;
        match self.family {
            Family::Rotation { alpha } => Some(alpha * m),
            _ => self
                .closed_form_rotation()
                .map(|(p, q)| p as f64 / q as f64),
        }
    }

    fn closed_form_rotation(&self) -> Option<(i64, u64)> {
        let (p, q) = self.family.closed_form_rotation()?;
        let p = p * self.power as i64;
        let g = gcd(p.unsigned_abs(), q).max(1);
        Some((p / g as i64, q / g))
    }

    /// Rational rotation number `p/q` of this map: the closed form when
    /// known, otherwise the best `q ≤ 64` approximation to the estimate,
    /// accepted only if `F^q(x) - x - p` actually changes sign.
    pub fn rational_rotation(&self) -> Option<(i64, u64)> {
        if let Some(pq) = self.closed_form_rotation() {
            return Some(pq);
        }
        if let Family::Rotation { .. } = self.family {
            return None;
        }
        let rho = rotation_number_from(self, 0.0, 10_000);
        for q in 1..=64u64 {
            let p = round(rho * q as f64) as i64;
            if abs(rho - p as f64 / q as f64) <= 2e-4 && !self.fixed_points_of_power(p, q).is_empty() {
                let g = gcd(p.unsigned_abs(), q).max(1);
                return Some((p / g as i64, q / g));
            }
        }
        None
    }

    /// Roots of `G(x) = F^q(x) - x - p` in `[0, 1)`: sign changes on a
    /// `10⁵` grid refined by bisection. Exact zeros on the grid count as
    /// roots. Roots closer than `1e-9` are merged.
    pub fn fixed_points_of_power(&self, p: i64, q: u64) -> Vec<f64> {
        let g = |x: f64| {
            let mut y = x;
            for _ in 0..q {
                y = self.lift(y);
            }
            y - x - p as f64
        };
        let mut roots: Vec<f64> = Vec::new();
        let n = PERIODIC_GRID;
        let mut x_prev = 0.0;
        let mut g_prev = g(0.0);
        if g_prev == 0.0 {
            roots.push(0.0);
        }
        for i in 1..=n {
            let x = i as f64 / n as f64;
            let gx = if i == n { g(1.0) } else { g(x) };
            if gx == 0.0 {
                if i < n {
                    roots.push(x);
                }
            } else if g_prev != 0.0 && (gx > 0.0) != (g_prev > 0.0) {
                let (mut lo, mut hi) = (x_prev, x);
                let lo_pos = g_prev > 0.0;
                for _ in 0..200 {
                    let mid = lo + 0.5 * (hi - lo);
                    if mid <= lo || mid >= hi {
                        break;
                    }
                    if (g(mid) > 0.0) == lo_pos {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                roots.push(frac(0.5 * (lo + hi)));
            }
            x_prev = x;
            g_prev = gx;
        }
        roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut merged: Vec<f64> = Vec::with_capacity(roots.len());
        for r in roots {
            match merged.last() {
                Some(&last) if r - last < 1e-9 => {}
                _ => merged.push(r),
            }
        }
        if merged.len() > 1 && merged[0] + 1.0 - merged[merged.len() - 1] < 1e-9 {
            merged.pop();
        }
        merged
    }
}

/// `(F^n(x₀) - x₀)/n`.
pub fn rotation_number_from(map: &LiftMap, x0: f64, n_iter: u64) -> f64 {
    let mut x = x0;
    for _ in 0..n_iter {
        x = map.lift(x);
    }
    (x - x0) / n_iter as f64
}

/// Rotation number estimate from base point 0, accurate to `1/n_iter`.
pub fn rotation_number_estimate(map: &LiftMap, n_iter: u64) -> Result<f64> {
    if n_iter < 1000 {
        return Err(Error::InvalidParameter {
            name: "n_iter",
            reason: "at least 1000 iterations are required",
        });
    }
    Ok(rotation_number_from(map, 0.0, n_iter))
}
