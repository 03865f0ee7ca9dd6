use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

use super::cache::OrbitCache;
use super::growth::{growth_exponent, EntropyEstimate, GrowthTable};
use super::sample::{
    denjoy_arc_cache, denjoy_nw_points, denjoy_scalar_cache, denjoy_window_points,
    orbit_arc_cache, orbit_sample_size, orbit_scalar_cache, scalar_grid_cache, OrbitSampler,
};
use super::separated::GreedySeparated;
use super::spanning::{spanning_greedy, CoverageTracker};
use crate::dynamics::System;
use crate::error::{Error, Result};
use crate::hyperspace::ArcGrid;

/// Samples up to this size use every element as a spanning candidate.
pub const ALL_CANDIDATES_MAX: usize = 4096;

/// Space on which entropy is estimated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Target {
    /// The circle.
    Base,
    /// `C(S¹)`.
    Hyperspace,
    /// The non-wandering set (Denjoy).
    Nw,
    /// Arcs with endpoints in `NW(f)` (Denjoy), conjugate to `NW × NW`.
    Product,
}

impl Target {
    pub fn name(self) -> &'static str {
        match self {
            Target::Base => "base",
            Target::Hyperspace => "hyperspace",
            Target::Nw => "nw",
            Target::Product => "product",
        }
    }
}

/// How the sample is drawn.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Sampler {
    /// Uniform grid `{i·δ}` on the circle, or the [`ArcGrid`] for arcs.
    Grid { delta: f64 },
    /// Orbit-adapted sample (lift maps with periodic points).
    Orbit {
        per_domain: usize,
        stride: usize,
        back: usize,
        forward: usize,
    },
    /// Denjoy gap endpoints `|m| ≤ depth` and `angles` Cantor points.
    DenjoyNw { depth: i64, angles: usize },
    /// Denjoy gap endpoints `m ∈ [-(n_max + back), ahead]` every `stride`,
    /// plus `angles` Cantor points.
    DenjoyWindow {
        back: i64,
        ahead: i64,
        stride: i64,
        angles: usize,
    },
}

/// Resource limits; a protocol exceeding any of them is refused.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Budget {
    pub max_sample: u64,
    pub max_horizon: u64,
    pub max_stored_values: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_sample: 2_000_000,
            max_horizon: 4096,
            max_stored_values: 50_000_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Protocol {
    pub sampler: Sampler,
    pub eps: Vec<f64>,
    pub n: Vec<usize>,
    #[serde(default)]
    pub budget: Budget,
}

impl Protocol {
    pub fn validate(&self) -> Result<()> {
        if self.eps.is_empty() || self.eps.iter().any(|&e| !(e > 0.0 && e.is_finite())) {
            return Err(Error::InvalidParameter {
                name: "eps",
                reason: "need at least one positive finite scale",
            });
        }
        if self.n.len() < 4 {
            return Err(Error::TooFewHorizons {
                needed: 4,
                got: self.n.len(),
            });
        }
        if self.n[0] == 0 || self.n.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter {
                name: "n",
                reason: "horizons must be positive and strictly increasing",
            });
        }
        let b = self.budget;
        if b.max_sample == 0 || b.max_horizon == 0 || b.max_stored_values == 0 {
            return Err(Error::InvalidParameter {
                name: "budget",
                reason: "all budgets must be positive",
            });
        }
        Ok(())
    }

    pub fn horizon(&self) -> usize {
        *self.n.last().unwrap()
    }
}

/// Counts at one scale over all horizons.
#[derive(Clone, Debug, PartialEq)]
pub struct ScaleCounts {
    pub eps: f64,
    pub sep: Vec<u64>,
    pub span: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimateRun {
    pub sample_size: usize,
    pub table: GrowthTable,
    pub estimate: EntropyEstimate,
}

fn budget_check(dimension: &'static str, requested: u64, limit: u64) -> Result<()> {
    if requested > limit {
        Err(Error::Budget {
            dimension,
            requested,
            limit,
        })
    } else {
        Ok(())
    }
}

fn unsupported<T>() -> Result<T> {
    Err(Error::Unsupported(
        "sampler, target and system do not combine (see the protocol docs)",
    ))
}

/// Builds the orbit cache for a target, refusing protocols over budget
/// before any allocation.
pub fn prepare(system: &System, target: Target, protocol: &Protocol) -> Result<OrbitCache> {
    protocol.validate()?;
    let b = protocol.budget;
    let horizon = protocol.horizon();
    budget_check("horizon", horizon as u64, b.max_horizon)?;
    let h = horizon as u64;
    match (system, target, protocol.sampler) {
        (System::Lift(f), Target::Base | Target::Hyperspace, Sampler::Grid { delta }) => {
            let grid = ArcGrid::new(delta)?;
            let m = grid.cells() as u64;
            if target == Target::Base {
                budget_check("sample", m, b.max_sample)?;
                budget_check("stored values", m * h, b.max_stored_values)?;
                scalar_grid_cache(f, grid.cells(), horizon)
            } else {
                budget_check("sample", grid.len() as u64, b.max_sample)?;
                budget_check("stored values", m * h, b.max_stored_values)?;
                OrbitCache::arc_grid(f, &grid, horizon)
            }
        }
        (
            System::Lift(f),
            Target::Base | Target::Hyperspace,
            Sampler::Orbit {
                per_domain,
                stride,
                back,
                forward,
            },
        ) => {
            let s = OrbitSampler {
                per_domain,
                stride,
                back,
                forward,
            };
            let e = orbit_sample_size(f, &s, horizon)? as u64;
            let size = if target == Target::Base { e } else { e * e + 1 };
            budget_check("sample", size, b.max_sample)?;
            let per_track = 3 * h + (back + forward) as u64;
            budget_check("stored values", e / s.stride.max(1) as u64 * per_track + e * h, b.max_stored_values)?;
            if target == Target::Base {
                orbit_scalar_cache(f, &s, horizon)
            } else {
                orbit_arc_cache(f, &s, horizon)
            }
        }
        (System::Denjoy(d), Target::Nw | Target::Product | Target::Hyperspace, sampler) => {
            let pts = match sampler {
                Sampler::DenjoyNw { depth, angles } => {
                    let e = 2 * (2 * depth.max(0) as u64 + 1) + angles as u64;
                    budget_check("sample", e, b.max_sample)?;
                    denjoy_nw_points(d.alpha(), depth, angles)
                }
                Sampler::DenjoyWindow {
                    back,
                    ahead,
                    stride,
                    angles,
                } => {
                    let lo = -(horizon as i64 + back);
                    let e = 2 * ((ahead - lo).max(0) / stride.max(1) + 1) as u64 + angles as u64;
                    budget_check("sample", e, b.max_sample)?;
                    denjoy_window_points(d.alpha(), lo, ahead, stride, angles)
                }
                _ => return unsupported(),
            };
            let e = pts.len() as u64;
            budget_check("stored values", e * h, b.max_stored_values)?;
            if target == Target::Nw {
                denjoy_scalar_cache(d, &pts, horizon)
            } else {
                budget_check("sample", e * e, b.max_sample)?;
                denjoy_arc_cache(d, &pts, horizon)
            }
        }
        _ => unsupported(),
    }
}

/// Greedy separated and spanning counts at one scale, horizons ascending.
pub fn run_scale(cache: &OrbitCache, eps: f64, ns: &[usize]) -> Result<ScaleCounts> {
    let mut greedy = GreedySeparated::new(cache, eps)?;
    let mut cover = CoverageTracker::new(cache, eps);
    let mut sep = Vec::with_capacity(ns.len());
    let mut span = Vec::with_capacity(ns.len());
    for &n in ns {
        let g = greedy.advance(n)?;
        let s = if cache.len() <= ALL_CANDIDATES_MAX {
            spanning_greedy(cache, n, eps)?.min(g)
        } else {
            cover.advance(n, greedy.certificate())?;
            cover.cover_count()?
        };
        sep.push(g as u64);
        span.push(s as u64);
    }
    Ok(ScaleCounts { eps, sep, span })
}

/// Assembles the table, making separated counts nonincreasing in `ε` by
/// carrying the count of the next larger scale when it is higher: an
/// `(n, ε')`-separated set with `ε' > ε` is also `(n, ε)`-separated.
pub fn assemble(sample_size: usize, ns: &[usize], mut scales: Vec<ScaleCounts>) -> Result<EstimateRun> {
    let eps: Vec<f64> = scales.iter().map(|s| s.eps).collect();
    let mut order: Vec<usize> = (0..scales.len()).collect();
    order.sort_by(|&a, &b| eps[b].partial_cmp(&eps[a]).unwrap());
    for w in 1..order.len() {
        let (prev, cur) = (order[w - 1], order[w]);
        for i in 0..ns.len() {
            let carried = scales[prev].sep[i];
            if carried > scales[cur].sep[i] {
                scales[cur].sep[i] = carried;
            }
        }
    }
    let table = GrowthTable {
        eps,
        n: ns.to_vec(),
        sep: scales.iter().map(|s| s.sep.clone()).collect(),
        span: scales.into_iter().map(|s| s.span).collect(),
    };
    let estimate = growth_exponent(&table)?;
    Ok(EstimateRun {
        sample_size,
        table,
        estimate,
    })
}

/// Sequential estimate of `h_pol` on a target space.
pub fn estimate_hpol(system: &System, target: Target, protocol: &Protocol) -> Result<EstimateRun> {
    let cache = prepare(system, target, protocol)?;
    let scales = protocol
        .eps
        .iter()
        .map(|&e| run_scale(&cache, e, &protocol.n))
        .collect::<Result<Vec<_>>>()?;
    assemble(cache.len(), &protocol.n, scales)
}
