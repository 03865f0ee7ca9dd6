//! Polynomial-entropy estimation from separated and spanning counts.
//!
//! A sample (points or arcs) is iterated once into an [`OrbitCache`]; the
//! dynamic metric `d_n` is evaluated on demand from it. For each scale `ε`
//! the greedy engine produces maximal `(n, ε)`-separated sets over
//! increasing `n`, spanning counts come from a greedy set cover, and the
//! growth exponent is the log-log slope in `n`.

mod cache;
mod estimate;
mod exact;
mod growth;
mod index;
mod sample;
mod separated;
mod spanning;

pub use cache::{lift_orbit, Elem, OrbitCache, RowRef};
pub use estimate::{
    assemble, estimate_hpol, prepare, run_scale, Budget, EstimateRun, Protocol, Sampler,
    ScaleCounts, Target, ALL_CANDIDATES_MAX,
};
pub use exact::{
    close_graph, exact_separated_small, max_independent_set, min_clique_cover,
    min_dominating_set, EXACT_MAX,
};
pub use growth::{
    fit_scale, growth_exponent, least_squares, EntropyEstimate, GrowthTable, ScaleFit, POOR_FIT,
    TREND_TOL,
};
pub use sample::{
    denjoy_arc_cache, denjoy_nw_points, denjoy_scalar_cache, denjoy_window_points,
    orbit_arc_cache, orbit_sample_size, orbit_scalar_cache, pair_cache, scalar_grid_cache,
    wandering_structure, OrbitSampler, WanderingCycle, WanderingStructure,
};
pub use separated::{greedy_separated, greedy_separated_naive, GreedySeparated};
pub use spanning::{greedy_set_cover, spanning_greedy, CoverageTracker};
