//! Executable checks of the structural arguments: the isometry of induced
//! rotations, the `N²` cover of `C(S¹)`, the wandering-interval separated
//! sets of Denjoy systems, the product structure of Cantor-endpoint arcs,
//! and the `0`/`2` classification of hyperspace entropy.

mod an;
mod classify;
mod cover;
mod isometry;
mod product;

pub use an::{an_witnesses, build_an, AnLevel, AnReport};
pub use classify::{
    band_for, classify_and_verify, verify_reduction, ClassifyReport, ReductionReport, POWER_TOL,
    TWO_BAND, ZERO_BAND,
};
pub use cover::{
    build_interval_cover, chart_base, verify_cover, CoverReport, IntervalCover, MAX_BASE_ARCS,
    OVERLAP,
};
pub use isometry::{verify_isometry, IsometryReport, ISOMETRY_TOL};
pub use product::{verify_product, ProductReport, PRODUCT_TOL, Y_BAND};
