//! Circle homeomorphisms: lift-based families and the symbolic Denjoy map.

mod denjoy;
mod lift;
mod system;

pub use denjoy::{
    denjoy_step, gap_length, gap_tail, golden_alpha, DenjoyMap, DenjoyPoint, EMBED_TOL,
    GAP_INDEX_BUDGET, GAP_TOTAL,
};
pub use lift::{rotation_number_estimate, rotation_number_from, Family, LiftMap};
pub use system::{
    nw_description, Classification, MapSpec, NwKind, NwReport, System, SystemDescriptor,
};
