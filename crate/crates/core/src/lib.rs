//! Circle homeomorphisms, their induced maps on the hyperspace of
//! subcontinua `C(S¹)`, and a counting engine that estimates polynomial
//! entropy from separated and spanning sets.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the CLI and
//! job fan-out live in the companion `hpol-lab` crate.
//!
//! Module map:
//!
//! - [`circle`]: points of `S¹ = ℝ/ℤ`, arcs, and the closed-form Hausdorff
//!   distance between subcontinua.
//! - [`dynamics`]: lift-based maps (rotations, Arnold family, rational
//!   Morse–Smale family), the symbolic Denjoy counterexample, rotation
//!   numbers and non-wandering sets.
//! - [`hyperspace`]: the induced map `C(f)`, arc grids and Cantor-endpoint
//!   arcs.
//! - [`entropy`]: orbit caches, greedy and exact separated counts, spanning
//!   counts, growth tables and exponent fits.
//! - [`verify`]: executable replays of the cover, wandering-interval,
//!   product and classification arguments.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

mod math;

pub mod circle;
pub mod dynamics;
pub mod entropy;
pub mod error;
pub mod hyperspace;
pub mod verify;

pub use circle::{circ_dist, hausdorff, hausdorff_oracle, random_arc, Arc, CirclePoint};
pub use dynamics::{DenjoyMap, DenjoyPoint, Family, LiftMap, System, SystemDescriptor};
pub use error::Error;
