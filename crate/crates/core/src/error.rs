use thiserror::Error;

/// Errors raised by the library surface.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter {
        name: &'static str,
        reason: &'static str,
    },
    #[error("lift is not strictly increasing near x = {at}")]
    NotMonotone { at: f64 },
    #[error("lift is not degree one: |F(x+1) - F(x) - 1| = {defect} at x = {at}")]
    NotDegreeOne { at: f64, defect: f64 },
    #[error("horizon {requested} exceeds cached horizon {available}")]
    HorizonExceeded { requested: usize, available: usize },
    #[error("budget exceeded for {dimension}: requested {requested}, limit {limit}")]
    Budget {
        dimension: &'static str,
        requested: u64,
        limit: u64,
    },
    #[error("sample of {size} points is too large for the exact oracle (max {max})")]
    SampleTooLarge { size: usize, max: usize },
    #[error("gap index {index} is outside the index budget {budget}")]
    GapIndex { index: i64, budget: i64 },
    #[error("the sample kind does not apply to this system: {0}")]
    Unsupported(&'static str),
    #[error("growth table needs at least {needed} horizons per scale, got {got}")]
    TooFewHorizons { needed: usize, got: usize },
    #[error("cover construction failed: {0}")]
    Cover(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;
