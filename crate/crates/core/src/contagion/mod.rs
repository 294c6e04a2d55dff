//! Cascading failures after an asset-price shock: threshold failures,
//! discontinuous failure costs and fire-sale price pressure, iterated to a
//! fixed point over a frozen dependency matrix.

mod config;
mod engine;
mod result;

pub use config::ScenarioConfig;
pub use engine::{
    apply_fire_sales, fire_sale_factor, run_cascade, run_cascade_with, Cascade, CascadeState,
    ValuationContext,
};
pub use result::{CascadeResult, StepRecord, TerminationReason, SUMMARY_HEADER};

use thiserror::Error;

use crate::valuation::ValuationError;

#[derive(Debug, Error)]
pub enum ContagionError {
    #[error("{name} = {value} outside {range}")]
    InvalidParameter { name: &'static str, value: f64, range: &'static str },
    #[error("unknown asset {0:?}")]
    UnknownAsset(String),
    #[error("asset {0} has no holders")]
    AssetUnheld(usize),
    #[error("no shock target: the snapshot has no non-cash asset")]
    NoShockTarget,
    #[error("fund {fund} is below its critical value before any shock")]
    PreShockFailure { fund: String },
    #[error("max_iterations must be positive")]
    ZeroIterations,
    #[error("valuation context built for {expected} funds, snapshot has {got}")]
    ContextMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Valuation(#[from] ValuationError),
}
