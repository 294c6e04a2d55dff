//! Market snapshots: CSV bundles, JSON round-trips, external-id symbol
//! tables, and a seeded synthetic market generator.

mod csvio;
mod generator;
mod series;
mod snapshot;
mod symbols;

pub use csvio::{
    load_bundle, load_snapshot, write_bundle, write_snapshot, LoadedSnapshot, SnapshotFiles,
    ASSETS_FILE, CROSSHOLDINGS_FILE, FUNDS_FILE, HOLDINGS_FILE,
};
pub use generator::{generate_market, GeneratorConfig, DOMINANT_ASSET_ID, CASH_ASSET_ID};
pub use series::{aligned_graph_snapshots, check_series, load_series, synthetic_series};
pub use snapshot::{AssetRecord, FundRecord, MarketSnapshot, CASH_CLASS};
pub use symbols::SymbolTable;

use std::path::PathBuf;

use thiserror::Error;

use crate::valuation::ValuationError;

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{file}:{line}: column {column}: {message}")]
    Parse { file: String, line: usize, column: String, message: String },
    #[error("{file}:{line}: unresolved reference {id:?}")]
    UnresolvedReference { file: String, line: usize, id: String },
    #[error("{file}:{line}: duplicate row {key:?}")]
    DuplicateRow { file: String, line: usize, key: String },
    #[error("validation failed: {0}")]
    Validation(#[from] ValuationError),
    #[error("invalid snapshot: {0}")]
    InvalidSnapshot(String),
    #[error("infeasible generator targets: {0}")]
    InfeasibleTargets(String),
    #[error("inconsistent symbols across periods: {0}")]
    InconsistentSymbols(String),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}
