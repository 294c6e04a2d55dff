//! Cross-holdings valuation: the cross-holdings matrix C, outside shares,
//! the fund–asset value matrix W, and the dependency matrix
//! `A = Ĉ (I - C)^{-1}` that maps primitive asset value to outside value.
//!
//! Index convention: `C[i][j]` is the fraction of fund `j` held by fund `i`
//! (row = investor, column = investee), so book values satisfy
//! `v = W 1 + C v` and the outside share of fund `j` is `1 - sum_i C[i][j]`.

mod cross_holdings;
mod holdings;
mod solver;
mod values;

pub use cross_holdings::{CrossHoldings, DEFAULT_OUTSIDE_EPSILON};
pub use holdings::{repriced_holdings, BipartiteHoldings};
pub use solver::{
    dependency_matrix, dependency_matrix_with, DenseLu, DependencyMatrix, FixedPoint,
    LeontiefSolver, SolverRegistry, SolverStrategy, AUTO_DENSE_LIMIT,
};
pub use values::{market_values, ValueVector};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ValuationError {
    #[error("fund {fund} is fully internalized: cross-holdings column sum {column_sum} leaves no outside share")]
    FullyInternalized { fund: usize, column_sum: f64 },
    #[error("fund {0} holds its own quotas")]
    SelfHolding(usize),
    #[error("fraction {fraction} held by fund {investor} in fund {investee} is outside [0, 1]")]
    FractionOutOfRange { investor: usize, investee: usize, fraction: f64 },
    #[error("duplicate cross-holding of fund {investee} by fund {investor}")]
    DuplicateHolding { investor: usize, investee: usize },
    #[error("duplicate position of fund {fund} in asset {asset}")]
    DuplicatePosition { fund: usize, asset: usize },
    #[error("fund index {index} out of range ({count} funds)")]
    FundOutOfRange { index: usize, count: usize },
    #[error("asset index {index} out of range ({count} assets)")]
    AssetOutOfRange { index: usize, count: usize },
    #[error("position of fund {fund} in asset {asset} has invalid value {value}")]
    NegativeValue { fund: usize, asset: usize, value: f64 },
    #[error("asset {asset} has invalid price {price}")]
    NegativePrice { asset: usize, price: f64 },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("I - C is singular")]
    SingularSystem,
    #[error("linear solver failed: {0}")]
    SolverError(String),
    #[error("unknown solver {0:?}")]
    UnknownSolver(String),
    #[error("solver {0:?} already registered")]
    DuplicateSolver(String),
    #[error("value not conserved: outside values sum to {outside}, primitive value is {primitive}")]
    ConservationViolated { outside: f64, primitive: f64 },
}
