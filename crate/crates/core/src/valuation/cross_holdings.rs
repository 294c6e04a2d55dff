use std::collections::HashSet;

use super::ValuationError;
use crate::netcore::DirectedWeightedGraph;

/// Minimum outside share every fund must keep.
pub const DEFAULT_OUTSIDE_EPSILON: f64 = 1e-6;

/// Sparse cross-holdings matrix C with the derived outside shares Ĉ.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossHoldings {
    n: usize,
    /// `(investor, investee, fraction)` sorted by `(investor, investee)`.
    entries: Vec<(usize, usize, f64)>,
    /// Row `i`: `(j, C_ij)`.
    rows: Vec<Vec<(usize, f64)>>,
    column_sums: Vec<f64>,
    outside: Vec<f64>,
}

impl CrossHoldings {
    pub fn build(
        n: usize,
        entries: impl IntoIterator<Item = (usize, usize, f64)>,
    ) -> Result<Self, ValuationError> {
        Self::build_with_epsilon(n, entries, DEFAULT_OUTSIDE_EPSILON)
    }

    pub fn build_with_epsilon(
        n: usize,
        entries: impl IntoIterator<Item = (usize, usize, f64)>,
        epsilon: f64,
    ) -> Result<Self, ValuationError> {
        let mut seen = HashSet::new();
        let mut list = Vec::new();
        for (investor, investee, fraction) in entries {
            for index in [investor, investee] {
                if index >= n {
                    return Err(ValuationError::FundOutOfRange { index, count: n });
                }
            }
            if investor == investee {
                return Err(ValuationError::SelfHolding(investor));
            }
            if !(0.0..=1.0).contains(&fraction) {
                return Err(ValuationError::FractionOutOfRange { investor, investee, fraction });
            }
            if !seen.insert((investor, investee)) {
                return Err(ValuationError::DuplicateHolding { investor, investee });
            }
            list.push((investor, investee, fraction));
        }
        list.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));

        let mut rows = vec![Vec::new(); n];
        let mut column_sums = vec![0.0; n];
        for &(i, j, c) in &list {
            rows[i].push((j, c));
        }
        // column sums accumulated in investor order
        for &(_, j, c) in &list {
            column_sums[j] += c;
        }
        if let Some(fund) = column_sums.iter().position(|&s| s >= 1.0 - epsilon) {
            return Err(ValuationError::FullyInternalized { fund, column_sum: column_sums[fund] });
        }
        let outside = column_sums.iter().map(|s| 1.0 - s).collect();
        Ok(CrossHoldings { n, entries: list, rows, column_sums, outside })
    }

    pub fn empty(n: usize) -> Self {
        Self::build(n, []).expect("empty cross-holdings are valid")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[(usize, usize, f64)] {
        &self.entries
    }

    /// Holdings of fund `investor`: `(investee, fraction)` in investee order.
    pub fn row(&self, investor: usize) -> &[(usize, f64)] {
        &self.rows[investor]
    }

    pub fn get(&self, investor: usize, investee: usize) -> f64 {
        self.rows[investor]
            .binary_search_by(|e| e.0.cmp(&investee))
            .map(|k| self.rows[investor][k].1)
            .unwrap_or(0.0)
    }

    pub fn column_sums(&self) -> &[f64] {
        &self.column_sums
    }

    /// Diagonal of Ĉ.
    pub fn outside_shares(&self) -> &[f64] {
        &self.outside
    }

    /// `C x`.
    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        self.rows
            .iter()
            .map(|row| row.iter().map(|&(j, c)| c * x[j]).sum())
            .collect()
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut m = vec![vec![0.0; self.n]; self.n];
        for &(i, j, c) in &self.entries {
            m[i][j] = c;
        }
        m
    }

    /// Investor -> investee graph weighted by fraction.
    pub fn to_digraph(&self) -> DirectedWeightedGraph {
        DirectedWeightedGraph::build(self.n, self.entries.iter().copied())
            .expect("cross-holdings satisfy digraph invariants")
    }
}
