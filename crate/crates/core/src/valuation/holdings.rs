use std::collections::HashSet;

use super::ValuationError;
use crate::netcore::{BipartiteGraph, NodeId};

/// Fund–asset position values W (n x m) with the unit prices they were
/// marked at.
///
/// The asset-share matrix D is derived, `D_ik = w_ik / sum_i' w_i'k`, so
/// `D q = W 1` holds by construction where `q` is the vector of held asset
/// values (column sums of W).
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteHoldings {
    funds: usize,
    assets: usize,
    /// `(fund, asset, value)` sorted by `(fund, asset)`.
    positions: Vec<(usize, usize, f64)>,
    /// `fund_offsets[f]..fund_offsets[f + 1]` indexes `positions`.
    fund_offsets: Vec<usize>,
    /// Per asset: indices into `positions`, in fund order.
    holders: Vec<Vec<usize>>,
    prices: Vec<f64>,
}

impl BipartiteHoldings {
    pub fn build(
        funds: usize,
        assets: usize,
        positions: impl IntoIterator<Item = (usize, usize, f64)>,
        prices: Vec<f64>,
    ) -> Result<Self, ValuationError> {
        if prices.len() != assets {
            return Err(ValuationError::DimensionMismatch { expected: assets, got: prices.len() });
        }
        if let Some(asset) = prices.iter().position(|p| !(*p > 0.0) || !p.is_finite()) {
            return Err(ValuationError::NegativePrice { asset, price: prices[asset] });
        }
        Self::assemble(funds, assets, positions, prices)
    }

    fn assemble(
        funds: usize,
        assets: usize,
        positions: impl IntoIterator<Item = (usize, usize, f64)>,
        prices: Vec<f64>,
    ) -> Result<Self, ValuationError> {
        let mut seen = HashSet::new();
        let mut list = Vec::new();
        for (fund, asset, value) in positions {
            if fund >= funds {
                return Err(ValuationError::FundOutOfRange { index: fund, count: funds });
            }
            if asset >= assets {
                return Err(ValuationError::AssetOutOfRange { index: asset, count: assets });
            }
            if !(value >= 0.0) || !value.is_finite() {
                return Err(ValuationError::NegativeValue { fund, asset, value });
            }
            if !seen.insert((fund, asset)) {
                return Err(ValuationError::DuplicatePosition { fund, asset });
            }
            list.push((fund, asset, value));
        }
        list.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        let mut fund_offsets = vec![0; funds + 1];
        for &(f, _, _) in &list {
            fund_offsets[f + 1] += 1;
        }
        for f in 0..funds {
            fund_offsets[f + 1] += fund_offsets[f];
        }
        let mut holders = vec![Vec::new(); assets];
        for (k, &(_, a, _)) in list.iter().enumerate() {
            holders[a].push(k);
        }
        Ok(BipartiteHoldings { funds, assets, positions: list, fund_offsets, holders, prices })
    }

    pub fn fund_count(&self) -> usize {
        self.funds
    }

    pub fn asset_count(&self) -> usize {
        self.assets
    }

    pub fn positions(&self) -> &[(usize, usize, f64)] {
        &self.positions
    }

    /// Positions of one fund, in asset order.
    pub fn fund_positions(&self, fund: usize) -> &[(usize, usize, f64)] {
        &self.positions[self.fund_offsets[fund]..self.fund_offsets[fund + 1]]
    }

    /// Positions in one asset, in fund order.
    pub fn asset_positions(&self, asset: usize) -> impl Iterator<Item = &(usize, usize, f64)> + '_ {
        self.holders[asset].iter().map(move |&k| &self.positions[k])
    }

    pub fn holder_count(&self, asset: usize) -> usize {
        self.holders[asset].len()
    }

    pub fn prices(&self) -> &[f64] {
        &self.prices
    }

    /// `W 1`: each fund's primitive asset value.
    pub fn fund_asset_values(&self) -> Vec<f64> {
        (0..self.funds)
            .map(|f| self.fund_positions(f).iter().map(|p| p.2).sum())
            .collect()
    }

    /// Column sums of W: the value of each asset held inside the system.
    pub fn asset_values(&self) -> Vec<f64> {
        (0..self.assets)
            .map(|a| self.asset_positions(a).map(|p| p.2).sum())
            .collect()
    }

    pub fn total_value(&self) -> f64 {
        self.asset_values().iter().sum()
    }

    /// D as `(fund, asset, share)` triplets; assets with zero held value have no entries.
    pub fn shares(&self) -> Vec<(usize, usize, f64)> {
        let totals = self.asset_values();
        self.positions
            .iter()
            .filter(|p| totals[p.1] > 0.0)
            .map(|&(f, a, w)| (f, a, w / totals[a]))
            .collect()
    }

    /// `D q` with `q` the held asset values; agrees with [`Self::fund_asset_values`].
    pub fn fund_asset_values_from_shares(&self) -> Vec<f64> {
        let totals = self.asset_values();
        let mut out = vec![0.0; self.funds];
        for (f, a, d) in self.shares() {
            out[f] += d * totals[a];
        }
        out
    }

    pub fn to_graph(&self) -> BipartiteGraph {
        BipartiteGraph::build(
            self.funds,
            self.assets,
            self.positions
                .iter()
                .map(|&(f, a, w)| (NodeId::fund(f), NodeId::asset(a), w)),
        )
        .expect("holdings satisfy bipartite invariants")
    }
}

/// Marks W to `new_prices`: `w'_ij = w_ij * (new_p_j / p_j)`. A zero price wipes
/// the asset out; an asset already at zero stays at zero.
pub fn repriced_holdings(
    bh: &BipartiteHoldings,
    new_prices: &[f64],
) -> Result<BipartiteHoldings, ValuationError> {
    if new_prices.len() != bh.assets {
        return Err(ValuationError::DimensionMismatch { expected: bh.assets, got: new_prices.len() });
    }
    if let Some(asset) = new_prices.iter().position(|p| !(*p >= 0.0) || !p.is_finite()) {
        return Err(ValuationError::NegativePrice { asset, price: new_prices[asset] });
    }
    let positions = bh.positions.iter().map(|&(f, a, w)| {
        let old = bh.prices[a];
        let value = if old > 0.0 { w * (new_prices[a] / old) } else { 0.0 };
        (f, a, value)
    });
    BipartiteHoldings::assemble(bh.funds, bh.assets, positions, new_prices.to_vec())
}
