use serde::{Deserialize, Serialize};

use super::{IngestError, SymbolTable};
use crate::netcore::{BipartiteGraph, DirectedWeightedGraph};
use crate::valuation::{BipartiteHoldings, CrossHoldings};

/// Asset class treated as cash: never a default shock target and excluded
/// from asset-degree superlatives.
pub const CASH_CLASS: &str = "cash";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FundRecord {
    pub id: String,
    pub class: String,
    pub administrator: String,
    pub open_ended: bool,
}

/// Asset metadata; the unit price lives in [`BipartiteHoldings::prices`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssetRecord {
    pub id: String,
    pub class: String,
}

/// Complete system state at one date.
#[derive(Debug, Clone, PartialEq)]
pub struct MarketSnapshot {
    date: String,
    funds: Vec<FundRecord>,
    assets: Vec<AssetRecord>,
    fund_symbols: SymbolTable,
    asset_symbols: SymbolTable,
    cross: CrossHoldings,
    holdings: BipartiteHoldings,
}

impl MarketSnapshot {
    /// Checks dimensions, id uniqueness, and that every asset has a holder.
    pub fn new(
        date: impl Into<String>,
        funds: Vec<FundRecord>,
        assets: Vec<AssetRecord>,
        cross: CrossHoldings,
        holdings: BipartiteHoldings,
    ) -> Result<Self, IngestError> {
        let mut fund_symbols = SymbolTable::new();
        for f in &funds {
            if fund_symbols.insert(&f.id).is_none() {
                return Err(IngestError::InvalidSnapshot(format!("duplicate fund id {:?}", f.id)));
            }
        }
        let mut asset_symbols = SymbolTable::new();
        for a in &assets {
            if asset_symbols.insert(&a.id).is_none() {
                return Err(IngestError::InvalidSnapshot(format!("duplicate asset id {:?}", a.id)));
            }
        }
        if cross.n() != funds.len() || holdings.fund_count() != funds.len() {
            return Err(IngestError::InvalidSnapshot(format!(
                "{} funds but cross-holdings cover {} and holdings cover {}",
                funds.len(),
                cross.n(),
                holdings.fund_count()
            )));
        }
        if holdings.asset_count() != assets.len() {
            return Err(IngestError::InvalidSnapshot(format!(
                "{} assets but holdings cover {}",
                assets.len(),
                holdings.asset_count()
            )));
        }
        if let Some(a) = (0..assets.len()).find(|&a| holdings.holder_count(a) == 0) {
            return Err(IngestError::InvalidSnapshot(format!(
                "asset {:?} has no holders",
                assets[a].id
            )));
        }
        Ok(MarketSnapshot {
            date: date.into(),
            funds,
            assets,
            fund_symbols,
            asset_symbols,
            cross,
            holdings,
        })
    }

    pub fn date(&self) -> &str {
        &self.date
    }

    pub fn funds(&self) -> &[FundRecord] {
        &self.funds
    }

    pub fn assets(&self) -> &[AssetRecord] {
        &self.assets
    }

    pub fn fund_symbols(&self) -> &SymbolTable {
        &self.fund_symbols
    }

    pub fn asset_symbols(&self) -> &SymbolTable {
        &self.asset_symbols
    }

    pub fn cross_holdings(&self) -> &CrossHoldings {
        &self.cross
    }

    pub fn holdings(&self) -> &BipartiteHoldings {
        &self.holdings
    }

    pub fn fund_count(&self) -> usize {
        self.funds.len()
    }

    pub fn asset_count(&self) -> usize {
        self.assets.len()
    }

    pub fn open_mask(&self) -> Vec<bool> {
        self.funds.iter().map(|f| f.open_ended).collect()
    }

    pub fn open_fund_count(&self) -> usize {
        self.funds.iter().filter(|f| f.open_ended).count()
    }

    pub fn cross_graph(&self) -> DirectedWeightedGraph {
        self.cross.to_digraph()
    }

    pub fn asset_graph(&self) -> BipartiteGraph {
        self.holdings.to_graph()
    }

    /// Same snapshot with W marked to new prices.
    pub fn with_holdings(&self, holdings: BipartiteHoldings) -> Result<Self, IngestError> {
        MarketSnapshot::new(
            self.date.clone(),
            self.funds.clone(),
            self.assets.clone(),
            self.cross.clone(),
            holdings,
        )
    }

    pub fn with_cross_holdings(&self, cross: CrossHoldings) -> Result<Self, IngestError> {
        MarketSnapshot::new(
            self.date.clone(),
            self.funds.clone(),
            self.assets.clone(),
            cross,
            self.holdings.clone(),
        )
    }

    pub fn with_date(mut self, date: impl Into<String>) -> Self {
        self.date = date.into();
        self
    }

    /// Largest non-cash asset by held value; ties go to the lower index.
    pub fn dominant_asset(&self) -> Option<usize> {
        let values = self.holdings.asset_values();
        (0..self.assets.len())
            .filter(|&a| self.assets[a].class != CASH_CLASS)
            .fold(None, |best: Option<usize>, a| match best {
                Some(b) if values[b] >= values[a] => Some(b),
                _ => Some(a),
            })
    }

    pub fn to_json(&self) -> Result<String, IngestError> {
        Ok(serde_json::to_string_pretty(&SnapshotDoc::from(self))?)
    }

    pub fn from_json(text: &str) -> Result<Self, IngestError> {
        let doc: SnapshotDoc = serde_json::from_str(text)?;
        doc.into_snapshot()
    }
}

#[derive(Serialize, Deserialize)]
struct AssetDoc {
    id: String,
    class: String,
    price: f64,
}

#[derive(Serialize, Deserialize)]
struct SnapshotDoc {
    date: String,
    funds: Vec<FundRecord>,
    assets: Vec<AssetDoc>,
    /// `(investor_fund_id, investee_fund_id, fraction)`
    cross_holdings: Vec<(String, String, f64)>,
    /// `(fund_id, asset_id, value)`
    holdings: Vec<(String, String, f64)>,
}

impl From<&MarketSnapshot> for SnapshotDoc {
    fn from(s: &MarketSnapshot) -> Self {
        let fid = |k: usize| s.fund_symbols.id(k).to_string();
        let aid = |k: usize| s.asset_symbols.id(k).to_string();
        SnapshotDoc {
            date: s.date.clone(),
            funds: s.funds.clone(),
            assets: s
                .assets
                .iter()
                .zip(s.holdings.prices())
                .map(|(a, &price)| AssetDoc { id: a.id.clone(), class: a.class.clone(), price })
                .collect(),
            cross_holdings: s.cross.entries().iter().map(|&(i, j, c)| (fid(i), fid(j), c)).collect(),
            holdings: s.holdings.positions().iter().map(|&(f, a, w)| (fid(f), aid(a), w)).collect(),
        }
    }
}

impl SnapshotDoc {
    fn into_snapshot(self) -> Result<MarketSnapshot, IngestError> {
        let mut funds_tab = SymbolTable::new();
        for f in &self.funds {
            funds_tab.insert(&f.id);
        }
        let mut assets_tab = SymbolTable::new();
        for a in &self.assets {
            assets_tab.insert(&a.id);
        }
        let resolve = |tab: &SymbolTable, id: &str, what: &str| {
            tab.get(id).ok_or_else(|| IngestError::UnresolvedReference {
                file: format!("json:{what}"),
                line: 0,
                id: id.to_string(),
            })
        };
        let mut cross = Vec::new();
        for (i, j, c) in &self.cross_holdings {
            cross.push((resolve(&funds_tab, i, "cross_holdings")?, resolve(&funds_tab, j, "cross_holdings")?, *c));
        }
        let mut pos = Vec::new();
        for (f, a, w) in &self.holdings {
            pos.push((resolve(&funds_tab, f, "holdings")?, resolve(&assets_tab, a, "holdings")?, *w));
        }
        let n = self.funds.len();
        let prices = self.assets.iter().map(|a| a.price).collect();
        let holdings = BipartiteHoldings::build(n, self.assets.len(), pos, prices)?;
        let cross = CrossHoldings::build(n, cross)?;
        let assets = self
            .assets
            .into_iter()
            .map(|a| AssetRecord { id: a.id, class: a.class })
            .collect();
        MarketSnapshot::new(self.date, self.funds, assets, cross, holdings)
    }
}
