#![allow(dead_code)]

use fundnet_core::ingest::{AssetRecord, FundRecord, MarketSnapshot};
use fundnet_core::valuation::{BipartiteHoldings, CrossHoldings};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn fund(id: &str) -> FundRecord {
    FundRecord { id: id.into(), class: "fi".into(), administrator: "adm".into(), open_ended: true }
}

pub fn asset(id: &str) -> AssetRecord {
    AssetRecord { id: id.into(), class: "equity".into() }
}

/// Snapshot with funds F0.. and assets A0.., unit prices unless given.
pub fn market(
    n: usize,
    m: usize,
    cross: Vec<(usize, usize, f64)>,
    positions: Vec<(usize, usize, f64)>,
    prices: Option<Vec<f64>>,
) -> MarketSnapshot {
    let funds = (0..n).map(|i| fund(&format!("F{i}"))).collect();
    let assets = (0..m).map(|k| asset(&format!("A{k}"))).collect();
    let ch = CrossHoldings::build(n, cross).unwrap();
    let bh = BipartiteHoldings::build(n, m, positions, prices.unwrap_or(vec![1.0; m])).unwrap();
    MarketSnapshot::new("t0", funds, assets, ch, bh).unwrap()
}

/// Random market with n funds, m assets, every asset held, sparse cross-holdings
/// with column sums at most `max_col`.
pub fn random_market(rng: &mut ChaCha8Rng, n: usize, m: usize, max_col: f64) -> MarketSnapshot {
    let mut positions = Vec::new();
    for i in 0..n {
        for k in 0..m {
            if rng.random::<f64>() < 0.5 {
                positions.push((i, k, rng.random_range(1.0..100.0)));
            }
        }
        if !positions.iter().any(|p| p.0 == i) {
            positions.push((i, rng.random_range(0..m), rng.random_range(1.0..100.0)));
        }
    }
    for k in 0..m {
        if !positions.iter().any(|p| p.1 == k) {
            positions.push((rng.random_range(0..n), k, rng.random_range(1.0..100.0)));
        }
    }
    let mut cross = Vec::new();
    let mut col = vec![0.0; n];
    for i in 0..n {
        for j in 0..n {
            if i != j && rng.random::<f64>() < 0.3 {
                let f: f64 = rng.random_range(0.01..0.5);
                if col[j] + f <= max_col {
                    col[j] += f;
                    cross.push((i, j, f));
                }
            }
        }
    }
    let prices = (0..m).map(|_| rng.random_range(0.5..5.0)).collect();
    market(n, m, cross, positions, Some(prices))
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
