use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Beta, Distribution, Exp1, LogNormal};
use serde::{Deserialize, Serialize};

use super::{AssetRecord, FundRecord, IngestError, MarketSnapshot, CASH_CLASS};
use crate::valuation::{BipartiteHoldings, CrossHoldings};

pub const DOMINANT_ASSET_ID: &str = "GOV1";
pub const CASH_ASSET_ID: &str = "CASH";

/// Parameters of the synthetic market. The seed fixes the output completely.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GeneratorConfig {
    pub date: String,
    pub n_funds: usize,
    pub n_assets: usize,
    /// Cross-holdings edges per fund.
    pub mean_cross_degree: f64,
    /// Asset positions per fund, counting the dominant asset and cash.
    pub mean_asset_degree: f64,
    /// Attachment weight is `degree + attachment_offset`; smaller is more skewed.
    pub attachment_offset: f64,
    pub seed: u64,
    /// Dominant asset's share of total primitive value.
    pub dominant_share: f64,
    pub dominant_holder_fraction: f64,
    pub include_cash: bool,
    pub max_column_sum: f64,
    /// Probability that an investee is redrawn until it shares the investor's administrator.
    pub same_administrator_bias: f64,
    pub closed_fraction: f64,
    pub administrators: usize,
    pub fund_classes: Vec<(String, f64)>,
    pub asset_classes: Vec<(String, f64)>,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig {
            date: "2024-01".to_string(),
            n_funds: 500,
            n_assets: 200,
            mean_cross_degree: 4.34,
            mean_asset_degree: 20.23,
            attachment_offset: 1.0,
            seed: 0,
            dominant_share: 0.35,
            dominant_holder_fraction: 0.98,
            include_cash: true,
            max_column_sum: 0.9,
            same_administrator_bias: 0.6,
            closed_fraction: 0.0,
            administrators: 25,
            fund_classes: vec![
                ("fixed_income".into(), 0.35),
                ("multimarket".into(), 0.30),
                ("equity".into(), 0.20),
                ("fund_of_funds".into(), 0.10),
                ("fx".into(), 0.05),
            ],
            asset_classes: vec![
                ("equity".into(), 0.40),
                ("corporate_bond".into(), 0.30),
                ("bank_deposit".into(), 0.20),
                ("derivative".into(), 0.10),
            ],
        }
    }
}

impl GeneratorConfig {
    fn cash_fraction(&self) -> f64 {
        if self.include_cash {
            0.9
        } else {
            0.0
        }
    }

    fn other_assets(&self) -> usize {
        self.n_assets.saturating_sub(1 + self.include_cash as usize)
    }

    fn other_mean_degree(&self) -> f64 {
        (self.mean_asset_degree - self.dominant_holder_fraction - self.cash_fraction()).max(1.0)
    }

    pub fn validate(&self) -> Result<(), IngestError> {
        let bad = |m: String| Err(IngestError::InfeasibleTargets(m));
        if self.n_funds == 0 {
            return bad("n_funds must be positive".into());
        }
        if self.other_assets() == 0 {
            return bad(format!(
                "n_assets = {} leaves no assets besides the dominant asset{}",
                self.n_assets,
                if self.include_cash { " and cash" } else { "" }
            ));
        }
        if !(self.mean_cross_degree >= 0.0) {
            return bad("mean_cross_degree must be non-negative".into());
        }
        if self.mean_cross_degree > 0.0 && self.mean_cross_degree >= (self.n_funds as f64 - 1.0) {
            return bad(format!(
                "mean cross-holdings degree {} needs more than {} funds",
                self.mean_cross_degree,
                self.n_funds
            ));
        }
        if !(self.other_mean_degree() <= self.other_assets() as f64) {
            return bad(format!(
                "mean asset degree {} exceeds the {} assets available",
                self.mean_asset_degree, self.n_assets
            ));
        }
        if !(self.attachment_offset > 0.0) {
            return bad("attachment_offset must be positive".into());
        }
        if !(self.dominant_share > 0.0 && self.dominant_share < 1.0) {
            return bad("dominant_share must be in (0, 1)".into());
        }
        if !(self.dominant_holder_fraction > 0.0 && self.dominant_holder_fraction <= 1.0) {
            return bad("dominant_holder_fraction must be in (0, 1]".into());
        }
        if !(self.max_column_sum > 0.0 && self.max_column_sum < 1.0 - 1e-6) {
            return bad("max_column_sum must be in (0, 1)".into());
        }
        if !(0.0..=1.0).contains(&self.same_administrator_bias) {
            return bad("same_administrator_bias must be in [0, 1]".into());
        }
        if !(0.0..1.0).contains(&self.closed_fraction) {
            return bad("closed_fraction must be in [0, 1)".into());
        }
        if self.administrators == 0 || self.fund_classes.is_empty() || self.asset_classes.is_empty() {
            return bad("label distributions must be non-empty".into());
        }
        Ok(())
    }
}

/// Preferential-attachment urn: `P(k) ∝ count_k + offset`.
struct Urn {
    n: usize,
    offset: f64,
    balls: Vec<usize>,
}

impl Urn {
    fn new(n: usize, offset: f64) -> Self {
        Urn { n, offset, balls: Vec::new() }
    }

    fn draw(&self, rng: &mut ChaCha8Rng) -> usize {
        let uniform = self.offset * self.n as f64;
        if rng.random::<f64>() * (uniform + self.balls.len() as f64) < uniform {
            rng.random_range(0..self.n)
        } else {
            self.balls[rng.random_range(0..self.balls.len())]
        }
    }

    fn add(&mut self, k: usize) {
        self.balls.push(k);
    }
}

fn pick_label(rng: &mut ChaCha8Rng, dist: &[(String, f64)]) -> String {
    let total: f64 = dist.iter().map(|d| d.1).sum();
    let mut x = rng.random::<f64>() * total;
    for (label, w) in dist {
        if x < *w {
            return label.clone();
        }
        x -= w;
    }
    dist[dist.len() - 1].0.clone()
}

fn cents(x: f64) -> f64 {
    (x * 100.0).round() / 100.0
}

/// Seeded synthetic market with preferential attachment on cross-holdings
/// in-degree and asset popularity, plus one dominant asset.
pub fn generate_market(config: &GeneratorConfig) -> Result<MarketSnapshot, IngestError> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let n = config.n_funds;

    // administrators follow a 1/rank popularity
    let admin_dist: Vec<(String, f64)> = (0..config.administrators)
        .map(|k| (format!("ADM{:03}", k + 1), 1.0 / (k + 1) as f64))
        .collect();
    let width = n.to_string().len().max(5);
    let funds: Vec<FundRecord> = (0..n)
        .map(|i| FundRecord {
            id: format!("F{:0width$}", i + 1),
            class: pick_label(&mut rng, &config.fund_classes),
            administrator: pick_label(&mut rng, &admin_dist),
            open_ended: rng.random::<f64>() >= config.closed_fraction,
        })
        .collect();

    let cash = config.include_cash;
    let first_other = 1 + cash as usize;
    let n_other = config.other_assets();
    let awidth = config.n_assets.to_string().len().max(5);
    let mut assets = vec![AssetRecord { id: DOMINANT_ASSET_ID.into(), class: "government_bond".into() }];
    if cash {
        assets.push(AssetRecord { id: CASH_ASSET_ID.into(), class: CASH_CLASS.into() });
    }
    for k in first_other..config.n_assets {
        assets.push(AssetRecord {
            id: format!("A{:0awidth$}", k + 1),
            class: pick_label(&mut rng, &config.asset_classes),
        });
    }
    let prices: Vec<f64> = (0..config.n_assets)
        .map(|_| cents(rng.random_range(1.0..100.0)).max(0.01))
        .collect();

    // number of ordinary positions per fund
    let target = (config.other_mean_degree() * n as f64).round() as usize;
    let mut counts = vec![1usize; n];
    let mut fund_urn = Urn::new(n, config.attachment_offset);
    let mut placed = n;
    while placed < target {
        let f = fund_urn.draw(&mut rng);
        if counts[f] < n_other {
            counts[f] += 1;
            fund_urn.add(f);
            placed += 1;
        }
    }

    let mut asset_urn = Urn::new(n_other, config.attachment_offset);
    let mut picks: Vec<Vec<usize>> = Vec::with_capacity(n);
    let mut held = vec![false; n_other];
    for &k in &counts {
        let mut mine = HashSet::new();
        let mut list = Vec::with_capacity(k);
        while list.len() < k {
            let mut a = asset_urn.draw(&mut rng);
            let mut tries = 0;
            while mine.contains(&a) && tries < 50 {
                a = asset_urn.draw(&mut rng);
                tries += 1;
            }
            if mine.contains(&a) {
                let free: Vec<usize> = (0..n_other).filter(|x| !mine.contains(x)).collect();
                a = free[rng.random_range(0..free.len())];
            }
            mine.insert(a);
            list.push(a);
            asset_urn.add(a);
            held[a] = true;
        }
        picks.push(list);
    }
    for a in 0..n_other {
        if !held[a] {
            let f = rng.random_range(0..n);
            picks[f].push(a);
        }
    }

    let size = LogNormal::new(13.0, 1.2).expect("valid lognormal");
    let dominant_weight = Beta::new(4.0, 4.0 * (1.0 - config.dominant_share) / config.dominant_share)
        .expect("valid beta");
    let mut positions: Vec<(usize, usize, f64)> = Vec::new();
    let mut any_dominant = false;
    for (f, list) in picks.iter().enumerate() {
        let total = size.sample(&mut rng);
        let holds_dominant =
            rng.random::<f64>() < config.dominant_holder_fraction || (f == n - 1 && !any_dominant);
        let x = if holds_dominant { dominant_weight.sample(&mut rng).min(0.9) } else { 0.0 };
        let c = if cash && rng.random::<f64>() < config.cash_fraction() {
            rng.random_range(0.01..0.05)
        } else {
            0.0
        };
        if holds_dominant {
            any_dominant = true;
            positions.push((f, 0, total * x));
        }
        if c > 0.0 {
            positions.push((f, 1, total * c));
        }
        let weights: Vec<f64> = list.iter().map(|_| Exp1.sample(&mut rng)).collect();
        let wsum: f64 = weights.iter().sum();
        for (&a, w) in list.iter().zip(&weights) {
            positions.push((f, first_other + a, total * (1.0 - x - c) * w / wsum));
        }
    }
    // scale the dominant asset to its target share of primitive value
    let dominant_total: f64 = positions.iter().filter(|p| p.1 == 0).map(|p| p.2).sum();
    let rest: f64 = positions.iter().filter(|p| p.1 != 0).map(|p| p.2).sum();
    let scale = config.dominant_share * rest / ((1.0 - config.dominant_share) * dominant_total);
    for p in positions.iter_mut() {
        if p.1 == 0 {
            p.2 *= scale;
        }
        p.2 = cents(p.2).max(0.01);
    }

    let cross = generate_cross_holdings(config, &funds, &mut rng)?;
    let holdings = BipartiteHoldings::build(n, config.n_assets, positions, prices)?;
    MarketSnapshot::new(config.date.clone(), funds, assets, cross, holdings)
}

fn generate_cross_holdings(
    config: &GeneratorConfig,
    funds: &[FundRecord],
    rng: &mut ChaCha8Rng,
) -> Result<CrossHoldings, IngestError> {
    let n = funds.len();
    let target = (config.mean_cross_degree * n as f64).round() as usize;
    let mut out_urn = Urn::new(n, config.attachment_offset);
    let mut in_urn = Urn::new(n, config.attachment_offset);
    let mut seen = HashSet::new();
    let mut edges = Vec::with_capacity(target);
    let mut attempts = 0usize;
    while edges.len() < target {
        attempts += 1;
        if attempts > 1000 * target.max(1) {
            return Err(IngestError::InfeasibleTargets(format!(
                "could not place {target} cross-holdings among {n} funds"
            )));
        }
        let investor = out_urn.draw(rng);
        let mut investee = in_urn.draw(rng);
        if rng.random::<f64>() < config.same_administrator_bias {
            let admin = &funds[investor].administrator;
            for _ in 0..30 {
                if &funds[investee].administrator == admin && investee != investor {
                    break;
                }
                investee = in_urn.draw(rng);
            }
        }
        if investor == investee || !seen.insert((investor, investee)) {
            continue;
        }
        out_urn.add(investor);
        in_urn.add(investee);
        edges.push((investor, investee, rng.random_range(0.001..0.1)));
    }
    let mut column_sums = vec![0.0; n];
    for e in &edges {
        column_sums[e.1] += e.2;
    }
    let micro = |x: f64| ((x * 1e6).floor() / 1e6).max(1e-6);
    for e in edges.iter_mut() {
        let s = column_sums[e.1];
        if s > config.max_column_sum {
            e.2 *= config.max_column_sum / s;
        }
        e.2 = micro(e.2);
    }
    Ok(CrossHoldings::build(n, edges)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::{degree_histogram, DegreeSource};

    fn small(seed: u64) -> GeneratorConfig {
        GeneratorConfig { n_funds: 100, n_assets: 60, seed, ..GeneratorConfig::default() }
    }

    #[test]
    fn mean_cross_degree_near_target() {
        let s = generate_market(&small(3)).unwrap();
        let mean = s.cross_holdings().entries().len() as f64 / 100.0;
        assert!((mean - 4.34).abs() <= 0.15 * 4.34, "mean {mean}");
    }

    #[test]
    fn deterministic_under_seed() {
        assert_eq!(generate_market(&small(9)).unwrap(), generate_market(&small(9)).unwrap());
        assert_ne!(generate_market(&small(9)).unwrap(), generate_market(&small(10)).unwrap());
    }

    #[test]
    fn invariants_hold_for_many_seeds() {
        for seed in 0..100 {
            let s = generate_market(&GeneratorConfig { n_funds: 40, n_assets: 30, seed, ..GeneratorConfig::default() }).unwrap();
            assert!(s.cross_holdings().column_sums().iter().all(|&c| c <= 0.9 + 1e-12));
            assert!((0..s.asset_count()).all(|a| s.holdings().holder_count(a) > 0));
            assert!(s.holdings().positions().iter().all(|p| p.2 > 0.0));
            let values = s.holdings().asset_values();
            let share = values[0] / values.iter().sum::<f64>();
            assert!((share - 0.35).abs() < 1e-3, "seed {seed}: dominant share {share}");
            assert_eq!(s.dominant_asset(), Some(0));
        }
    }

    #[test]
    fn heavy_tailed_in_degree() {
        let s = generate_market(&GeneratorConfig { n_funds: 2000, n_assets: 500, seed: 1, ..GeneratorConfig::default() }).unwrap();
        let h = degree_histogram(DegreeSource::In(&s.cross_graph()));
        assert!(h.max_degree() > 10 * h.median_degree().max(1), "max {} median {}", h.max_degree(), h.median_degree());
        let a = degree_histogram(DegreeSource::BipartiteAsset(&s.asset_graph()));
        assert!(a.max_degree() > 10 * a.median_degree().max(1));
    }

    #[test]
    fn infeasible_targets() {
        let bad = |c: GeneratorConfig| matches!(generate_market(&c), Err(IngestError::InfeasibleTargets(_)));
        assert!(bad(GeneratorConfig { n_funds: 0, ..small(0) }));
        assert!(bad(GeneratorConfig { n_funds: 4, mean_cross_degree: 4.34, ..small(0) }));
        assert!(bad(GeneratorConfig { n_assets: 2, ..small(0) }));
        assert!(bad(GeneratorConfig { mean_asset_degree: 500.0, ..small(0) }));
    }
}
