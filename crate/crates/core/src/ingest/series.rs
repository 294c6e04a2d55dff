use std::collections::{BTreeSet, HashMap, HashSet};
use std::path::Path;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{generate_market, load_bundle, GeneratorConfig, IngestError, MarketSnapshot, SymbolTable};
use crate::metrics::GraphSnapshot;
use crate::valuation::CrossHoldings;

fn next_month(date: &str, step: usize) -> String {
    let parsed = date
        .split_once('-')
        .and_then(|(y, m)| Some((y.parse::<i64>().ok()?, m.parse::<i64>().ok()?)))
        .filter(|&(_, m)| (1..=12).contains(&m));
    match parsed {
        Some((y, m)) => {
            let k = y * 12 + (m - 1) + step as i64;
            format!("{:04}-{:02}", k / 12, k % 12 + 1)
        }
        None => format!("{date}-p{step}"),
    }
}

/// `periods` monthly snapshots. Between consecutive periods a fraction
/// `churn` of cross-holdings edges moves to a new investor, keeping the
/// investee and the fraction, so expected edge Jaccard is `(1-c)/(1+c)`.
pub fn synthetic_series(
    config: &GeneratorConfig,
    periods: usize,
    churn: f64,
) -> Result<Vec<MarketSnapshot>, IngestError> {
    if periods == 0 {
        return Err(IngestError::InfeasibleTargets("periods must be positive".into()));
    }
    if !(0.0..=1.0).contains(&churn) {
        return Err(IngestError::InfeasibleTargets(format!("churn {churn} outside [0, 1]")));
    }
    let first = generate_market(config)?;
    let n = first.fund_count();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ 0x5e71e5);
    let mut out = vec![first];
    for step in 1..periods {
        let prev = &out[step - 1];
        let mut edges: Vec<(usize, usize, f64)> = prev.cross_holdings().entries().to_vec();
        let mut present: HashSet<(usize, usize)> = edges.iter().map(|e| (e.0, e.1)).collect();
        let k = (churn * edges.len() as f64).round() as usize;
        let mut moved = sample(&mut rng, edges.len(), k).into_vec();
        moved.sort_unstable();
        for &idx in &moved {
            let (investor, investee, _) = edges[idx];
            let mut tries = 0;
            loop {
                let candidate = rng.random_range(0..n);
                if candidate != investee && !present.contains(&(candidate, investee)) {
                    present.remove(&(investor, investee));
                    present.insert((candidate, investee));
                    edges[idx].0 = candidate;
                    break;
                }
                tries += 1;
                if tries > 10 * n {
                    return Err(IngestError::InfeasibleTargets(format!(
                        "fund {investee} has no free investor slot for rewiring"
                    )));
                }
            }
        }
        let cross = CrossHoldings::build(n, edges)?;
        out.push(prev.with_cross_holdings(cross)?.with_date(next_month(out[0].date(), step)));
    }
    Ok(out)
}

/// Loads each path as a snapshot directory or a bundle root and checks the
/// result for consistent identifiers.
pub fn load_series<P: AsRef<Path>>(paths: &[P]) -> Result<Vec<MarketSnapshot>, IngestError> {
    let mut out = Vec::new();
    for p in paths {
        out.extend(load_bundle(p.as_ref())?.into_iter().map(|l| l.snapshot));
    }
    check_series(&out)?;
    Ok(out)
}

/// No identifier may be a fund in one period and an asset in another.
pub fn check_series(snapshots: &[MarketSnapshot]) -> Result<(), IngestError> {
    let mut role: HashMap<&str, bool> = HashMap::new();
    for s in snapshots {
        let tagged = s
            .funds()
            .iter()
            .map(|f| (f.id.as_str(), true))
            .chain(s.assets().iter().map(|a| (a.id.as_str(), false)));
        for (id, is_fund) in tagged {
            if let Some(&prev) = role.get(id) {
                if prev != is_fund {
                    return Err(IngestError::InconsistentSymbols(format!(
                        "{id:?} is a {} in {} but a {} elsewhere",
                        if is_fund { "fund" } else { "asset" },
                        s.date(),
                        if prev { "fund" } else { "asset" },
                    )));
                }
            } else {
                role.insert(id, is_fund);
            }
        }
    }
    Ok(())
}

/// Cross-holdings graphs over a shared fund index, for stability metrics.
pub fn aligned_graph_snapshots(snapshots: &[MarketSnapshot]) -> (SymbolTable, Vec<GraphSnapshot>) {
    let mut table = SymbolTable::new();
    let graphs = snapshots
        .iter()
        .map(|s| {
            let global: Vec<usize> = s.funds().iter().map(|f| table.intern(&f.id)).collect();
            GraphSnapshot {
                label: s.date().to_string(),
                nodes: global.iter().copied().collect(),
                edges: s
                    .cross_holdings()
                    .entries()
                    .iter()
                    .map(|&(i, j, _)| (global[i], global[j]))
                    .collect::<BTreeSet<_>>(),
            }
        })
        .collect();
    (table, graphs)
}
