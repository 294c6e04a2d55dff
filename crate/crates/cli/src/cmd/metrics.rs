use std::path::PathBuf;

use clap::Args;
use fundnet_core::ingest::{aligned_graph_snapshots, check_series, MarketSnapshot, CASH_CLASS};
use fundnet_core::metrics::{
    assortativity, centrality_report, degree_histogram, jaccard_stability, CentralityRegistry,
    DegreeHistogram, DegreeSource,
};
use log::{info, warn};
use serde_json::{json, Map, Value};

use super::{create_file, load_all, prepare_out, write_file};
use crate::error::CliError;
use crate::{CliResult, OutputArgs};

#[derive(Args, Debug)]
pub struct MetricsArgs {
    /// Snapshot directory or bundle root (default: the last period of --series).
    input: Option<PathBuf>,
    /// Date to use from a multi-date bundle (default: the last one).
    #[arg(long)]
    date: Option<String>,
    /// Bundles in time order; adds Jaccard stability between consecutive periods.
    #[arg(long, num_args = 1..)]
    series: Vec<PathBuf>,
    /// Comma-separated measures (default: all).
    #[arg(long, value_delimiter = ',')]
    centrality: Vec<String>,
    /// Fund label columns for assortativity: administrator, class, open_ended.
    #[arg(long = "assortativity-by", value_delimiter = ',', default_values = ["administrator", "class"])]
    assortativity_by: Vec<String>,
    #[command(flatten)]
    out: OutputArgs,
}

fn fund_labels(s: &MarketSnapshot, column: &str) -> CliResult<Vec<Option<String>>> {
    let pick = |f: &fundnet_core::ingest::FundRecord| match column {
        "administrator" => Some(f.administrator.clone()),
        "class" => Some(f.class.clone()),
        "open_ended" => Some(f.open_ended.to_string()),
        _ => None,
    };
    let labels: Vec<Option<String>> = s.funds().iter().map(pick).collect();
    if labels.first().is_some_and(Option::is_none) {
        return Err(CliError::Usage(format!(
            "unknown label column {column:?} (expected administrator, class or open_ended)"
        )));
    }
    Ok(labels)
}

fn histogram_json(h: &DegreeHistogram) -> Value {
    json!({ "nodes": h.total(), "max": h.max_degree(), "median": h.median_degree() })
}

pub fn run(a: MetricsArgs) -> CliResult {
    let mut series = Vec::new();
    for p in &a.series {
        series.extend(load_all(p)?);
    }
    check_series(&series)?;
    let snapshot = match &a.input {
        Some(path) => {
            let mut all = load_all(path)?;
            match &a.date {
                Some(d) => {
                    let k = all.iter().position(|s| s.date() == d).ok_or_else(|| {
                        CliError::Usage(format!("no snapshot dated {d:?} in {}", path.display()))
                    })?;
                    all.swap_remove(k)
                }
                None => all.pop().expect("bundle has a snapshot"),
            }
        }
        None => series
            .last()
            .cloned()
            .ok_or_else(|| CliError::Usage("give a snapshot path or --series".into()))?,
    };
    let registry = CentralityRegistry::default();
    let selection: Vec<&str> = a.centrality.iter().map(String::as_str).collect();
    registry.select(&selection)?;
    let label_columns: Vec<(String, Vec<Option<String>>)> = a
        .assortativity_by
        .iter()
        .map(|c| fund_labels(&snapshot, c).map(|l| (c.clone(), l)))
        .collect::<CliResult<_>>()?;

    let dir = prepare_out(&a.out)?;
    let cross = snapshot.cross_graph();
    let bip = snapshot.asset_graph();
    let fund_ids: Vec<String> = snapshot.funds().iter().map(|f| f.id.clone()).collect();
    let all_ids: Vec<String> =
        fund_ids.iter().cloned().chain(snapshot.assets().iter().map(|x| x.id.clone())).collect();

    info!("centralities on {} funds", fund_ids.len());
    let report = centrality_report(&cross, &registry, &selection)?;
    let path = dir.join("centrality.csv");
    report.write_csv(&fund_ids, create_file(&path)?).map_err(|e| CliError::io(&path, e))?;
    info!("centralities on the {}-node fund-asset graph", all_ids.len());
    let bip_undirected = bip.to_undirected();
    let bip_report = centrality_report(&bip_undirected, &registry, &selection)?;
    let path = dir.join("centrality_bipartite.csv");
    bip_report.write_csv(&all_ids, create_file(&path)?).map_err(|e| CliError::io(&path, e))?;

    let histograms = [
        ("histogram.csv", degree_histogram(DegreeSource::In(&cross))),
        ("histogram_out.csv", degree_histogram(DegreeSource::Out(&cross))),
        ("histogram_fund.csv", degree_histogram(DegreeSource::BipartiteFund(&bip))),
        ("histogram_asset.csv", degree_histogram(DegreeSource::BipartiteAsset(&bip))),
    ];
    for (name, h) in &histograms {
        let path = dir.join(name);
        h.write_csv(create_file(&path)?).map_err(|e| CliError::io(&path, e))?;
    }

    let mut assort = Map::new();
    let mut assort_notes = Map::new();
    for (column, labels) in &label_columns {
        match assortativity(&cross, labels) {
            Ok(r) => {
                assort.insert(column.clone(), json!(r));
            }
            Err(e) => {
                warn!("assortativity by {column}: {e}");
                assort.insert(column.clone(), Value::Null);
                assort_notes.insert(column.clone(), json!(e.to_string()));
            }
        }
    }

    let asset_degrees = bip.asset_degrees();
    let top_asset = (0..snapshot.asset_count())
        .filter(|&k| snapshot.assets()[k].class != CASH_CLASS)
        .max_by_key(|&k| (asset_degrees[k], std::cmp::Reverse(k)));
    let maxima = |r: &fundnet_core::metrics::CentralityReport| {
        let mut m = Map::new();
        for (name, values) in &r.measures {
            m.insert(
                name.clone(),
                values.as_ref().map_or(Value::Null, |v| json!(v.iter().copied().fold(0.0, f64::max))),
            );
        }
        Value::Object(m)
    };
    let mut summary = json!({
        "date": snapshot.date(),
        "funds": snapshot.fund_count(),
        "open_funds": snapshot.open_fund_count(),
        "assets": snapshot.asset_count(),
        "cross_holdings": {
            "edges": cross.m(),
            "density": cross.density().ok(),
            "mean_degree": cross.m() as f64 / snapshot.fund_count() as f64,
            "in_degree": histogram_json(&histograms[0].1),
            "out_degree": histogram_json(&histograms[1].1),
            "max_normalized_degree": report.max_normalized_degree(),
            "centrality_max": maxima(&report),
            "notes": report.notes,
        },
        "fund_asset": {
            "edges": bip.m(),
            "density": bip.density().ok(),
            "mean_fund_degree": bip.m() as f64 / snapshot.fund_count() as f64,
            "fund_degree": histogram_json(&histograms[2].1),
            "asset_degree": histogram_json(&histograms[3].1),
            "top_non_cash_asset": top_asset.map(|k| json!({
                "id": snapshot.assets()[k].id,
                "degree": asset_degrees[k],
            })),
            "centrality_max": maxima(&bip_report),
            "notes": bip_report.notes,
        },
        "assortativity": assort,
    });
    if !assort_notes.is_empty() {
        summary["assortativity_notes"] = Value::Object(assort_notes);
    }

    if !series.is_empty() {
        let (_, graphs) = aligned_graph_snapshots(&series);
        let stability = jaccard_stability(&graphs)?;
        let path = dir.join("stability.csv");
        stability.write_csv(create_file(&path)?).map_err(|e| CliError::io(&path, e))?;
        summary["stability"] = json!({
            "periods": series.len(),
            "mean_node_jaccard": stability.mean_node_jaccard(),
            "mean_edge_jaccard": stability.mean_edge_jaccard(),
        });
    }
    write_file(&dir.join("summary.json"), serde_json::to_string_pretty(&summary).unwrap() + "\n")
}
