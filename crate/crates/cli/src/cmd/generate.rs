use clap::Args;
use fundnet_core::ingest::{synthetic_series, write_bundle, GeneratorConfig};
use log::info;
use serde_json::json;

use super::{prepare_out, write_file};
use crate::{CliResult, OutputArgs};

#[derive(Args, Debug)]
pub struct GenerateArgs {
    #[arg(long, default_value_t = 500, value_parser = positive)]
    funds: usize,
    #[arg(long, default_value_t = 200, value_parser = positive)]
    assets: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Label of the first period; `YYYY-MM` labels advance by month.
    #[arg(long, default_value = "2024-01")]
    date: String,
    /// Cross-holdings per fund.
    #[arg(long, default_value_t = 4.34)]
    cross_degree: f64,
    /// Asset positions per fund.
    #[arg(long, default_value_t = 20.23)]
    asset_degree: f64,
    /// Added to every degree in preferential attachment; smaller is more skewed.
    #[arg(long, default_value_t = 1.0)]
    attachment_offset: f64,
    /// Dominant asset's share of total primitive value.
    #[arg(long, default_value_t = 0.35)]
    dominant_share: f64,
    #[arg(long, default_value_t = 0.0)]
    closed_fraction: f64,
    #[arg(long)]
    no_cash: bool,
    /// Number of monthly snapshots.
    #[arg(long, default_value_t = 1, value_parser = positive)]
    periods: usize,
    /// Fraction of cross-holdings rewired between consecutive periods.
    #[arg(long, default_value_t = 0.0)]
    churn: f64,
    #[command(flatten)]
    out: OutputArgs,
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be at least 1".into()),
        Ok(v) => Ok(v),
        Err(e) => Err(e.to_string()),
    }
}

pub fn run(a: GenerateArgs) -> CliResult {
    let config = GeneratorConfig {
        date: a.date.clone(),
        n_funds: a.funds,
        n_assets: a.assets,
        mean_cross_degree: a.cross_degree,
        mean_asset_degree: a.asset_degree,
        attachment_offset: a.attachment_offset,
        seed: a.seed,
        dominant_share: a.dominant_share,
        closed_fraction: a.closed_fraction,
        include_cash: !a.no_cash,
        ..GeneratorConfig::default()
    };
    config.validate()?;
    let series = synthetic_series(&config, a.periods, a.churn)?;
    let dir = prepare_out(&a.out)?;
    let written = write_bundle(&series, &dir)?;
    for d in &written {
        info!("wrote {}", d.display());
    }
    info!("wrote {} snapshot(s) of {} funds and {} assets", series.len(), config.n_funds, config.n_assets);
    let manifest = json!({
        "command": "generate",
        "version": env!("CARGO_PKG_VERSION"),
        "config": config,
        "periods": a.periods,
        "churn": a.churn,
        "snapshots": series.iter().map(|s| s.date()).collect::<Vec<_>>(),
    });
    write_file(&dir.join("manifest.json"), serde_json::to_string_pretty(&manifest).unwrap() + "\n")
}
