pub mod generate;
pub mod metrics;
pub mod simulate;
pub mod sweep;

use std::fs;
use std::path::{Path, PathBuf};

use fundnet_core::contagion::ScenarioConfig;
use fundnet_core::ingest::{load_bundle, MarketSnapshot};
use log::{info, warn};

use crate::error::CliError;
use crate::{CliResult, InputArgs, OutputArgs, ScenarioArgs};

/// Creates the output directory; a non-empty one needs `--force`.
pub fn prepare_out(out: &OutputArgs) -> CliResult<PathBuf> {
    let dir = &out.out;
    if dir.exists() {
        let occupied = fs::read_dir(dir).map_err(|e| CliError::io(dir, e))?.next().is_some();
        if occupied && !out.force {
            return Err(CliError::Io(format!(
                "refusing to overwrite non-empty {} (pass --force)",
                dir.display()
            )));
        }
    }
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    Ok(dir.clone())
}

pub fn write_file(path: &Path, contents: impl AsRef<[u8]>) -> CliResult {
    fs::write(path, contents).map_err(|e| CliError::io(path, e))?;
    info!("wrote {}", path.display());
    Ok(())
}

pub fn create_file(path: &Path) -> CliResult<fs::File> {
    let f = fs::File::create(path).map_err(|e| CliError::io(path, e))?;
    info!("wrote {}", path.display());
    Ok(f)
}

pub fn load_all(path: &Path) -> CliResult<Vec<MarketSnapshot>> {
    let loaded = load_bundle(path)?;
    Ok(loaded
        .into_iter()
        .map(|l| {
            if !l.dropped_assets.is_empty() {
                warn!(
                    "{}: dropped {} assets without holders",
                    l.snapshot.date(),
                    l.dropped_assets.len()
                );
            }
            l.snapshot
        })
        .collect())
}

pub fn load_input(input: &InputArgs) -> CliResult<MarketSnapshot> {
    let mut all = load_all(&input.input)?;
    let snapshot = match &input.date {
        Some(d) => {
            let k = all
                .iter()
                .position(|s| s.date() == d)
                .ok_or_else(|| CliError::Usage(format!("no snapshot dated {d:?} in {}", input.input.display())))?;
            all.swap_remove(k)
        }
        None => all.pop().expect("load_bundle returns at least one snapshot"),
    };
    info!(
        "loaded {} ({} funds, {} assets, {} cross-holdings)",
        snapshot.date(),
        snapshot.fund_count(),
        snapshot.asset_count(),
        snapshot.cross_holdings().entries().len()
    );
    Ok(snapshot)
}

pub fn base_scenario(args: &ScenarioArgs) -> ScenarioConfig {
    let mut cfg = ScenarioConfig::preset(&args.preset).unwrap_or_default();
    cfg.shocked_assets = args.shock_assets.clone();
    cfg.max_iterations = args.max_iterations;
    cfg
}

/// Seed recorded by `generate` next to the bundle, if any.
pub fn recorded_seed(input: &Path) -> Option<u64> {
    [input.join("manifest.json"), input.join("..").join("manifest.json")]
        .iter()
        .find_map(|p| fs::read_to_string(p).ok())
        .and_then(|text| serde_json::from_str::<serde_json::Value>(&text).ok())
        .and_then(|v| v["config"]["seed"].as_u64())
}
