
use clap::Args;
use fundnet_core::contagion::ValuationContext;
use fundnet_core::sweep::{heatmap_export, run_sweep_with, Heatmap, SweepManifest, SweepSpec};
use log::info;

use super::{base_scenario, load_input, prepare_out, recorded_seed, write_file};
use crate::error::CliError;
use crate::{CliResult, InputArgs, OutputArgs, ScenarioArgs};

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    scenario: ScenarioArgs,
    /// Comma-separated retained-price fractions.
    #[arg(long, value_delimiter = ',')]
    eta: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    crit_rate: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    beta_rate: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    omega: Vec<f64>,
    /// `x,y,z` matrix export, e.g. `eta,crit_rate,final_failures` (repeatable).
    #[arg(long)]
    heatmap: Vec<String>,
    /// Worker threads (0: all cores).
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    #[command(flatten)]
    out: OutputArgs,
}

fn or_base(values: Vec<f64>, base: f64) -> Vec<f64> {
    if values.is_empty() {
        vec![base]
    } else {
        values
    }
}

pub fn run(a: SweepArgs) -> CliResult {
    let heatmaps: Vec<[String; 3]> = a
        .heatmap
        .iter()
        .map(|h| {
            let parts: Vec<&str> = h.split(',').map(str::trim).collect();
            match parts.as_slice() {
                [x, y, z] => Ok([x.to_string(), y.to_string(), z.to_string()]),
                _ => Err(CliError::Usage(format!("--heatmap expects x,y,z, got {h:?}"))),
            }
        })
        .collect::<CliResult<_>>()?;
    let snapshot = load_input(&a.input)?;
    let base = base_scenario(&a.scenario);
    let spec = SweepSpec {
        eta_values: or_base(a.eta, base.eta),
        crit_values: or_base(a.crit_rate, base.crit_rate),
        beta_values: or_base(a.beta_rate, base.beta_rate),
        omega_values: or_base(a.omega, base.omega),
        base,
        jobs: a.jobs,
        solver: a.scenario.solver.clone(),
    };
    spec.validate()?;
    let start = std::time::Instant::now();
    let ctx = ValuationContext::new(&snapshot, &spec.solver)?;
    info!("sweeping {} grid points", spec.grid_size());
    let result = run_sweep_with(&snapshot, &ctx, &spec)?;
    let elapsed = start.elapsed().as_secs_f64();
    let maps: Vec<Heatmap> = heatmaps
        .iter()
        .map(|[x, y, z]| heatmap_export(&result, x, y, z))
        .collect::<Result<_, _>>()?;
    if result.error_count() > 0 {
        log::warn!("{} grid points failed; see the error column", result.error_count());
    }

    let dir = prepare_out(&a.out)?;
    let mut outputs = vec!["sweep.csv".to_string()];
    write_file(&dir.join("sweep.csv"), result.to_csv())?;
    for h in &maps {
        write_file(&dir.join(h.file_name()), h.to_csv())?;
        outputs.push(h.file_name());
    }
    outputs.push("manifest.json".into());
    let manifest = SweepManifest {
        spec,
        snapshot_date: snapshot.date().to_string(),
        funds: snapshot.fund_count(),
        assets: snapshot.asset_count(),
        seed: recorded_seed(&a.input.input),
        grid_points: result.rows.len(),
        error_rows: result.error_count(),
        elapsed_seconds: elapsed,
        outputs,
    };
    let text = serde_json::to_string_pretty(&manifest).map_err(|e| CliError::Io(e.to_string()))?;
    write_file(&dir.join("manifest.json"), text + "\n")?;
    Ok(())
}
