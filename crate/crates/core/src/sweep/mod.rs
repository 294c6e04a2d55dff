//! Parameter grids over (eta, crit_rate, beta_rate, omega) run in parallel
//! against one shared valuation context.

mod heatmap;

pub use heatmap::{heatmap_export, Heatmap, PARAMETERS, Z_COLUMNS};

use std::io::Write;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::contagion::{Cascade, ContagionError, ScenarioConfig, ValuationContext, SUMMARY_HEADER};
use crate::ingest::MarketSnapshot;

#[derive(Debug, Error)]
pub enum SweepError {
    #[error("no values given for {0}")]
    EmptyAxis(&'static str),
    #[error("unknown parameter {0:?}")]
    UnknownParameter(String),
    #[error("cell ({x}, {y}) has {count} rows; {param} varies")]
    AmbiguousCell { x: f64, y: f64, count: usize, param: String },
    #[error("axis {0} needs at least two values")]
    DegenerateAxis(String),
    #[error("thread pool: {0}")]
    ThreadPool(String),
    #[error(transparent)]
    Contagion(#[from] ContagionError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    /// Shock targets and iteration cap shared by every grid point.
    pub base: ScenarioConfig,
    pub eta_values: Vec<f64>,
    pub crit_values: Vec<f64>,
    pub beta_values: Vec<f64>,
    pub omega_values: Vec<f64>,
    /// Worker threads; 0 uses every core.
    pub jobs: usize,
    pub solver: String,
}

impl SweepSpec {
    /// 1x1x1x1 grid at the base scenario.
    pub fn single(base: ScenarioConfig) -> Self {
        SweepSpec {
            eta_values: vec![base.eta],
            crit_values: vec![base.crit_rate],
            beta_values: vec![base.beta_rate],
            omega_values: vec![base.omega],
            base,
            jobs: 1,
            solver: "auto".into(),
        }
    }

    pub fn validate(&self) -> Result<(), SweepError> {
        for (name, v) in [
            ("eta", &self.eta_values),
            ("crit_rate", &self.crit_values),
            ("beta_rate", &self.beta_values),
            ("omega", &self.omega_values),
        ] {
            if v.is_empty() {
                return Err(SweepError::EmptyAxis(name));
            }
        }
        Ok(())
    }

    pub fn grid_size(&self) -> usize {
        self.eta_values.len() * self.crit_values.len() * self.beta_values.len() * self.omega_values.len()
    }

    /// Grid points in lexicographic (eta, crit, beta, omega) order.
    pub fn points(&self) -> Vec<ScenarioConfig> {
        let mut out = Vec::with_capacity(self.grid_size());
        for &eta in &self.eta_values {
            for &crit_rate in &self.crit_values {
                for &beta_rate in &self.beta_values {
                    for &omega in &self.omega_values {
                        out.push(ScenarioConfig { eta, crit_rate, beta_rate, omega, ..self.base.clone() });
                    }
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub eta: f64,
    pub crit_rate: f64,
    pub beta_rate: f64,
    pub omega: f64,
    pub initial_failures: Option<usize>,
    pub final_failures: Option<usize>,
    pub iterations: Option<usize>,
    pub total_value_lost: Option<f64>,
    pub open_funds: usize,
    pub error: Option<String>,
}

impl SweepRow {
    pub fn parameter(&self, name: &str) -> Option<f64> {
        match name {
            "eta" => Some(self.eta),
            "crit_rate" => Some(self.crit_rate),
            "beta_rate" => Some(self.beta_rate),
            "omega" => Some(self.omega),
            _ => None,
        }
    }

    pub fn column(&self, name: &str) -> Option<Option<f64>> {
        match name {
            "initial_failures" => Some(self.initial_failures.map(|v| v as f64)),
            "final_failures" => Some(self.final_failures.map(|v| v as f64)),
            "iterations" => Some(self.iterations.map(|v| v as f64)),
            "total_value_lost" => Some(self.total_value_lost),
            _ => None,
        }
    }

    pub fn csv_line(&self) -> String {
        let opt = |v: Option<String>| v.unwrap_or_default();
        let error = self.error.as_deref().unwrap_or("");
        let error = if error.contains([',', '"', '\n']) {
            format!("\"{}\"", error.replace('"', "\"\""))
        } else {
            error.to_string()
        };
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.eta,
            self.crit_rate,
            self.beta_rate,
            self.omega,
            opt(self.initial_failures.map(|v| v.to_string())),
            opt(self.final_failures.map(|v| v.to_string())),
            opt(self.iterations.map(|v| v.to_string())),
            opt(self.total_value_lost.map(|v| v.to_string())),
            error
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub spec: SweepSpec,
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    pub fn to_csv(&self) -> String {
        let mut s = String::with_capacity(64 * (self.rows.len() + 1));
        s.push_str(SUMMARY_HEADER);
        s.push('\n');
        for r in &self.rows {
            s.push_str(&r.csv_line());
            s.push('\n');
        }
        s
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        out.write_all(self.to_csv().as_bytes())
    }

    pub fn error_count(&self) -> usize {
        self.rows.iter().filter(|r| r.error.is_some()).count()
    }
}

/// Echo of a sweep for reproducibility.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepManifest {
    pub spec: SweepSpec,
    pub snapshot_date: String,
    pub funds: usize,
    pub assets: usize,
    pub seed: Option<u64>,
    pub grid_points: usize,
    pub error_rows: usize,
    pub elapsed_seconds: f64,
    pub outputs: Vec<String>,
}

fn run_point(snapshot: &MarketSnapshot, ctx: &ValuationContext, config: &ScenarioConfig) -> SweepRow {
    let mut row = SweepRow {
        eta: config.eta,
        crit_rate: config.crit_rate,
        beta_rate: config.beta_rate,
        omega: config.omega,
        initial_failures: None,
        final_failures: None,
        iterations: None,
        total_value_lost: None,
        open_funds: snapshot.open_fund_count(),
        error: None,
    };
    match Cascade::new(snapshot, ctx, config).and_then(|c| c.run_summary()) {
        Ok(r) => {
            row.initial_failures = Some(r.initial_failures);
            row.final_failures = Some(r.final_failures);
            row.iterations = Some(r.iterations);
            row.total_value_lost = Some(r.total_value_lost);
        }
        Err(e) => row.error = Some(e.to_string()),
    }
    row
}

/// Runs every grid point against a prepared context. Rows come back in
/// canonical order whatever the thread count; bad points become error rows.
pub fn run_sweep_with(
    snapshot: &MarketSnapshot,
    ctx: &ValuationContext,
    spec: &SweepSpec,
) -> Result<SweepResult, SweepError> {
    spec.validate()?;
    let points = spec.points();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.jobs)
        .build()
        .map_err(|e| SweepError::ThreadPool(e.to_string()))?;
    let rows = pool.install(|| points.par_iter().map(|p| run_point(snapshot, ctx, p)).collect());
    Ok(SweepResult { spec: spec.clone(), rows })
}

pub fn run_sweep(snapshot: &MarketSnapshot, spec: &SweepSpec) -> Result<SweepResult, SweepError> {
    spec.validate()?;
    let ctx = ValuationContext::new(snapshot, &spec.solver)?;
    run_sweep_with(snapshot, &ctx, spec)
}

/// Sweep plus its manifest, timing included.
pub fn run_sweep_timed(
    snapshot: &MarketSnapshot,
    spec: &SweepSpec,
    seed: Option<u64>,
) -> Result<(SweepResult, SweepManifest), SweepError> {
    let start = Instant::now();
    let result = run_sweep(snapshot, spec)?;
    let manifest = SweepManifest {
        spec: spec.clone(),
        snapshot_date: snapshot.date().to_string(),
        funds: snapshot.fund_count(),
        assets: snapshot.asset_count(),
        seed,
        grid_points: result.rows.len(),
        error_rows: result.error_count(),
        elapsed_seconds: start.elapsed().as_secs_f64(),
        outputs: Vec::new(),
    };
    Ok((result, manifest))
}
