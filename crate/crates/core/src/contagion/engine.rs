use std::sync::Arc;

use super::{CascadeResult, ContagionError, ScenarioConfig, StepRecord, TerminationReason};
use crate::ingest::MarketSnapshot;
use crate::valuation::{dependency_matrix_with, market_values, DependencyMatrix, SolverRegistry};

/// Dependency matrix and pre-shock outside values of one snapshot, shared
/// by every scenario run against it.
#[derive(Debug, Clone)]
pub struct ValuationContext {
    dependency: Arc<DependencyMatrix>,
    baseline: Vec<f64>,
}

impl ValuationContext {
    pub fn new(snapshot: &MarketSnapshot, solver: &str) -> Result<Self, ContagionError> {
        let strategy = SolverRegistry::default().get(solver)?;
        let a = dependency_matrix_with(snapshot.cross_holdings(), strategy.as_ref())?;
        Self::from_dependency(snapshot, Arc::new(a))
    }

    pub fn from_dependency(
        snapshot: &MarketSnapshot,
        dependency: Arc<DependencyMatrix>,
    ) -> Result<Self, ContagionError> {
        let baseline = market_values(&dependency, snapshot.holdings())?.outside;
        Ok(ValuationContext { dependency, baseline })
    }

    pub fn dependency(&self) -> &DependencyMatrix {
        &self.dependency
    }

    /// Outside values before any shock.
    pub fn baseline(&self) -> &[f64] {
        &self.baseline
    }
}

/// Price multiplier for one asset when holdings `failing` are dumped:
/// `(total - omega * sum(failing)) / total`, floored at 0.
pub fn fire_sale_factor(
    asset: usize,
    total: f64,
    failing: &[f64],
    omega: f64,
) -> Result<f64, ContagionError> {
    if !(total > 0.0) {
        return Err(ContagionError::AssetUnheld(asset));
    }
    let sold: f64 = failing.iter().sum();
    Ok(((total - omega * sold) / total).max(0.0))
}

/// Multiplies each fund's fire-sale factors onto `multipliers`, one fund at
/// a time in ascending index order whatever the order of `funds`.
pub fn apply_fire_sales(
    snapshot: &MarketSnapshot,
    multipliers: &mut [f64],
    funds: &[usize],
    omega: f64,
) -> Result<(), ContagionError> {
    let totals = snapshot.holdings().asset_values();
    let mut order = funds.to_vec();
    order.sort_unstable();
    order.dedup();
    for f in order {
        for &(_, a, w) in snapshot.holdings().fund_positions(f) {
            multipliers[a] *= fire_sale_factor(a, totals[a], &[w], omega)?;
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct CascadeState {
    pub t: usize,
    pub failed: Vec<bool>,
    pub newly_failed: Vec<usize>,
    pub prices: Vec<f64>,
    /// `b̃`: failure cost of every fund that had failed before this round.
    pub failure_costs: Vec<f64>,
    pub values: Vec<f64>,
    /// Funds whose holdings have been fire-sold.
    pub sold_off: Vec<bool>,
}

impl CascadeState {
    pub fn failed_indices(&self) -> Vec<usize> {
        indices(&self.failed)
    }

    pub fn failure_count(&self) -> usize {
        self.failed.iter().filter(|&&f| f).count()
    }

    fn record(&self) -> StepRecord {
        StepRecord {
            t: self.t,
            failed: self.failed_indices(),
            newly_failed: self.newly_failed.clone(),
            prices: self.prices.clone(),
            values: self.values.clone(),
        }
    }
}

fn indices(mask: &[bool]) -> Vec<usize> {
    mask.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i).collect()
}

/// One scenario prepared against a snapshot and its valuation context.
pub struct Cascade<'a> {
    snapshot: &'a MarketSnapshot,
    ctx: &'a ValuationContext,
    config: ScenarioConfig,
    shocked: Vec<usize>,
    shock: Vec<f64>,
    v_crit: Vec<f64>,
    beta: Vec<f64>,
    open: Vec<bool>,
}

impl<'a> Cascade<'a> {
    pub fn new(
        snapshot: &'a MarketSnapshot,
        ctx: &'a ValuationContext,
        config: &ScenarioConfig,
    ) -> Result<Self, ContagionError> {
        config.validate()?;
        let n = snapshot.fund_count();
        if ctx.baseline.len() != n {
            return Err(ContagionError::ContextMismatch { expected: ctx.baseline.len(), got: n });
        }
        let shocked = resolve_targets(snapshot, &config.shocked_assets)?;
        let mut shock = vec![1.0; snapshot.asset_count()];
        for &a in &shocked {
            shock[a] = config.eta;
        }
        let v_crit: Vec<f64> = ctx.baseline.iter().map(|v| config.crit_rate * v).collect();
        let beta = ctx.baseline.iter().map(|v| config.beta_rate * v).collect();
        let open = snapshot.open_mask();
        for i in 0..n {
            if open[i] && ctx.baseline[i] - v_crit[i] < 0.0 {
                return Err(ContagionError::PreShockFailure { fund: snapshot.funds()[i].id.clone() });
            }
        }
        Ok(Cascade { snapshot, ctx, config: config.clone(), shocked, shock, v_crit, beta, open })
    }

    pub fn shocked_assets(&self) -> &[usize] {
        &self.shocked
    }

    pub fn critical_values(&self) -> &[f64] {
        &self.v_crit
    }

    /// Prices, failure costs and outside values given the set of funds
    /// that failed before the round.
    fn evaluate(&self, prior: &[bool]) -> Result<(Vec<f64>, Vec<f64>, Vec<f64>), ContagionError> {
        let holdings = self.snapshot.holdings();
        let mut multipliers = self.shock.clone();
        apply_fire_sales(self.snapshot, &mut multipliers, &indices(prior), self.config.omega)?;
        let costs: Vec<f64> =
            prior.iter().zip(&self.beta).map(|(&f, b)| if f { *b } else { 0.0 }).collect();
        let primitive: Vec<f64> = (0..self.snapshot.fund_count())
            .map(|i| {
                let x: f64 = holdings.fund_positions(i).iter().map(|&(_, a, w)| w * multipliers[a]).sum();
                x - costs[i]
            })
            .collect();
        let values = self.ctx.dependency.apply(&primitive)?;
        let prices = holdings.prices().iter().zip(&multipliers).map(|(p, m)| p * m).collect();
        Ok((prices, costs, values))
    }

    fn next_state(&self, t: usize, prior: &[bool]) -> Result<CascadeState, ContagionError> {
        let (prices, failure_costs, values) = self.evaluate(prior)?;
        let mut failed = prior.to_vec();
        let mut newly_failed = Vec::new();
        for i in 0..failed.len() {
            if self.open[i] && !failed[i] && values[i] - self.v_crit[i] < 0.0 {
                failed[i] = true;
                newly_failed.push(i);
            }
        }
        Ok(CascadeState { t, failed, newly_failed, prices, failure_costs, values, sold_off: prior.to_vec() })
    }

    /// Shocked prices and the initial failure set.
    pub fn apply_shock(&self) -> Result<CascadeState, ContagionError> {
        self.next_state(0, &vec![false; self.snapshot.fund_count()])
    }

    /// Fire sales and failure costs for everything in `state.failed`, then
    /// the threshold test. Failure is absorbing.
    pub fn step(&self, state: &CascadeState) -> Result<CascadeState, ContagionError> {
        self.next_state(state.t + 1, &state.failed)
    }

    /// Rebuilds the last state of a recorded trajectory from its failure sets alone.
    pub fn replay(&self, trajectory: &[StepRecord]) -> Result<CascadeState, ContagionError> {
        let n = self.snapshot.fund_count();
        let mut state = self.apply_shock()?;
        for pair in trajectory.windows(2) {
            let mut prior = vec![false; n];
            for &i in &pair[0].failed {
                prior[i] = true;
            }
            state = self.next_state(pair[1].t, &prior)?;
        }
        Ok(state)
    }

    pub fn run(&self) -> Result<CascadeResult, ContagionError> {
        self.execute(true)
    }

    /// Same as [`run`](Self::run) without the per-round trajectory.
    pub fn run_summary(&self) -> Result<CascadeResult, ContagionError> {
        self.execute(false)
    }

    fn execute(&self, record: bool) -> Result<CascadeResult, ContagionError> {
        let n = self.snapshot.fund_count();
        let max_iterations = self.config.max_iterations.unwrap_or(n + 2);
        let mut state = self.apply_shock()?;
        let initial_failures = state.failure_count();
        let mut trajectory = Vec::new();
        if record {
            trajectory.push(state.record());
        }
        let mut iterations = 0;
        let reason = loop {
            if iterations >= max_iterations {
                break TerminationReason::MaxIterations;
            }
            iterations += 1;
            state = self.step(&state)?;
            if record {
                trajectory.push(state.record());
            }
            if state.newly_failed.is_empty() {
                break TerminationReason::Converged;
            }
        };
        let before: f64 = self.ctx.baseline.iter().sum();
        let after: f64 = state.values.iter().sum();
        let ids = self.snapshot.funds();
        Ok(CascadeResult {
            shocked_assets: self.shocked.iter().map(|&a| self.snapshot.assets()[a].id.clone()).collect(),
            eta: self.config.eta,
            crit_rate: self.config.crit_rate,
            beta_rate: self.config.beta_rate,
            omega: self.config.omega,
            open_funds: self.open.iter().filter(|&&o| o).count(),
            initial_failures,
            final_failures: state.failure_count(),
            iterations,
            total_value_lost: before - after,
            termination_reason: reason,
            failed_funds: state.failed_indices().into_iter().map(|i| ids[i].id.clone()).collect(),
            trajectory,
        })
    }
}

fn resolve_targets(snapshot: &MarketSnapshot, ids: &[String]) -> Result<Vec<usize>, ContagionError> {
    if ids.is_empty() {
        return snapshot.dominant_asset().map(|a| vec![a]).ok_or(ContagionError::NoShockTarget);
    }
    let mut out = Vec::with_capacity(ids.len());
    for id in ids {
        let a = snapshot.asset_symbols().get(id).ok_or_else(|| ContagionError::UnknownAsset(id.clone()))?;
        out.push(a);
    }
    out.sort_unstable();
    out.dedup();
    debug_assert!(out.iter().all(|&a| a < snapshot.asset_count()));
    Ok(out)
}

pub fn run_cascade_with(
    snapshot: &MarketSnapshot,
    ctx: &ValuationContext,
    config: &ScenarioConfig,
) -> Result<CascadeResult, ContagionError> {
    Cascade::new(snapshot, ctx, config)?.run()
}

/// Single run with the `auto` solver.
pub fn run_cascade(snapshot: &MarketSnapshot, config: &ScenarioConfig) -> Result<CascadeResult, ContagionError> {
    let ctx = ValuationContext::new(snapshot, "auto")?;
    run_cascade_with(snapshot, &ctx, config)
}
