use clap::Args;
use fundnet_core::contagion::{Cascade, ValuationContext};
use log::info;

use super::{base_scenario, load_input, prepare_out, write_file};
use crate::{CliResult, InputArgs, OutputArgs, ScenarioArgs};

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    scenario: ScenarioArgs,
    /// Fraction of price the shocked assets keep.
    #[arg(long)]
    eta: Option<f64>,
    /// Failure threshold as a fraction of pre-shock outside value.
    #[arg(long)]
    crit_rate: Option<f64>,
    /// Failure cost as a fraction of pre-shock outside value.
    #[arg(long)]
    beta_rate: Option<f64>,
    /// Fire-sale pressure on the assets of failed funds.
    #[arg(long)]
    omega: Option<f64>,
    #[command(flatten)]
    out: OutputArgs,
}

pub fn run(a: SimulateArgs) -> CliResult {
    let snapshot = load_input(&a.input)?;
    let mut cfg = base_scenario(&a.scenario);
    cfg.eta = a.eta.unwrap_or(cfg.eta);
    cfg.crit_rate = a.crit_rate.unwrap_or(cfg.crit_rate);
    cfg.beta_rate = a.beta_rate.unwrap_or(cfg.beta_rate);
    cfg.omega = a.omega.unwrap_or(cfg.omega);
    cfg.validate()?;
    let ctx = ValuationContext::new(&snapshot, &a.scenario.solver)?;
    let cascade = Cascade::new(&snapshot, &ctx, &cfg)?;
    let result = cascade.run()?;
    info!(
        "{} of {} open funds failed ({} from the shock) after {} rounds",
        result.final_failures, result.open_funds, result.initial_failures, result.iterations
    );
    let dir = prepare_out(&a.out)?;
    write_file(&dir.join("cascade.json"), result.to_json() + "\n")?;
    write_file(&dir.join("summary.csv"), result.summary_csv())?;
    print!("{}", result.summary_csv());
    Ok(())
}
