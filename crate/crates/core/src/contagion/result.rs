use serde::{Deserialize, Serialize};

pub const SUMMARY_HEADER: &str =
    "eta,crit_rate,beta_rate,omega,initial_failures,final_failures,iterations,total_value_lost,error";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TerminationReason {
    Converged,
    MaxIterations,
}

/// State after one round. Step 0 is the post-shock state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub t: usize,
    pub failed: Vec<usize>,
    pub newly_failed: Vec<usize>,
    pub prices: Vec<f64>,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CascadeResult {
    pub shocked_assets: Vec<String>,
    pub eta: f64,
    pub crit_rate: f64,
    pub beta_rate: f64,
    pub omega: f64,
    pub open_funds: usize,
    pub initial_failures: usize,
    pub final_failures: usize,
    pub iterations: usize,
    pub total_value_lost: f64,
    pub termination_reason: TerminationReason,
    pub failed_funds: Vec<String>,
    /// Empty when the run was asked for a summary only.
    pub trajectory: Vec<StepRecord>,
}

impl CascadeResult {
    pub fn failure_fraction(&self) -> f64 {
        if self.open_funds == 0 {
            0.0
        } else {
            self.final_failures as f64 / self.open_funds as f64
        }
    }

    /// One CSV row matching [`SUMMARY_HEADER`].
    pub fn summary_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},",
            self.eta,
            self.crit_rate,
            self.beta_rate,
            self.omega,
            self.initial_failures,
            self.final_failures,
            self.iterations,
            self.total_value_lost
        )
    }

    pub fn summary_csv(&self) -> String {
        format!("{SUMMARY_HEADER}\n{}\n", self.summary_row())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("cascade result serializes")
    }
}
