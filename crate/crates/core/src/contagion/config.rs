use serde::{Deserialize, Serialize};

use super::ContagionError;

/// One shock scenario. `eta` is the fraction of price the shocked assets
/// keep; `beta_rate` and `crit_rate` scale each fund's pre-shock outside value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    /// Asset ids to shock; empty means the dominant non-cash asset.
    #[serde(default)]
    pub shocked_assets: Vec<String>,
    pub eta: f64,
    pub crit_rate: f64,
    pub beta_rate: f64,
    pub omega: f64,
    /// Defaults to `n + 2` rounds.
    #[serde(default)]
    pub max_iterations: Option<usize>,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self::text_preset()
    }
}

impl ScenarioConfig {
    /// 30% retained price, 70% critical value rate.
    pub fn text_preset() -> Self {
        ScenarioConfig {
            shocked_assets: Vec::new(),
            eta: 0.3,
            crit_rate: 0.7,
            beta_rate: 0.1,
            omega: 0.3,
            max_iterations: None,
        }
    }

    /// 15% retained price, 85% critical value rate.
    pub fn figure_preset() -> Self {
        ScenarioConfig { eta: 0.15, crit_rate: 0.85, ..Self::text_preset() }
    }

    pub fn preset(name: &str) -> Option<Self> {
        match name {
            "text" => Some(Self::text_preset()),
            "figure" => Some(Self::figure_preset()),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<(), ContagionError> {
        let check = |name, value: f64, ok: bool, range| {
            if ok {
                Ok(())
            } else {
                Err(ContagionError::InvalidParameter { name, value, range })
            }
        };
        check("eta", self.eta, (0.0..1.0).contains(&self.eta), "[0, 1)")?;
        check("crit_rate", self.crit_rate, self.crit_rate > 0.0 && self.crit_rate < 1.0, "(0, 1)")?;
        check("beta_rate", self.beta_rate, (0.0..=1.0).contains(&self.beta_rate), "[0, 1]")?;
        check("omega", self.omega, (0.0..=1.0).contains(&self.omega), "[0, 1]")?;
        if self.max_iterations == Some(0) {
            return Err(ContagionError::ZeroIterations);
        }
        Ok(())
    }
}
