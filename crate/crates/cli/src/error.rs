use std::fmt;
use std::path::Path;

use fundnet_core::contagion::ContagionError;
use fundnet_core::ingest::IngestError;
use fundnet_core::metrics::MetricsError;
use fundnet_core::sweep::SweepError;

/// Failure with its process exit code: 2 usage, 3 I/O, 4 validation.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
    Validation(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Io(_) => 3,
            CliError::Validation(_) => 4,
        }
    }

    pub fn io(path: &Path, e: impl fmt::Display) -> Self {
        CliError::Io(format!("{}: {e}", path.display()))
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
            CliError::Validation(m) => write!(f, "validation error: {m}"),
        }
    }
}

impl From<IngestError> for CliError {
    fn from(e: IngestError) -> Self {
        match e {
            IngestError::Io { .. } => CliError::Io(e.to_string()),
            IngestError::InfeasibleTargets(_) => CliError::Usage(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<ContagionError> for CliError {
    fn from(e: ContagionError) -> Self {
        match e {
            ContagionError::InvalidParameter { .. }
            | ContagionError::UnknownAsset(_)
            | ContagionError::ZeroIterations
            | ContagionError::NoShockTarget => CliError::Usage(e.to_string()),
            ContagionError::Valuation(fundnet_core::valuation::ValuationError::UnknownSolver(_)) => {
                CliError::Usage(e.to_string())
            }
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<SweepError> for CliError {
    fn from(e: SweepError) -> Self {
        match e {
            SweepError::Contagion(c) => c.into(),
            SweepError::Io(_) | SweepError::ThreadPool(_) => CliError::Io(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<MetricsError> for CliError {
    fn from(e: MetricsError) -> Self {
        match e {
            MetricsError::UnknownMeasure(_) => CliError::Usage(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}
