pub mod contagion;
pub mod ingest;
pub mod metrics;
pub mod netcore;
pub mod sweep;
pub mod valuation;
