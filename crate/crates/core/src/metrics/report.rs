use std::io::{self, Write};

use serde::Serialize;

use super::{CentralityRegistry, MetricsError};
use crate::netcore::Topology;

/// Columns written to `centrality.csv`, in order.
pub const CENTRALITY_COLUMNS: [&str; 5] =
    ["degree_in", "degree_out", "closeness", "betweenness", "eigenvector"];

/// Per-node centralities. A measure that was not selected, or that failed
/// (e.g. eigenvector iteration on an acyclic graph), is `None` and its reason
/// is kept in `notes`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CentralityReport {
    pub node_count: usize,
    pub measures: Vec<(String, Option<Vec<f64>>)>,
    pub notes: Vec<String>,
}

impl CentralityReport {
    pub fn values(&self, name: &str) -> Option<&[f64]> {
        self.measures
            .iter()
            .find(|(n, _)| n == name)
            .and_then(|(_, v)| v.as_deref())
    }

    pub fn max(&self, name: &str) -> Option<f64> {
        self.values(name).map(|v| v.iter().copied().fold(0.0, f64::max))
    }

    /// Maximum degree divided by `n - 1`, the scale used for cross-network comparison.
    pub fn max_normalized_degree(&self) -> Option<f64> {
        let n = self.node_count;
        if n < 2 {
            return None;
        }
        let din = self.max("degree_in").unwrap_or(0.0);
        let dout = self.max("degree_out").unwrap_or(0.0);
        Some(din.max(dout) / (n - 1) as f64)
    }

    /// `node_id,degree_in,degree_out,closeness,betweenness,eigenvector`; absent cells left blank.
    pub fn write_csv<W: Write>(&self, ids: &[String], mut out: W) -> io::Result<()> {
        writeln!(out, "node_id,{}", CENTRALITY_COLUMNS.join(","))?;
        let cols: Vec<Option<&[f64]>> = CENTRALITY_COLUMNS.iter().map(|c| self.values(c)).collect();
        for (u, id) in ids.iter().enumerate().take(self.node_count) {
            write!(out, "{id}")?;
            for col in &cols {
                match col {
                    Some(v) => write!(out, ",{}", v[u])?,
                    None => write!(out, ",")?,
                }
            }
            writeln!(out)?;
        }
        Ok(())
    }
}

/// Runs the selected measures (all when `selection` is empty).
pub fn centrality_report(
    g: &dyn Topology,
    registry: &CentralityRegistry,
    selection: &[&str],
) -> Result<CentralityReport, MetricsError> {
    let chosen = registry.select(selection)?;
    let mut measures = Vec::new();
    let mut notes = Vec::new();
    for m in chosen {
        match m.compute(g) {
            Ok(c) => {
                notes.extend(c.notes.into_iter().map(|note| format!("{}: {note}", m.name())));
                measures.push((m.name().to_string(), Some(c.values)));
            }
            Err(e) => {
                notes.push(format!("{}: {e}", m.name()));
                measures.push((m.name().to_string(), None));
            }
        }
    }
    Ok(CentralityReport { node_count: g.node_count(), measures, notes })
}
