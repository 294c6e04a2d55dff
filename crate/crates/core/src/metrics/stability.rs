use std::collections::BTreeSet;

use serde::Serialize;

use super::MetricsError;
use crate::netcore::DirectedWeightedGraph;

/// One period's node and edge sets in a shared index space.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphSnapshot {
    pub label: String,
    pub nodes: BTreeSet<usize>,
    pub edges: BTreeSet<(usize, usize)>,
}

impl GraphSnapshot {
    /// Every node of `g` is present; weights are dropped.
    pub fn from_graph(label: impl Into<String>, g: &DirectedWeightedGraph) -> Self {
        GraphSnapshot {
            label: label.into(),
            nodes: (0..g.n()).collect(),
            edges: g.edges().iter().map(|&(t, h, _)| (t, h)).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilityRow {
    pub period_a: String,
    pub period_b: String,
    pub node_jaccard: f64,
    pub edge_jaccard: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilityReport {
    pub rows: Vec<StabilityRow>,
}

impl StabilityReport {
    pub fn mean_edge_jaccard(&self) -> f64 {
        self.rows.iter().map(|r| r.edge_jaccard).sum::<f64>() / self.rows.len() as f64
    }

    pub fn mean_node_jaccard(&self) -> f64 {
        self.rows.iter().map(|r| r.node_jaccard).sum::<f64>() / self.rows.len() as f64
    }

    /// `period_a,period_b,node_jaccard,edge_jaccard`.
    pub fn write_csv<W: std::io::Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "period_a,period_b,node_jaccard,edge_jaccard")?;
        for r in &self.rows {
            writeln!(out, "{},{},{},{}", r.period_a, r.period_b, r.node_jaccard, r.edge_jaccard)?;
        }
        Ok(())
    }
}

/// `|S ∩ T| / |S ∪ T|`; two empty sets count as identical.
pub fn jaccard<T: Ord>(s: &BTreeSet<T>, t: &BTreeSet<T>) -> f64 {
    let inter = s.intersection(t).count();
    let union = s.len() + t.len() - inter;
    if union == 0 {
        1.0
    } else {
        inter as f64 / union as f64
    }
}

pub fn jaccard_stability(snapshots: &[GraphSnapshot]) -> Result<StabilityReport, MetricsError> {
    if snapshots.len() < 2 {
        return Err(MetricsError::InsufficientSnapshots(snapshots.len()));
    }
    let rows = snapshots
        .windows(2)
        .map(|pair| StabilityRow {
            period_a: pair[0].label.clone(),
            period_b: pair[1].label.clone(),
            node_jaccard: jaccard(&pair[0].nodes, &pair[1].nodes),
            edge_jaccard: jaccard(&pair[0].edges, &pair[1].edges),
        })
        .collect();
    Ok(StabilityReport { rows })
}
