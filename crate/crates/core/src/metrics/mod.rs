//! Network statistics: centralities, assortativity, Jaccard stability and
//! degree histograms.

mod assortativity;
mod centrality;
mod histogram;
mod registry;
mod report;
mod stability;

pub use assortativity::{assortativity, mixing_matrix, MixingMatrix};
pub use centrality::{
    betweenness_centrality, closeness_centrality, closeness_centrality_all, degree_centrality,
    eigenvector_centrality, eigenvector_centrality_with, shortest_paths_to, shortest_paths_from,
    EigenvectorCentrality, EigenvectorOptions, ShortestPaths,
};
pub use histogram::{degree_histogram, DegreeHistogram, DegreeSource};
pub use registry::{Centrality, CentralityMeasure, CentralityRegistry};
pub use report::{centrality_report, CentralityReport, CENTRALITY_COLUMNS};
pub use stability::{jaccard, jaccard_stability, GraphSnapshot, StabilityReport, StabilityRow};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricsError {
    #[error("eigenvector centrality did not converge after {0} iterations")]
    NoConvergence(usize),
    #[error("graph has no edges")]
    NoEdges,
    #[error("node {0} has no label")]
    UnlabeledNode(usize),
    #[error("assortativity undefined: labels are perfectly mixed (denominator is zero)")]
    DegenerateLabels,
    #[error("need at least two snapshots, got {0}")]
    InsufficientSnapshots(usize),
    #[error("unknown centrality measure {0:?}")]
    UnknownMeasure(String),
    #[error("centrality measure {0:?} already registered")]
    DuplicateMeasure(String),
}
