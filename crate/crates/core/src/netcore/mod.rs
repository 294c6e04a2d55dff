//! Graph substrate shared by the cross-holdings and fund–asset networks.
//!
//! Graphs are built once, validated, and then treated as immutable. Node
//! identity is a dense index; external identifiers live in
//! [`crate::ingest::SymbolTable`].

mod adjacency;
mod bipartite;
mod digraph;
mod undirected;

pub use adjacency::AdjacencyMatrix;
pub use bipartite::BipartiteGraph;
pub use digraph::DirectedWeightedGraph;
pub use undirected::UndirectedGraph;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum NodeKind {
    Fund,
    Asset,
}

/// Dense node index tagged with the side of the network it belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct NodeId {
    pub index: usize,
    pub kind: NodeKind,
}

impl NodeId {
    pub fn fund(index: usize) -> Self {
        NodeId { index, kind: NodeKind::Fund }
    }

    pub fn asset(index: usize) -> Self {
        NodeId { index, kind: NodeKind::Asset }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GraphError {
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("self-loop on node {0}")]
    SelfLoop(usize),
    #[error("negative or non-finite weight {weight} on edge ({tail}, {head})")]
    NegativeWeight { tail: usize, head: usize, weight: f64 },
    #[error("node {index} out of range (node count {count})")]
    NodeOutOfRange { index: usize, count: usize },
    #[error("edge ({0:?}, {1:?}) does not join a fund to an asset")]
    WrongKind(NodeId, NodeId),
    #[error("graph too small for density: {0}")]
    DegenerateGraph(String),
}

/// Read-only neighbourhood view used by the metrics algorithms.
///
/// For undirected graphs `in_neighbors` and `out_neighbors` coincide.
pub trait Topology: Sync {
    fn node_count(&self) -> usize;
    fn out_neighbors(&self, u: usize) -> &[usize];
    fn in_neighbors(&self, u: usize) -> &[usize];
    fn is_directed(&self) -> bool;

    /// Number of edges; each undirected edge counts once.
    fn edge_count(&self) -> usize {
        let arcs: usize = (0..self.node_count()).map(|u| self.out_neighbors(u).len()).sum();
        if self.is_directed() {
            arcs
        } else {
            arcs / 2
        }
    }
}

/// Compressed neighbour lists: `offsets[u]..offsets[u + 1]` indexes `targets`.
#[derive(Debug, Clone, PartialEq, Default)]
pub(crate) struct Csr {
    offsets: Vec<usize>,
    targets: Vec<usize>,
}

impl Csr {
    /// Builds from (source, target) pairs; neighbour lists come out sorted.
    pub(crate) fn from_pairs(n: usize, pairs: impl Iterator<Item = (usize, usize)>) -> Self {
        let mut lists: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (s, t) in pairs {
            lists[s].push(t);
        }
        let mut offsets = Vec::with_capacity(n + 1);
        let mut targets = Vec::new();
        offsets.push(0);
        for mut list in lists {
            list.sort_unstable();
            targets.extend(list);
            offsets.push(targets.len());
        }
        Csr { offsets, targets }
    }

    pub(crate) fn neighbors(&self, u: usize) -> &[usize] {
        &self.targets[self.offsets[u]..self.offsets[u + 1]]
    }
}
