use std::collections::HashSet;

use super::{AdjacencyMatrix, Csr, GraphError, NodeKind, Topology, UndirectedGraph};

/// Directed graph with non-negative weights, no self-loops and at most one
/// edge per ordered pair. Edges are kept sorted by `(tail, head)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectedWeightedGraph {
    n: usize,
    edges: Vec<(usize, usize, f64)>,
    out: Csr,
    inc: Csr,
}

impl DirectedWeightedGraph {
    pub fn build(
        n: usize,
        edge_list: impl IntoIterator<Item = (usize, usize, f64)>,
    ) -> Result<Self, GraphError> {
        let mut seen = HashSet::new();
        let mut edges = Vec::new();
        for (tail, head, weight) in edge_list {
            for index in [tail, head] {
                if index >= n {
                    return Err(GraphError::NodeOutOfRange { index, count: n });
                }
            }
            if tail == head {
                return Err(GraphError::SelfLoop(tail));
            }
            if !(weight >= 0.0) || !weight.is_finite() {
                return Err(GraphError::NegativeWeight { tail, head, weight });
            }
            if !seen.insert((tail, head)) {
                return Err(GraphError::DuplicateEdge(tail, head));
            }
            edges.push((tail, head, weight));
        }
        edges.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        let out = Csr::from_pairs(n, edges.iter().map(|&(t, h, _)| (t, h)));
        let inc = Csr::from_pairs(n, edges.iter().map(|&(t, h, _)| (h, t)));
        Ok(DirectedWeightedGraph { n, edges, out, inc })
    }

    pub fn empty(n: usize) -> Self {
        Self::build(n, []).expect("empty graph is valid")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    pub fn weight(&self, tail: usize, head: usize) -> Option<f64> {
        self.edges
            .binary_search_by(|e| (e.0, e.1).cmp(&(tail, head)))
            .ok()
            .map(|i| self.edges[i].2)
    }

    /// `(in_degree, out_degree)` per node.
    pub fn degrees(&self) -> (Vec<usize>, Vec<usize>) {
        let mut din = vec![0; self.n];
        let mut dout = vec![0; self.n];
        for &(t, h, _) in &self.edges {
            dout[t] += 1;
            din[h] += 1;
        }
        (din, dout)
    }

    /// `m / (n (n - 1))`.
    pub fn density(&self) -> Result<f64, GraphError> {
        if self.n < 2 {
            return Err(GraphError::DegenerateGraph(format!(
                "digraph density needs at least 2 nodes, got {}",
                self.n
            )));
        }
        Ok(self.m() as f64 / (self.n as f64 * (self.n as f64 - 1.0)))
    }

    pub fn adjacency(&self) -> AdjacencyMatrix {
        AdjacencyMatrix::from_triplets(
            (self.n, NodeKind::Fund),
            (self.n, NodeKind::Fund),
            self.edges.iter().copied(),
        )
    }

    /// Rebuilds a graph from the nonzero entries of a square adjacency matrix.
    pub fn from_adjacency(matrix: &AdjacencyMatrix) -> Result<Self, GraphError> {
        Self::build(matrix.rows(), matrix.triplets().iter().copied())
    }

    /// Collapses direction; antiparallel pairs become a single edge.
    pub fn to_undirected(&self) -> UndirectedGraph {
        UndirectedGraph::from_pairs(self.n, self.edges.iter().map(|&(t, h, _)| (t, h)))
    }
}

impl Topology for DirectedWeightedGraph {
    fn node_count(&self) -> usize {
        self.n
    }

    fn out_neighbors(&self, u: usize) -> &[usize] {
        self.out.neighbors(u)
    }

    fn in_neighbors(&self, u: usize) -> &[usize] {
        self.inc.neighbors(u)
    }

    fn is_directed(&self) -> bool {
        true
    }

    fn edge_count(&self) -> usize {
        self.edges.len()
    }
}
