use std::collections::BTreeSet;

use super::{Csr, Topology};

/// Simple undirected graph; used for the symmetric views of both networks.
#[derive(Debug, Clone, PartialEq)]
pub struct UndirectedGraph {
    n: usize,
    adj: Csr,
}

impl UndirectedGraph {
    /// Self-pairs are dropped and repeated pairs (in either order) merged.
    pub fn from_pairs(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let set: BTreeSet<(usize, usize)> = pairs
            .into_iter()
            .filter(|(a, b)| a != b)
            .map(|(a, b)| (a.min(b), a.max(b)))
            .collect();
        let adj = Csr::from_pairs(n, set.iter().flat_map(|&(a, b)| [(a, b), (b, a)]));
        UndirectedGraph { n, adj }
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adj.neighbors(u).len()
    }
}

impl Topology for UndirectedGraph {
    fn node_count(&self) -> usize {
        self.n
    }

    fn out_neighbors(&self, u: usize) -> &[usize] {
        self.adj.neighbors(u)
    }

    fn in_neighbors(&self, u: usize) -> &[usize] {
        self.adj.neighbors(u)
    }

    fn is_directed(&self) -> bool {
        false
    }
}
