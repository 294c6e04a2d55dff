use std::collections::HashSet;

use super::{AdjacencyMatrix, GraphError, NodeId, NodeKind, UndirectedGraph};

/// Fund–asset network. Edge values are position values in currency units.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteGraph {
    funds: usize,
    assets: usize,
    edges: Vec<(usize, usize, f64)>,
}

impl BipartiteGraph {
    pub fn build(
        funds: usize,
        assets: usize,
        edge_list: impl IntoIterator<Item = (NodeId, NodeId, f64)>,
    ) -> Result<Self, GraphError> {
        let mut seen = HashSet::new();
        let mut edges = Vec::new();
        for (fund, asset, value) in edge_list {
            if fund.kind != NodeKind::Fund || asset.kind != NodeKind::Asset {
                return Err(GraphError::WrongKind(fund, asset));
            }
            if fund.index >= funds {
                return Err(GraphError::NodeOutOfRange { index: fund.index, count: funds });
            }
            if asset.index >= assets {
                return Err(GraphError::NodeOutOfRange { index: asset.index, count: assets });
            }
            if !(value >= 0.0) || !value.is_finite() {
                return Err(GraphError::NegativeWeight {
                    tail: fund.index,
                    head: asset.index,
                    weight: value,
                });
            }
            if !seen.insert((fund.index, asset.index)) {
                return Err(GraphError::DuplicateEdge(fund.index, asset.index));
            }
            edges.push((fund.index, asset.index, value));
        }
        edges.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        Ok(BipartiteGraph { funds, assets, edges })
    }

    pub fn fund_count(&self) -> usize {
        self.funds
    }

    pub fn asset_count(&self) -> usize {
        self.assets
    }

    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn fund_degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.funds];
        for &(f, _, _) in &self.edges {
            d[f] += 1;
        }
        d
    }

    pub fn asset_degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.assets];
        for &(_, a, _) in &self.edges {
            d[a] += 1;
        }
        d
    }

    /// `edges / (funds * assets)`.
    pub fn density(&self) -> Result<f64, GraphError> {
        if self.funds == 0 || self.assets == 0 {
            return Err(GraphError::DegenerateGraph(format!(
                "bipartite density needs both sides non-empty, got {}x{}",
                self.funds, self.assets
            )));
        }
        Ok(self.m() as f64 / (self.funds as f64 * self.assets as f64))
    }

    /// The `funds x assets` value block W.
    pub fn value_block(&self) -> AdjacencyMatrix {
        AdjacencyMatrix::from_triplets(
            (self.funds, NodeKind::Fund),
            (self.assets, NodeKind::Asset),
            self.edges.iter().copied(),
        )
    }

    /// Block form `[[0, W], [W^T, 0]]`; funds first, then assets offset by the fund count.
    pub fn adjacency(&self) -> AdjacencyMatrix {
        let n = self.funds;
        let size = n + self.assets;
        AdjacencyMatrix::build(
            size,
            size,
            None,
            None,
            self.edges
                .iter()
                .flat_map(|&(f, a, v)| [(f, n + a, v), (n + a, f, v)]),
        )
    }

    /// Symmetric view over `funds + assets` nodes, assets offset by the fund count.
    pub fn to_undirected(&self) -> UndirectedGraph {
        let n = self.funds;
        UndirectedGraph::from_pairs(n + self.assets, self.edges.iter().map(|&(f, a, _)| (f, n + a)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> BipartiteGraph {
        let edges = [(0, 0), (0, 1), (1, 2), (1, 3), (2, 0), (2, 3)]
            .into_iter()
            .map(|(f, a)| (NodeId::fund(f), NodeId::asset(a), (f + a + 1) as f64));
        BipartiteGraph::build(3, 4, edges).unwrap()
    }

    #[test]
    fn density_three_by_four() {
        assert_eq!(sample().density().unwrap(), 0.5);
    }

    #[test]
    fn block_structure() {
        let g = sample();
        let adj = g.adjacency();
        let dense = adj.to_dense();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(dense[i][j], 0.0);
            }
        }
        for i in 3..7 {
            for j in 3..7 {
                assert_eq!(dense[i][j], 0.0);
            }
        }
        // W block against its transpose
        let w = g.value_block();
        for &(f, a, v) in w.triplets() {
            assert_eq!(dense[f][3 + a], v);
            assert_eq!(dense[3 + a][f], v);
        }
        assert_eq!(adj, adj.transpose());
    }

    #[test]
    fn rejects_fund_fund_edges() {
        let err = BipartiteGraph::build(2, 2, [(NodeId::fund(0), NodeId::fund(1), 1.0)]);
        assert!(matches!(err, Err(GraphError::WrongKind(..))));
    }
}
