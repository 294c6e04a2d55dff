use std::collections::BTreeMap;

use super::MetricsError;
use crate::netcore::Topology;

/// Joint label distribution over edges: `m[i][j]` is the fraction of edges
/// from a label-`i` node to a label-`j` node.
#[derive(Debug, Clone, PartialEq)]
pub struct MixingMatrix<L> {
    pub labels: Vec<L>,
    pub m: Vec<Vec<f64>>,
}

impl<L> MixingMatrix<L> {
    /// Row sums `a_i`.
    pub fn a(&self) -> Vec<f64> {
        self.m.iter().map(|row| row.iter().sum()).collect()
    }

    /// Column sums `b_j`.
    pub fn b(&self) -> Vec<f64> {
        (0..self.labels.len())
            .map(|j| self.m.iter().map(|row| row[j]).sum())
            .collect()
    }
}

/// Builds the mixing matrix over directed arcs. Undirected graphs contribute
/// both orientations of every edge, which makes the matrix symmetric.
pub fn mixing_matrix<L: Ord + Clone>(
    g: &dyn Topology,
    labels: &[Option<L>],
) -> Result<MixingMatrix<L>, MetricsError> {
    let n = g.node_count();
    if labels.len() < n {
        return Err(MetricsError::UnlabeledNode(labels.len()));
    }
    if let Some(u) = labels[..n].iter().position(Option::is_none) {
        return Err(MetricsError::UnlabeledNode(u));
    }
    let mut index = BTreeMap::new();
    for l in labels[..n].iter().flatten() {
        let next = index.len();
        index.entry(l.clone()).or_insert(next);
    }
    // reassign dense indices in label order
    let ordered: Vec<L> = index.keys().cloned().collect();
    for (i, l) in ordered.iter().enumerate() {
        index.insert(l.clone(), i);
    }
    let k = ordered.len();
    let mut counts = vec![vec![0usize; k]; k];
    let mut total = 0usize;
    for u in 0..n {
        let lu = index[labels[u].as_ref().unwrap()];
        for &v in g.out_neighbors(u) {
            counts[lu][index[labels[v].as_ref().unwrap()]] += 1;
            total += 1;
        }
    }
    if total == 0 {
        return Err(MetricsError::NoEdges);
    }
    let m = counts
        .into_iter()
        .map(|row| row.into_iter().map(|c| c as f64 / total as f64).collect())
        .collect();
    Ok(MixingMatrix { labels: ordered, m })
}

/// `r = (sum_i m_ii - sum_i a_i b_i) / (1 - sum_i a_i b_i)`.
pub fn assortativity<L: Ord + Clone>(
    g: &dyn Topology,
    labels: &[Option<L>],
) -> Result<f64, MetricsError> {
    let mix = mixing_matrix(g, labels)?;
    let trace: f64 = (0..mix.labels.len()).map(|i| mix.m[i][i]).sum();
    let ab: f64 = mix.a().iter().zip(mix.b()).map(|(a, b)| a * b).sum();
    let denom = 1.0 - ab;
    if denom.abs() < 1e-12 {
        return Err(MetricsError::DegenerateLabels);
    }
    Ok((trace - ab) / denom)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netcore::{DirectedWeightedGraph, UndirectedGraph};

    fn labels(s: &str) -> Vec<Option<char>> {
        s.chars().map(Some).collect()
    }

    #[test]
    fn segregated_graph_is_fully_assortative() {
        let g = UndirectedGraph::from_pairs(4, [(0, 1), (2, 3)]);
        assert_eq!(assortativity(&g, &labels("AABB")).unwrap(), 1.0);
    }

    #[test]
    fn independent_mixing_gives_zero() {
        // arcs A->A, A->B, B->A, B->B: m_ij = 1/4 = a_i b_j
        let g = DirectedWeightedGraph::build(4, [(0, 1, 1.0), (0, 2, 1.0), (2, 0, 1.0), (2, 3, 1.0)])
            .unwrap();
        assert_eq!(assortativity(&g, &labels("AABB")).unwrap(), 0.0);
    }

    #[test]
    fn hand_evaluated_two_label_graph() {
        // 4 edges inside A, 4 inside B, one A->B and one B->A.
        let edges = [
            (0, 1), (1, 2), (2, 3), (3, 0),
            (4, 5), (5, 6), (6, 7), (7, 4),
            (0, 4), (5, 1),
        ];
        let g = DirectedWeightedGraph::build(8, edges.map(|(t, h)| (t, h, 1.0))).unwrap();
        let lab = labels("AAAABBBB");
        let mix = mixing_matrix(&g, &lab).unwrap();
        assert_eq!(mix.m, vec![vec![0.4, 0.1], vec![0.1, 0.4]]);
        assert_eq!(mix.a(), vec![0.5, 0.5]);
        let r = assortativity(&g, &lab).unwrap();
        assert!((r - 0.6).abs() < 1e-12);
    }

    #[test]
    fn error_paths() {
        let g = UndirectedGraph::from_pairs(3, [(0, 1), (1, 2)]);
        assert_eq!(
            assortativity(&g, &[Some(1), None, Some(1)]),
            Err(MetricsError::UnlabeledNode(1))
        );
        assert_eq!(
            assortativity(&g, &[Some(1), Some(1)]),
            Err(MetricsError::UnlabeledNode(2))
        );
        assert_eq!(
            assortativity(&g, &[Some(7), Some(7), Some(7)]),
            Err(MetricsError::DegenerateLabels)
        );
        let empty = UndirectedGraph::from_pairs(2, []);
        assert_eq!(assortativity(&empty, &[Some(1), Some(2)]), Err(MetricsError::NoEdges));
    }
}
