use std::io::{self, Write};

use super::NodeKind;

/// Sparse adjacency matrix stored as sorted `(row, col, value)` triplets.
///
/// Stored entries are exactly the edges of the source graph, including
/// zero-weight edges. Row and column kinds are `None` for the mixed block
/// form of a bipartite graph.
#[derive(Debug, Clone, PartialEq)]
pub struct AdjacencyMatrix {
    rows: usize,
    cols: usize,
    row_kind: Option<NodeKind>,
    col_kind: Option<NodeKind>,
    entries: Vec<(usize, usize, f64)>,
}

impl AdjacencyMatrix {
    pub(crate) fn from_triplets(
        (rows, row_kind): (usize, NodeKind),
        (cols, col_kind): (usize, NodeKind),
        entries: impl Iterator<Item = (usize, usize, f64)>,
    ) -> Self {
        Self::build(rows, cols, Some(row_kind), Some(col_kind), entries)
    }

    pub(crate) fn build(
        rows: usize,
        cols: usize,
        row_kind: Option<NodeKind>,
        col_kind: Option<NodeKind>,
        entries: impl Iterator<Item = (usize, usize, f64)>,
    ) -> Self {
        let mut entries: Vec<_> = entries.collect();
        entries.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        AdjacencyMatrix { rows, cols, row_kind, col_kind, entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row_kind(&self) -> Option<NodeKind> {
        self.row_kind
    }

    pub fn col_kind(&self) -> Option<NodeKind> {
        self.col_kind
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn triplets(&self) -> &[(usize, usize, f64)] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.entries
            .binary_search_by(|e| (e.0, e.1).cmp(&(row, col)))
            .map(|i| self.entries[i].2)
            .unwrap_or(0.0)
    }

    /// Same pattern with every stored entry set to 1.
    pub fn unweighted(&self) -> Self {
        AdjacencyMatrix {
            entries: self.entries.iter().map(|&(r, c, _)| (r, c, 1.0)).collect(),
            ..self.clone()
        }
    }

    pub fn transpose(&self) -> Self {
        Self::build(
            self.cols,
            self.rows,
            self.col_kind,
            self.row_kind,
            self.entries.iter().map(|&(r, c, v)| (c, r, v)),
        )
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut dense = vec![vec![0.0; self.cols]; self.rows];
        for &(r, c, v) in &self.entries {
            dense[r][c] = v;
        }
        dense
    }

    /// Coordinate-triplet text, one `row col value` line per stored entry.
    pub fn write_triplets<W: Write>(&self, mut out: W) -> io::Result<()> {
        for &(r, c, v) in &self.entries {
            writeln!(out, "{r} {c} {v}")?;
        }
        Ok(())
    }
}
