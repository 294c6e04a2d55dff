use std::collections::BTreeMap;
use std::io::{self, Write};

use crate::netcore::{BipartiteGraph, DirectedWeightedGraph};

/// Which degree sequence to bin.
#[derive(Debug, Clone, Copy)]
pub enum DegreeSource<'a> {
    In(&'a DirectedWeightedGraph),
    Out(&'a DirectedWeightedGraph),
    BipartiteFund(&'a BipartiteGraph),
    BipartiteAsset(&'a BipartiteGraph),
}

/// Degree -> node count, ordered by degree.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DegreeHistogram(pub BTreeMap<usize, usize>);

impl DegreeHistogram {
    pub fn from_degrees(degrees: &[usize]) -> Self {
        let mut bins = BTreeMap::new();
        for &d in degrees {
            *bins.entry(d).or_insert(0) += 1;
        }
        DegreeHistogram(bins)
    }

    pub fn total(&self) -> usize {
        self.0.values().sum()
    }

    pub fn max_degree(&self) -> usize {
        self.0.keys().next_back().copied().unwrap_or(0)
    }

    /// Lower median of the underlying degree sequence.
    pub fn median_degree(&self) -> usize {
        let half = (self.total().max(1) - 1) / 2;
        let mut seen = 0;
        for (&d, &c) in &self.0 {
            seen += c;
            if seen > half {
                return d;
            }
        }
        0
    }

    /// Two-column `degree,count` CSV with header.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "degree,count")?;
        for (d, c) in &self.0 {
            writeln!(out, "{d},{c}")?;
        }
        Ok(())
    }
}

pub fn degree_histogram(source: DegreeSource<'_>) -> DegreeHistogram {
    let degrees = match source {
        DegreeSource::In(g) => g.degrees().0,
        DegreeSource::Out(g) => g.degrees().1,
        DegreeSource::BipartiteFund(b) => b.fund_degrees(),
        DegreeSource::BipartiteAsset(b) => b.asset_degrees(),
    };
    DegreeHistogram::from_degrees(&degrees)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_and_star() {
        let cycle = DirectedWeightedGraph::build(3, [(0, 1, 1.0), (1, 2, 1.0), (2, 0, 1.0)]).unwrap();
        let h = degree_histogram(DegreeSource::In(&cycle));
        assert_eq!(h.0, BTreeMap::from([(1, 3)]));
        let star = DirectedWeightedGraph::build(4, [(1, 0, 1.0), (2, 0, 1.0), (3, 0, 1.0)]).unwrap();
        let h = degree_histogram(DegreeSource::In(&star));
        assert_eq!(h.0, BTreeMap::from([(0, 3), (3, 1)]));
        assert_eq!(h.total(), 4);
        let mut csv = Vec::new();
        h.write_csv(&mut csv).unwrap();
        assert_eq!(String::from_utf8(csv).unwrap(), "degree,count\n0,3\n3,1\n");
    }

    #[test]
    fn median() {
        assert_eq!(DegreeHistogram::from_degrees(&[0, 0, 0, 3]).median_degree(), 0);
        assert_eq!(DegreeHistogram::from_degrees(&[1, 2, 5]).median_degree(), 2);
    }
}
