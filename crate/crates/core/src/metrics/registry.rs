use super::{
    betweenness_centrality, closeness_centrality_all, degree_centrality, eigenvector_centrality,
    MetricsError,
};
use crate::netcore::Topology;

/// Per-node values from one measure, plus anything worth surfacing in a report.
#[derive(Debug, Clone, PartialEq)]
pub struct Centrality {
    pub values: Vec<f64>,
    pub notes: Vec<String>,
}

impl From<Vec<f64>> for Centrality {
    fn from(values: Vec<f64>) -> Self {
        Centrality { values, notes: Vec::new() }
    }
}

/// A named centrality algorithm.
pub trait CentralityMeasure: Send + Sync {
    fn name(&self) -> &'static str;
    fn compute(&self, g: &dyn Topology) -> Result<Centrality, MetricsError>;
}

struct DegreeIn;
struct DegreeOut;
struct Closeness;
struct Betweenness;
struct Eigenvector;

impl CentralityMeasure for DegreeIn {
    fn name(&self) -> &'static str {
        "degree_in"
    }

    fn compute(&self, g: &dyn Topology) -> Result<Centrality, MetricsError> {
        Ok(degree_centrality(g).0.into_iter().map(|d| d as f64).collect::<Vec<_>>().into())
    }
}

impl CentralityMeasure for DegreeOut {
    fn name(&self) -> &'static str {
        "degree_out"
    }

    fn compute(&self, g: &dyn Topology) -> Result<Centrality, MetricsError> {
        Ok(degree_centrality(g).1.into_iter().map(|d| d as f64).collect::<Vec<_>>().into())
    }
}

impl CentralityMeasure for Closeness {
    fn name(&self) -> &'static str {
        "closeness"
    }

    fn compute(&self, g: &dyn Topology) -> Result<Centrality, MetricsError> {
        Ok(closeness_centrality_all(g).into())
    }
}

impl CentralityMeasure for Betweenness {
    fn name(&self) -> &'static str {
        "betweenness"
    }

    fn compute(&self, g: &dyn Topology) -> Result<Centrality, MetricsError> {
        Ok(betweenness_centrality(g).into())
    }
}

impl CentralityMeasure for Eigenvector {
    fn name(&self) -> &'static str {
        "eigenvector"
    }

    fn compute(&self, g: &dyn Topology) -> Result<Centrality, MetricsError> {
        let e = eigenvector_centrality(g)?;
        let mut notes = Vec::new();
        if e.tied_components > 1 {
            notes.push(format!(
                "principal eigenvalue {:.6} shared by {} components; vector restricted to the lowest-indexed one",
                e.eigenvalue, e.tied_components
            ));
        }
        Ok(Centrality { values: e.vector, notes })
    }
}

/// Ordered collection of measures, looked up by name.
pub struct CentralityRegistry {
    measures: Vec<Box<dyn CentralityMeasure>>,
}

impl CentralityRegistry {
    pub fn empty() -> Self {
        CentralityRegistry { measures: Vec::new() }
    }

    pub fn register(&mut self, measure: Box<dyn CentralityMeasure>) -> Result<(), MetricsError> {
        if self.get(measure.name()).is_some() {
            return Err(MetricsError::DuplicateMeasure(measure.name().to_string()));
        }
        self.measures.push(measure);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&dyn CentralityMeasure> {
        self.measures.iter().find(|m| m.name() == name).map(|m| m.as_ref())
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.measures.iter().map(|m| m.name()).collect()
    }

    /// Resolves names in registry order; an empty selection means all.
    pub fn select(&self, names: &[&str]) -> Result<Vec<&dyn CentralityMeasure>, MetricsError> {
        if let Some(bad) = names.iter().find(|n| self.get(n).is_none()) {
            return Err(MetricsError::UnknownMeasure(bad.to_string()));
        }
        Ok(self
            .measures
            .iter()
            .filter(|m| names.is_empty() || names.contains(&m.name()))
            .map(|m| m.as_ref())
            .collect())
    }
}

impl Default for CentralityRegistry {
    fn default() -> Self {
        let mut r = CentralityRegistry::empty();
        r.measures.push(Box::new(DegreeIn));
        r.measures.push(Box::new(DegreeOut));
        r.measures.push(Box::new(Closeness));
        r.measures.push(Box::new(Betweenness));
        r.measures.push(Box::new(Eigenvector));
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netcore::UndirectedGraph;

    struct Constant;

    impl CentralityMeasure for Constant {
        fn name(&self) -> &'static str {
            "constant"
        }

        fn compute(&self, g: &dyn Topology) -> Result<Centrality, MetricsError> {
            Ok(vec![1.0; g.node_count()].into())
        }
    }

    #[test]
    fn lookup_and_selection() {
        let mut r = CentralityRegistry::default();
        assert_eq!(
            r.names(),
            vec!["degree_in", "degree_out", "closeness", "betweenness", "eigenvector"]
        );
        let picked: Vec<_> = r.select(&["eigenvector", "closeness"]).unwrap().iter().map(|m| m.name()).collect();
        assert_eq!(picked, vec!["closeness", "eigenvector"]);
        assert!(matches!(r.select(&["pagerank"]), Err(MetricsError::UnknownMeasure(_))));

        r.register(Box::new(Constant)).unwrap();
        assert!(matches!(r.register(Box::new(Constant)), Err(MetricsError::DuplicateMeasure(_))));
        let g = UndirectedGraph::from_pairs(3, [(0, 1)]);
        assert_eq!(r.get("constant").unwrap().compute(&g).unwrap().values, vec![1.0; 3]);
    }

    #[test]
    fn eigenvector_tie_is_noted() {
        let g = UndirectedGraph::from_pairs(4, [(0, 1), (2, 3)]);
        let c = CentralityRegistry::default().get("eigenvector").unwrap().compute(&g).unwrap();
        assert_eq!(c.notes.len(), 1);
    }
}
