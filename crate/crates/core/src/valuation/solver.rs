use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;

use super::{CrossHoldings, ValuationError};

/// Funds up to this count use the dense LU strategy under `auto`.
pub const AUTO_DENSE_LIMIT: usize = 512;

const FIXED_POINT_MAX_ITERATIONS: usize = 100_000;

/// A prepared solver for `(I - C) y = x`.
pub trait LeontiefSolver: Send + Sync + fmt::Debug {
    fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>, ValuationError>;
}

/// Named way of preparing a [`LeontiefSolver`] for a cross-holdings matrix.
pub trait SolverStrategy: Send + Sync {
    fn name(&self) -> &'static str;
    fn prepare(&self, ch: &CrossHoldings) -> Result<Arc<dyn LeontiefSolver>, ValuationError>;
}

/// Dense inverse of `I - C` via LU with partial pivoting.
pub struct DenseLu;

/// Sparse fixed-point iteration `y <- x + C y`; converges because every
/// column sum of C is below 1.
pub struct FixedPoint;

struct Auto;

#[derive(Debug)]
struct DenseInverse {
    n: usize,
    /// Row-major `(I - C)^{-1}`.
    inverse: Vec<f64>,
}

#[derive(Debug)]
struct SparseIteration {
    ch: CrossHoldings,
}

impl SolverStrategy for DenseLu {
    fn name(&self) -> &'static str {
        "dense-lu"
    }

    fn prepare(&self, ch: &CrossHoldings) -> Result<Arc<dyn LeontiefSolver>, ValuationError> {
        let n = ch.n();
        let mut m = DMatrix::<f64>::identity(n, n);
        for &(i, j, c) in ch.entries() {
            m[(i, j)] -= c;
        }
        let inv = m.lu().try_inverse().ok_or(ValuationError::SingularSystem)?;
        let mut inverse = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                inverse.push(inv[(i, j)]);
            }
        }
        Ok(Arc::new(DenseInverse { n, inverse }))
    }
}

impl SolverStrategy for FixedPoint {
    fn name(&self) -> &'static str {
        "fixed-point"
    }

    fn prepare(&self, ch: &CrossHoldings) -> Result<Arc<dyn LeontiefSolver>, ValuationError> {
        Ok(Arc::new(SparseIteration { ch: ch.clone() }))
    }
}

impl SolverStrategy for Auto {
    fn name(&self) -> &'static str {
        "auto"
    }

    fn prepare(&self, ch: &CrossHoldings) -> Result<Arc<dyn LeontiefSolver>, ValuationError> {
        if ch.n() <= AUTO_DENSE_LIMIT {
            DenseLu.prepare(ch)
        } else {
            FixedPoint.prepare(ch)
        }
    }
}

impl LeontiefSolver for DenseInverse {
    fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>, ValuationError> {
        if rhs.len() != self.n {
            return Err(ValuationError::DimensionMismatch { expected: self.n, got: rhs.len() });
        }
        Ok(self
            .inverse
            .chunks_exact(self.n.max(1))
            .take(self.n)
            .map(|row| row.iter().zip(rhs).map(|(a, b)| a * b).sum())
            .collect())
    }
}

impl LeontiefSolver for SparseIteration {
    fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>, ValuationError> {
        let n = self.ch.n();
        if rhs.len() != n {
            return Err(ValuationError::DimensionMismatch { expected: n, got: rhs.len() });
        }
        let mut y = rhs.to_vec();
        for _ in 0..FIXED_POINT_MAX_ITERATIONS {
            let cy = self.ch.mul_vec(&y);
            let next: Vec<f64> = rhs.iter().zip(&cy).map(|(x, c)| x + c).collect();
            let scale = next.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            let diff = next.iter().zip(&y).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
            y = next;
            if diff <= 4.0 * f64::EPSILON * scale {
                return Ok(y);
            }
        }
        Err(ValuationError::SolverError(format!(
            "fixed-point iteration did not settle in {FIXED_POINT_MAX_ITERATIONS} sweeps"
        )))
    }
}

/// Strategies by name. The default registry holds `auto`, `dense-lu` and `fixed-point`.
pub struct SolverRegistry {
    strategies: Vec<Arc<dyn SolverStrategy>>,
}

impl SolverRegistry {
    pub fn empty() -> Self {
        SolverRegistry { strategies: Vec::new() }
    }

    pub fn register(&mut self, strategy: Arc<dyn SolverStrategy>) -> Result<(), ValuationError> {
        if self.get(strategy.name()).is_ok() {
            return Err(ValuationError::DuplicateSolver(strategy.name().to_string()));
        }
        self.strategies.push(strategy);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Result<Arc<dyn SolverStrategy>, ValuationError> {
        self.strategies
            .iter()
            .find(|s| s.name() == name)
            .cloned()
            .ok_or_else(|| ValuationError::UnknownSolver(name.to_string()))
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.strategies.iter().map(|s| s.name()).collect()
    }
}

impl Default for SolverRegistry {
    fn default() -> Self {
        SolverRegistry {
            strategies: vec![Arc::new(Auto), Arc::new(DenseLu), Arc::new(FixedPoint)],
        }
    }
}

/// `A = Ĉ (I - C)^{-1}`, held as the outside shares plus a prepared solver.
#[derive(Clone)]
pub struct DependencyMatrix {
    outside: Vec<f64>,
    solver: Arc<dyn LeontiefSolver>,
    strategy: &'static str,
}

impl fmt::Debug for DependencyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DependencyMatrix")
            .field("n", &self.outside.len())
            .field("strategy", &self.strategy)
            .finish()
    }
}

impl DependencyMatrix {
    pub fn n(&self) -> usize {
        self.outside.len()
    }

    pub fn strategy(&self) -> &'static str {
        self.strategy
    }

    pub fn outside_shares(&self) -> &[f64] {
        &self.outside
    }

    /// `(I - C)^{-1} x`.
    pub fn book_values(&self, x: &[f64]) -> Result<Vec<f64>, ValuationError> {
        self.solver.solve(x)
    }

    /// `A x`.
    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>, ValuationError> {
        let y = self.solver.solve(x)?;
        Ok(y.iter().zip(&self.outside).map(|(v, c)| c * v).collect())
    }

    /// Materializes A column by column (`rows[i][j]`).
    pub fn to_dense(&self) -> Result<Vec<Vec<f64>>, ValuationError> {
        let n = self.n();
        let mut dense = vec![vec![0.0; n]; n];
        let mut e = vec![0.0; n];
        for j in 0..n {
            e[j] = 1.0;
            let col = self.apply(&e)?;
            e[j] = 0.0;
            for (i, v) in col.into_iter().enumerate() {
                dense[i][j] = v;
            }
        }
        Ok(dense)
    }

    /// Coordinate-triplet text of the nonzero entries of A.
    pub fn write_triplets<W: std::io::Write>(&self, mut out: W) -> Result<(), ValuationError> {
        for (i, row) in self.to_dense()?.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if *v != 0.0 {
                    writeln!(out, "{i} {j} {v}").map_err(|e| ValuationError::SolverError(e.to_string()))?;
                }
            }
        }
        Ok(())
    }
}

/// Dependency matrix with the `auto` strategy.
pub fn dependency_matrix(ch: &CrossHoldings) -> Result<DependencyMatrix, ValuationError> {
    dependency_matrix_with(ch, &Auto)
}

pub fn dependency_matrix_with(
    ch: &CrossHoldings,
    strategy: &dyn SolverStrategy,
) -> Result<DependencyMatrix, ValuationError> {
    Ok(DependencyMatrix {
        outside: ch.outside_shares().to_vec(),
        solver: strategy.prepare(ch)?,
        strategy: strategy.name(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Ĉ * sum_{k <= K} C^k, stopping once the C^k term is negligible.
    fn neumann(ch: &CrossHoldings) -> Vec<Vec<f64>> {
        let n = ch.n();
        let c = ch.to_dense();
        let mut term: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| (i == j) as u8 as f64).collect()).collect();
        let mut sum = term.clone();
        for _ in 0..5000 {
            let next: Vec<Vec<f64>> = (0..n)
                .map(|i| (0..n).map(|j| (0..n).map(|k| c[i][k] * term[k][j]).sum()).collect())
                .collect();
            term = next;
            let norm = term.iter().map(|r| r.iter().map(|v| v.abs()).sum::<f64>()).fold(0.0, f64::max);
            for i in 0..n {
                for j in 0..n {
                    sum[i][j] += term[i][j];
                }
            }
            if norm < 1e-14 {
                break;
            }
        }
        let outside = ch.outside_shares();
        (0..n).map(|i| (0..n).map(|j| outside[i] * sum[i][j]).collect()).collect()
    }

    fn random_ch(seed: u64, n: usize, max_col: f64, density: f64) -> CrossHoldings {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut cols: Vec<Vec<(usize, usize, f64)>> = vec![Vec::new(); n];
        for i in 0..n {
            for j in 0..n {
                if i != j && rng.random::<f64>() < density {
                    cols[j].push((i, j, rng.random::<f64>()));
                }
            }
        }
        let mut entries = Vec::new();
        for col in cols {
            let s: f64 = col.iter().map(|e| e.2).sum();
            let target = max_col * rng.random::<f64>();
            for (i, j, c) in col {
                entries.push((i, j, if s > 0.0 { c / s * target } else { c }));
            }
        }
        CrossHoldings::build(n, entries).unwrap()
    }

    #[test]
    fn zero_cross_holdings_give_identity() {
        let ch = CrossHoldings::empty(3);
        for strategy in ["dense-lu", "fixed-point"] {
            let a = dependency_matrix_with(&ch, SolverRegistry::default().get(strategy).unwrap().as_ref())
                .unwrap()
                .to_dense()
                .unwrap();
            assert_eq!(a, vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]]);
        }
    }

    #[test]
    fn two_fund_example() {
        // fund 0 holds half of fund 1: (I - C)^{-1} = [[1, 0.5], [0, 1]]
        let ch = CrossHoldings::build(2, [(0, 1, 0.5)]).unwrap();
        let a = dependency_matrix(&ch).unwrap();
        assert_eq!(a.book_values(&[0.0, 1.0]).unwrap(), vec![0.5, 1.0]);
        assert_eq!(a.to_dense().unwrap(), vec![vec![1.0, 0.5], vec![0.0, 0.5]]);
        // fixed-point cross-check: v <- Dp + C v
        let mut v = [0.0, 0.0];
        for _ in 0..200 {
            v = [10.0 + 0.5 * v[1], 10.0];
        }
        assert_eq!(a.book_values(&[10.0, 10.0]).unwrap(), v.to_vec());
    }

    #[test]
    fn six_fund_neumann_oracle() {
        let ch = random_ch(6, 6, 0.8, 0.5);
        let oracle = neumann(&ch);
        for name in ["dense-lu", "fixed-point"] {
            let a = dependency_matrix_with(&ch, SolverRegistry::default().get(name).unwrap().as_ref())
                .unwrap()
                .to_dense()
                .unwrap();
            for i in 0..6 {
                for j in 0..6 {
                    assert!((a[i][j] - oracle[i][j]).abs() < 1e-9, "{name} ({i},{j})");
                }
            }
        }
    }

    #[test]
    fn registry_lookup() {
        let mut r = SolverRegistry::default();
        assert_eq!(r.names(), vec!["auto", "dense-lu", "fixed-point"]);
        assert!(matches!(r.get("cholesky"), Err(ValuationError::UnknownSolver(_))));
        assert!(matches!(r.register(Arc::new(DenseLu)), Err(ValuationError::DuplicateSolver(_))));
        let a = dependency_matrix(&CrossHoldings::empty(600)).unwrap();
        assert_eq!(a.strategy(), "auto");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]
        #[test]
        fn dependency_invariants(seed in any::<u64>(), n in 1usize..30, density in 0.0f64..0.6) {
            let ch = random_ch(seed, n, 0.95, density);
            let oracle = neumann(&ch);
            let c = ch.to_dense();
            for name in ["dense-lu", "fixed-point"] {
                let a = dependency_matrix_with(&ch, SolverRegistry::default().get(name).unwrap().as_ref())
                    .unwrap().to_dense().unwrap();
                for j in 0..n {
                    let col: f64 = (0..n).map(|i| a[i][j]).sum();
                    prop_assert!((col - 1.0).abs() < 1e-9);
                    for i in 0..n {
                        prop_assert!(a[i][j] >= 0.0);
                        prop_assert!((a[i][j] - oracle[i][j]).abs() < 1e-9);
                        // A (I - C) = Ĉ
                        let lhs: f64 = a[i][j] - (0..n).map(|k| a[i][k] * c[k][j]).sum::<f64>();
                        let rhs = if i == j { ch.outside_shares()[i] } else { 0.0 };
                        prop_assert!((lhs - rhs).abs() < 1e-10);
                    }
                }
            }
        }
    }
}
