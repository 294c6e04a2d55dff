use std::collections::VecDeque;

use rayon::prelude::*;

use super::MetricsError;
use crate::netcore::Topology;

/// Sources per accumulation chunk. Chunk boundaries are fixed so the
/// floating-point reduction order does not depend on the thread count.
const SOURCE_CHUNK: usize = 64;

/// `(in, out)` neighbour counts. Undirected graphs report the degree twice.
pub fn degree_centrality(g: &dyn Topology) -> (Vec<usize>, Vec<usize>) {
    let n = g.node_count();
    (
        (0..n).map(|u| g.in_neighbors(u).len()).collect(),
        (0..n).map(|u| g.out_neighbors(u).len()).collect(),
    )
}

/// Unweighted BFS distances and shortest-path counts.
#[derive(Debug, Clone, PartialEq)]
pub struct ShortestPaths {
    pub dist: Vec<Option<usize>>,
    pub sigma: Vec<f64>,
}

fn bfs(g: &dyn Topology, root: usize, forward: bool) -> (ShortestPaths, Vec<usize>) {
    let n = g.node_count();
    let mut dist = vec![None; n];
    let mut sigma = vec![0.0; n];
    let mut order = Vec::with_capacity(n);
    let mut queue = VecDeque::new();
    dist[root] = Some(0);
    sigma[root] = 1.0;
    queue.push_back(root);
    while let Some(v) = queue.pop_front() {
        order.push(v);
        let dv = dist[v].unwrap();
        let next = if forward { g.out_neighbors(v) } else { g.in_neighbors(v) };
        for &w in next {
            match dist[w] {
                None => {
                    dist[w] = Some(dv + 1);
                    sigma[w] = sigma[v];
                    queue.push_back(w);
                }
                Some(dw) if dw == dv + 1 => sigma[w] += sigma[v],
                _ => {}
            }
        }
    }
    (ShortestPaths { dist, sigma }, order)
}

/// Paths leaving `source` along edge direction.
pub fn shortest_paths_from(g: &dyn Topology, source: usize) -> ShortestPaths {
    bfs(g, source, true).0
}

/// Paths arriving at `target`: `dist[v]` is `d(v, target)`.
pub fn shortest_paths_to(g: &dyn Topology, target: usize) -> ShortestPaths {
    bfs(g, target, false).0
}

/// Incoming closeness with reachable-set scaling.
///
/// With `r` the number of nodes that reach `u` (counting `u`), the value is
/// `(r - 1) / sum_v d(v, u) * (r - 1) / (n - 1)`, which is `(n - 1) / sum_v d(v, u)`
/// when every node reaches `u`.
pub fn closeness_centrality(g: &dyn Topology, u: usize) -> f64 {
    let n = g.node_count();
    if n < 2 {
        return 0.0;
    }
    let paths = shortest_paths_to(g, u);
    let (reached, total) = paths
        .dist
        .iter()
        .flatten()
        .fold((0usize, 0usize), |(r, s), &d| (r + 1, s + d));
    if reached <= 1 || total == 0 {
        return 0.0;
    }
    let r1 = (reached - 1) as f64;
    (r1 / total as f64) * (r1 / (n - 1) as f64)
}

pub fn closeness_centrality_all(g: &dyn Topology) -> Vec<f64> {
    (0..g.node_count())
        .into_par_iter()
        .map(|u| closeness_centrality(g, u))
        .collect()
}

/// Brandes accumulation over unweighted shortest paths.
///
/// Directed graphs sum over ordered pairs `(s, t)`; undirected graphs count
/// each unordered pair once.
pub fn betweenness_centrality(g: &dyn Topology) -> Vec<f64> {
    let n = g.node_count();
    let chunks: Vec<Vec<f64>> = (0..n)
        .collect::<Vec<_>>()
        .par_chunks(SOURCE_CHUNK)
        .map(|sources| {
            let mut acc = vec![0.0; n];
            for &s in sources {
                accumulate_source(g, s, &mut acc);
            }
            acc
        })
        .collect();
    let mut total = vec![0.0; n];
    for chunk in chunks {
        for (t, c) in total.iter_mut().zip(chunk) {
            *t += c;
        }
    }
    if !g.is_directed() {
        for t in &mut total {
            *t /= 2.0;
        }
    }
    total
}

fn accumulate_source(g: &dyn Topology, s: usize, acc: &mut [f64]) {
    let (paths, order) = bfs(g, s, true);
    let mut delta = vec![0.0; g.node_count()];
    for &w in order.iter().rev() {
        let dw = paths.dist[w].unwrap();
        // predecessors of w are its in-neighbours one level closer to s
        for &v in g.in_neighbors(w) {
            if paths.dist[v] == Some(dw.wrapping_sub(1)) && dw > 0 {
                delta[v] += paths.sigma[v] / paths.sigma[w] * (1.0 + delta[w]);
            }
        }
        if w != s {
            acc[w] += delta[w];
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenvectorOptions {
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for EigenvectorOptions {
    fn default() -> Self {
        EigenvectorOptions { tolerance: 1e-10, max_iterations: 1000 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenvectorCentrality {
    /// Unit-norm, non-negative.
    pub vector: Vec<f64>,
    pub eigenvalue: f64,
    pub iterations: usize,
    /// Set when several weakly connected components share the principal
    /// eigenvalue; the vector is then supported on the lowest-indexed one.
    pub tied_components: usize,
}

pub fn eigenvector_centrality(g: &dyn Topology) -> Result<EigenvectorCentrality, MetricsError> {
    eigenvector_centrality_with(g, EigenvectorOptions::default())
}

/// Power iteration on incoming links, `x_u <- sum_{v -> u} x_v`, run per weakly
/// connected component. The iteration uses the shifted operator `I + A^T` so
/// bipartite structure does not oscillate; the eigenvector is unchanged.
pub fn eigenvector_centrality_with(
    g: &dyn Topology,
    options: EigenvectorOptions,
) -> Result<EigenvectorCentrality, MetricsError> {
    let n = g.node_count();
    if g.edge_count() == 0 {
        return Err(MetricsError::NoEdges);
    }
    let components = weak_components(g);
    let mut best: Option<(f64, Result<(Vec<f64>, usize), usize>, usize)> = None;
    let mut ties = 1;
    for (ci, comp) in components.iter().enumerate().filter(|(_, c)| c.len() > 1) {
        let (lambda, outcome) = power_iterate(g, comp, options);
        match &best {
            None => best = Some((lambda, outcome, ci)),
            Some((best_lambda, _, _)) => {
                let scale = best_lambda.abs().max(lambda.abs()).max(1.0);
                if (lambda - best_lambda).abs() <= 1e-9 * scale {
                    ties += 1;
                } else if lambda > *best_lambda {
                    best = Some((lambda, outcome, ci));
                    ties = 1;
                }
            }
        }
    }
    let (eigenvalue, outcome, ci) = best.ok_or(MetricsError::NoEdges)?;
    let (local, iterations) = outcome.map_err(MetricsError::NoConvergence)?;
    let mut vector = vec![0.0; n];
    for (&u, &x) in components[ci].iter().zip(&local) {
        vector[u] = x;
    }
    Ok(EigenvectorCentrality {
        vector,
        eigenvalue,
        iterations,
        tied_components: if ties > 1 { ties } else { 0 },
    })
}

/// Returns the Rayleigh estimate and either `(local vector, iterations)` or the
/// iteration cap on failure.
fn power_iterate(
    g: &dyn Topology,
    comp: &[usize],
    options: EigenvectorOptions,
) -> (f64, Result<(Vec<f64>, usize), usize>) {
    let n = g.node_count();
    let mut local_index = vec![usize::MAX; n];
    for (i, &u) in comp.iter().enumerate() {
        local_index[u] = i;
    }
    let k = comp.len();
    let apply = |x: &[f64]| -> Vec<f64> {
        comp.iter()
            .map(|&u| g.in_neighbors(u).iter().map(|&v| x[local_index[v]]).sum())
            .collect()
    };
    let mut x = vec![1.0 / (k as f64).sqrt(); k];
    let mut converged = None;
    for it in 1..=options.max_iterations {
        let ax = apply(&x);
        let mut next: Vec<f64> = x.iter().zip(&ax).map(|(a, b)| a + b).collect();
        let norm = next.iter().map(|v| v * v).sum::<f64>().sqrt();
        for v in &mut next {
            *v /= norm;
        }
        let diff = next
            .iter()
            .zip(&x)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        x = next;
        if diff < options.tolerance {
            converged = Some(it);
            break;
        }
    }
    let ax = apply(&x);
    let lambda: f64 = x.iter().zip(&ax).map(|(a, b)| a * b).sum();
    match converged {
        Some(it) => (lambda, Ok((x, it))),
        None => (lambda, Err(options.max_iterations)),
    }
}

/// Weakly connected components, each sorted, ordered by smallest member.
fn weak_components(g: &dyn Topology) -> Vec<Vec<usize>> {
    let n = g.node_count();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut stack = vec![start];
        let mut comp = Vec::new();
        while let Some(v) = stack.pop() {
            comp.push(v);
            for &w in g.out_neighbors(v).iter().chain(g.in_neighbors(v)) {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}
