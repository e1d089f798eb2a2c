//! Maximum independent set instances: random generation, QUBO encoding,
//! feasibility checks and an exact branch-and-bound oracle for small graphs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qubo::{Assignment, QuboMatrix};

/// Largest graph accepted by [`brute_force_mis`].
pub const MAX_EXACT_NODES: usize = 30;

/// Undirected simple graph with edges stored once as sorted `(u, v)`, `u < v`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MisGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl MisGraph {
    /// Normalizes orientation and order; rejects self-loops, duplicates and
    /// out-of-range endpoints.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut out = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(Error::IndexOutOfRange { index: w, n });
                }
            }
            if u == v {
                return Err(Error::InvalidConfig(format!("self-loop on node {u}")));
            }
            out.push((u.min(v), u.max(v)));
        }
        out.sort_unstable();
        if let Some(w) = out.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidConfig(format!("duplicate edge {:?}", w[0])));
        }
        Ok(Self { n, edges: out })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Neighborhoods as bitmasks; only valid for `n ≤ 64`.
    fn adjacency_masks(&self) -> Vec<u64> {
        let mut adj = vec![0u64; self.n];
        for &(u, v) in &self.edges {
            adj[u] |= 1 << v;
            adj[v] |= 1 << u;
        }
        adj
    }
}

/// Erdős–Rényi `G(n, p = density)`.
///
/// Pairs are visited in lexicographic order `(0,1), (0,2), …, (n-2,n-1)`;
/// each is kept when a `f64` drawn from `ChaCha8Rng::seed_from_u64(seed)` is
/// below `density`.
pub fn generate_mis_graph(n: usize, density: f64, seed: u64) -> Result<MisGraph> {
    if !(0.0..=1.0).contains(&density) {
        return Err(Error::InvalidDensity(density));
    }
    if n == 0 {
        return Err(Error::InvalidConfig("graph needs at least one node".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen::<f64>() < density {
                edges.push((u, v));
            }
        }
    }
    Ok(MisGraph { n, edges })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MisQuboParams {
    pub lambda: i64,
}

impl Default for MisQuboParams {
    fn default() -> Self {
        Self { lambda: 8 }
    }
}

/// `q_uu = -1`, `q_uv = λ` for every edge.
pub fn mis_to_qubo(g: &MisGraph, params: MisQuboParams) -> Result<QuboMatrix> {
    if params.lambda < 2 {
        return Err(Error::InvalidConfig(format!("penalty λ = {} must be at least 2", params.lambda)));
    }
    let mut entries: Vec<(usize, usize, i64)> = (0..g.n).map(|u| (u, u, -1)).collect();
    entries.extend(g.edges.iter().map(|&(u, v)| (u, v, params.lambda)));
    QuboMatrix::from_entries(g.n, &entries)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Feasibility {
    pub feasible: bool,
    pub violations: usize,
}

/// Counts edges with both endpoints selected.
pub fn check_independent(g: &MisGraph, x: &Assignment) -> Result<Feasibility> {
    if x.len() != g.n {
        return Err(Error::LengthMismatch { expected: g.n, actual: x.len() });
    }
    let violations = g.edges.iter().filter(|&&(u, v)| x.get(u) && x.get(v)).count();
    Ok(Feasibility { feasible: violations == 0, violations })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MisSolution {
    pub size: usize,
    pub witness: Assignment,
}

/// Exact maximum independent set by branch and bound.
///
/// Branches on the highest-degree vertex of the remaining subgraph: exclude
/// it, or include it and delete its closed neighborhood. A branch is pruned
/// when its size plus the remaining vertex count cannot beat the incumbent.
pub fn brute_force_mis(g: &MisGraph) -> Result<MisSolution> {
    if g.n > MAX_EXACT_NODES {
        return Err(Error::TooLarge { n: g.n, max: MAX_EXACT_NODES });
    }
    let adj = g.adjacency_masks();
    let all = if g.n == 0 { 0 } else { u64::MAX >> (64 - g.n) };
    let mut best = (0u32, 0u64);
    branch(&adj, all, 0, &mut best);
    let witness = Assignment::from((0..g.n).map(|i| best.1 >> i & 1 == 1).collect::<Vec<_>>());
    Ok(MisSolution { size: best.0 as usize, witness })
}

fn branch(adj: &[u64], remaining: u64, chosen: u64, best: &mut (u32, u64)) {
    let size = chosen.count_ones();
    if size + remaining.count_ones() <= best.0 {
        return;
    }
    let mut pivot = None;
    let mut max_deg = 0;
    let mut rest = remaining;
    while rest != 0 {
        let v = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        let deg = (adj[v] & remaining).count_ones();
        if deg > max_deg {
            max_deg = deg;
            pivot = Some(v);
        }
    }
    let Some(v) = pivot else {
        // No edges left: every remaining vertex joins.
        let set = chosen | remaining;
        if set.count_ones() > best.0 {
            *best = (set.count_ones(), set);
        }
        return;
    };
    let bit = 1u64 << v;
    branch(adj, remaining & !bit & !adj[v], chosen | bit, best);
    branch(adj, remaining & !bit, chosen, best);
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete(n: usize) -> MisGraph {
        generate_mis_graph(n, 1.0, 0).unwrap()
    }

    fn cycle(n: usize) -> MisGraph {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        MisGraph::from_edges(n, &edges).unwrap()
    }

    /// Exhaustive subset enumeration.
    fn enumerate_mis(g: &MisGraph) -> usize {
        let adj = g.adjacency_masks();
        (0u64..1 << g.n())
            .filter(|&s| (0..g.n()).all(|v| s >> v & 1 == 0 || adj[v] & s == 0))
            .map(|s| s.count_ones() as usize)
            .max()
            .unwrap()
    }

    #[test]
    fn generator_extremes() {
        assert!(generate_mis_graph(10, 0.0, 1).unwrap().edges().is_empty());
        assert_eq!(complete(10).edges().len(), 45);
        assert!(matches!(generate_mis_graph(5, 1.5, 0), Err(Error::InvalidDensity(_))));
        assert!(generate_mis_graph(5, -0.1, 0).is_err());
        assert!(generate_mis_graph(0, 0.5, 0).is_err());
    }

    #[test]
    fn generator_edge_count_within_three_sigma() {
        let g = generate_mis_graph(100, 0.15, 0).unwrap();
        let mean = 0.15 * 4950.0;
        let sigma = (4950.0f64 * 0.15 * 0.85).sqrt();
        assert!((g.edges().len() as f64 - mean).abs() <= 3.0 * sigma);
    }

    #[test]
    fn generator_is_deterministic() {
        assert_eq!(generate_mis_graph(40, 0.3, 7).unwrap(), generate_mis_graph(40, 0.3, 7).unwrap());
        assert_ne!(generate_mis_graph(40, 0.3, 7).unwrap(), generate_mis_graph(40, 0.3, 8).unwrap());
    }

    #[test]
    fn triangle_encoding() {
        let q = mis_to_qubo(&complete(3), MisQuboParams { lambda: 2 }).unwrap();
        assert_eq!(q.diag(), &[-1, -1, -1]);
        assert_eq!(q.offdiag(), &[(0, 1, 2), (0, 2, 2), (1, 2, 2)]);
        assert!(mis_to_qubo(&complete(3), MisQuboParams { lambda: 1 }).is_err());
    }

    #[test]
    fn edgeless_optimum_is_all_ones() {
        let g = generate_mis_graph(6, 0.0, 0).unwrap();
        let q = mis_to_qubo(&g, MisQuboParams::default()).unwrap();
        assert_eq!(q.evaluate_cost(&Assignment::ones(6)).unwrap(), -6);
        assert_eq!(q.nnz(), 6);
    }

    #[test]
    fn independence_checks() {
        let tri = complete(3);
        assert_eq!(
            check_independent(&tri, &Assignment::zeros(3)).unwrap(),
            Feasibility { feasible: true, violations: 0 }
        );
        assert_eq!(
            check_independent(&tri, &Assignment::ones(3)).unwrap(),
            Feasibility { feasible: false, violations: 3 }
        );
        assert!(check_independent(&tri, &Assignment::zeros(2)).is_err());
    }

    #[test]
    fn violations_match_cost_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for seed in 0..20 {
            let g = generate_mis_graph(25, 0.3, seed).unwrap();
            let lambda = 8;
            let q = mis_to_qubo(&g, MisQuboParams { lambda }).unwrap();
            let x = Assignment::from((0..25).map(|_| rng.gen::<bool>()).collect::<Vec<_>>());
            let cost = q.evaluate_cost(&x).unwrap();
            let violations = check_independent(&g, &x).unwrap().violations as i64;
            assert_eq!((cost + x.count_ones() as i64) / (2 * lambda), violations);
            assert_eq!((cost + x.count_ones() as i64) % (2 * lambda), 0);
        }
    }

    #[test]
    fn oracle_small_cases() {
        assert_eq!(brute_force_mis(&generate_mis_graph(5, 0.0, 0).unwrap()).unwrap().size, 5);
        assert_eq!(brute_force_mis(&complete(5)).unwrap().size, 1);
        assert_eq!(brute_force_mis(&cycle(5)).unwrap().size, 2);
        assert!(matches!(
            brute_force_mis(&generate_mis_graph(31, 0.1, 0).unwrap()),
            Err(Error::TooLarge { n: 31, max: 30 })
        ));
    }

    #[test]
    fn oracle_matches_enumeration() {
        for seed in 0..40 {
            let n = 4 + (seed as usize % 13);
            let g = generate_mis_graph(n, [0.1, 0.3, 0.6][seed as usize % 3], seed).unwrap();
            let sol = brute_force_mis(&g).unwrap();
            assert_eq!(sol.size, enumerate_mis(&g));
            assert!(check_independent(&g, &sol.witness).unwrap().feasible);
            assert_eq!(sol.witness.count_ones(), sol.size);
        }
    }

    #[test]
    fn encoding_minima_are_maximum_independent_sets() {
        for seed in 0..6 {
            let g = generate_mis_graph(12, 0.35, seed).unwrap();
            let opt = brute_force_mis(&g).unwrap().size as i64;
            for lambda in [2, 8] {
                let q = mis_to_qubo(&g, MisQuboParams { lambda }).unwrap();
                let costs: Vec<(i64, Assignment)> = (0u32..1 << 12)
                    .map(|s| {
                        let x = Assignment::from((0..12).map(|i| s >> i & 1 == 1).collect::<Vec<_>>());
                        (q.evaluate_cost(&x).unwrap(), x)
                    })
                    .collect();
                let min = costs.iter().map(|c| c.0).min().unwrap();
                assert_eq!(min, -opt);
                for (c, x) in &costs {
                    if *c == min {
                        assert!(check_independent(&g, x).unwrap().feasible);
                    }
                }
            }
        }
    }

    #[test]
    fn graph_validation() {
        assert!(MisGraph::from_edges(3, &[(0, 0)]).is_err());
        assert!(MisGraph::from_edges(3, &[(0, 1), (1, 0)]).is_err());
        assert!(MisGraph::from_edges(3, &[(0, 3)]).is_err());
        assert_eq!(MisGraph::from_edges(3, &[(2, 0)]).unwrap().edges(), &[(0, 2)]);
    }
}
