//! Exponential-time exact references: simple paths and cycles, routes by
//! walk extension, spanning rooted forests by subset enumeration, and
//! connection reliability by summing over all edge states.
//!
//! These are deliberately brute force. They exist to validate the closed-form
//! kernels on small graphs and are bounded by [`OracleConfig`].

use nalgebra::DMatrix;

use crate::error::{ProximityError, Result};
use crate::graph::WeightedMultigraph;
use crate::linalg::CompensatedSum;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleConfig {
    /// Largest vertex count accepted by the forest census.
    pub max_forest_vertices: usize,
    /// Largest edge count accepted by the state enumeration (2^edges states).
    pub max_state_edges: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            max_forest_vertices: 8,
            max_state_edges: 16,
        }
    }
}

/// A simple path (or cycle) as a vertex sequence and the edges used between them.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplePath {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
    pub weight: f64,
}

/// Every simple path from `i` to `j`, parallel edges giving distinct paths.
///
/// For `i == j` only the trivial path of length zero is returned; see
/// [`enum_simple_cycles`] for closed paths.
pub fn enum_simple_paths(g: &WeightedMultigraph, i: usize, j: usize) -> Vec<SimplePath> {
    let mut out = Vec::new();
    if i == j {
        out.push(SimplePath {
            vertices: vec![i],
            edges: Vec::new(),
            weight: 1.0,
        });
        return out;
    }
    let steps = g.steps();
    let mut on_path = vec![false; g.n()];
    on_path[i] = true;
    let mut vertices = vec![i];
    let mut edges = Vec::new();
    extend_paths(
        g,
        &steps,
        j,
        &mut on_path,
        &mut vertices,
        &mut edges,
        &mut out,
    );
    out
}

fn extend_paths(
    g: &WeightedMultigraph,
    steps: &[Vec<(usize, usize)>],
    target: usize,
    on_path: &mut [bool],
    vertices: &mut Vec<usize>,
    edges: &mut Vec<usize>,
    out: &mut Vec<SimplePath>,
) {
    let u = *vertices.last().unwrap();
    for &(e, w) in &steps[u] {
        if on_path[w] {
            continue;
        }
        vertices.push(w);
        edges.push(e);
        if w == target {
            out.push(SimplePath {
                vertices: vertices.clone(),
                edges: edges.clone(),
                weight: edges.iter().map(|&x| g.edges()[x].weight).product(),
            });
        } else {
            on_path[w] = true;
            extend_paths(g, steps, target, on_path, vertices, edges, out);
            on_path[w] = false;
        }
        vertices.pop();
        edges.pop();
    }
}

/// Every simple cycle through `i` as a closed edge sequence starting at `i`.
///
/// Edges are pairwise distinct and intermediate vertices pairwise distinct.
/// In an undirected graph each cycle of length two or more is listed once per
/// orientation; a loop is listed once.
pub fn enum_simple_cycles(g: &WeightedMultigraph, i: usize) -> Vec<SimplePath> {
    let steps = g.steps();
    let mut out = Vec::new();
    for &(e, w) in &steps[i] {
        if w == i {
            out.push(SimplePath {
                vertices: vec![i, i],
                edges: vec![e],
                weight: g.edges()[e].weight,
            });
        }
    }
    // Closing a path i -> ... -> u with an edge back to i.
    let mut on_path = vec![false; g.n()];
    on_path[i] = true;
    let mut stack = vec![(vec![i], Vec::<usize>::new())];
    while let Some((vertices, edges)) = stack.pop() {
        let u = *vertices.last().unwrap();
        for &(e, w) in &steps[u] {
            if w == i && u != i && !edges.contains(&e) {
                let mut cv = vertices.clone();
                cv.push(i);
                let mut ce = edges.clone();
                ce.push(e);
                let weight = ce.iter().map(|&x| g.edges()[x].weight).product();
                out.push(SimplePath {
                    vertices: cv,
                    edges: ce,
                    weight,
                });
            } else if w != i && !vertices.contains(&w) {
                let mut nv = vertices.clone();
                nv.push(w);
                let mut ne = edges.clone();
                ne.push(e);
                stack.push((nv, ne));
            }
        }
    }
    let _ = on_path;
    out
}

/// Total route (walk) weight from `i` to `j` for every length `0..=maxlen`,
/// obtained by extending walks one edge at a time.
pub fn enum_routes(g: &WeightedMultigraph, i: usize, j: usize, maxlen: usize) -> Vec<f64> {
    let steps = g.steps();
    let mut frontier = vec![0.0; g.n()];
    frontier[i] = 1.0;
    let mut totals = vec![frontier[j]];
    for _ in 0..maxlen {
        let mut next = vec![0.0; g.n()];
        for (v, &wv) in frontier.iter().enumerate() {
            if wv == 0.0 {
                continue;
            }
            for &(e, u) in &steps[v] {
                next[u] += wv * g.edges()[e].weight;
            }
        }
        totals.push(next[j]);
        frontier = next;
    }
    totals
}

/// Weights of spanning rooted forests grouped by edge count.
///
/// `total(k)` is the weight of all rooted forests with `k` edges; `pair(k, i, j)`
/// restricts to those in which `j` lies in the tree rooted at `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct ForestCensus {
    n: usize,
    components: usize,
    totals: Vec<f64>,
    pairs: Vec<DMatrix<f64>>,
    forests_visited: usize,
}

impl ForestCensus {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of connected components `v`; forests have at most `n - v` edges.
    pub fn components(&self) -> usize {
        self.components
    }

    pub fn max_edges(&self) -> usize {
        self.n - self.components
    }

    pub fn total(&self, k: usize) -> f64 {
        self.totals.get(k).copied().unwrap_or(0.0)
    }

    pub fn totals(&self) -> &[f64] {
        &self.totals
    }

    pub fn pair(&self, k: usize, i: usize, j: usize) -> f64 {
        self.pairs.get(k).map_or(0.0, |m| m[(i, j)])
    }

    pub fn pair_matrix(&self, k: usize) -> &DMatrix<f64> {
        &self.pairs[k]
    }

    /// Weight of the whole set of spanning rooted forests.
    pub fn total_weight(&self) -> f64 {
        self.totals.iter().sum()
    }

    /// Unrooted forests enumerated (including the edgeless one).
    pub fn forests_visited(&self) -> usize {
        self.forests_visited
    }

    /// `sum_k tau^k total(k)`.
    pub fn total_polynomial(&self, tau: f64) -> f64 {
        self.totals.iter().rev().fold(0.0, |acc, &c| acc * tau + c)
    }

    /// Ratio of forest weights with edges scaled by `tau`, entry `(i, j)`.
    pub fn ratio(&self, i: usize, j: usize, tau: f64) -> f64 {
        let num = self
            .pairs
            .iter()
            .rev()
            .fold(0.0, |acc, m| acc * tau + m[(i, j)]);
        num / self.total_polynomial(tau)
    }

    pub fn ratio_matrix(&self, tau: f64) -> DMatrix<f64> {
        DMatrix::from_fn(self.n, self.n, |i, j| self.ratio(i, j, tau))
    }
}

/// Exhaustive census of spanning rooted forests of an undirected multigraph.
pub fn enum_rooted_forests(g: &WeightedMultigraph, cfg: &OracleConfig) -> Result<ForestCensus> {
    if g.is_directed() {
        return Err(ProximityError::DirectedUnsupported(
            "the rooted forest census",
        ));
    }
    let n = g.n();
    if n > cfg.max_forest_vertices {
        return Err(ProximityError::CapExceeded {
            what: "vertex count for the forest census",
            limit: cfg.max_forest_vertices,
            actual: n,
        });
    }
    let components = g.components().count();
    let kmax = n - components;
    let mut acc = CensusAccumulator {
        n,
        totals: vec![CompensatedSum::default(); kmax + 1],
        pairs: vec![vec![CompensatedSum::default(); n * n]; kmax + 1],
        visited: 0,
    };
    let edges: Vec<(usize, usize, f64)> = g
        .edges()
        .iter()
        .filter(|e| !e.is_loop())
        .map(|e| (e.tail, e.head, e.weight))
        .collect();
    let labels: Vec<usize> = (0..n).collect();
    grow_forests(&edges, 0, &labels, 1.0, 0, &mut acc);

    let totals = acc.totals.iter().map(CompensatedSum::value).collect();
    let pairs = acc
        .pairs
        .iter()
        .map(|p| DMatrix::from_fn(n, n, |i, j| p[i * n + j].value()))
        .collect();
    Ok(ForestCensus {
        n,
        components,
        totals,
        pairs,
        forests_visited: acc.visited,
    })
}

struct CensusAccumulator {
    n: usize,
    totals: Vec<CompensatedSum>,
    pairs: Vec<Vec<CompensatedSum>>,
    visited: usize,
}

impl CensusAccumulator {
    fn record(&mut self, labels: &[usize], weight: f64, k: usize) {
        self.visited += 1;
        let n = self.n;
        let mut size = vec![0usize; n];
        for &l in labels {
            size[l] += 1;
        }
        // Every tree picks one root: the rooted copies of this forest.
        let roots: usize = size.iter().filter(|&&s| s > 0).product();
        self.totals[k].add(weight * roots as f64);
        for i in 0..n {
            let tree = labels[i];
            // i is the root of its tree; the other trees choose roots freely.
            let others = (roots / size[tree]) as f64;
            for j in 0..n {
                if labels[j] == tree {
                    self.pairs[k][i * n + j].add(weight * others);
                }
            }
        }
    }
}

fn grow_forests(
    edges: &[(usize, usize, f64)],
    start: usize,
    labels: &[usize],
    weight: f64,
    k: usize,
    acc: &mut CensusAccumulator,
) {
    acc.record(labels, weight, k);
    for (idx, &(u, v, w)) in edges.iter().enumerate().skip(start) {
        let (a, b) = (labels[u], labels[v]);
        if a == b {
            continue;
        }
        let merged: Vec<usize> = labels.iter().map(|&l| if l == b { a } else { l }).collect();
        grow_forests(edges, idx + 1, &merged, weight * w, k + 1, acc);
    }
}

fn check_state_graph(g: &WeightedMultigraph, cfg: &OracleConfig) -> Result<()> {
    if g.edge_count() > cfg.max_state_edges {
        return Err(ProximityError::CapExceeded {
            what: "edge count for state enumeration",
            limit: cfg.max_state_edges,
            actual: g.edge_count(),
        });
    }
    if let Some(e) = g.edges().iter().find(|e| e.weight > 1.0) {
        return Err(ProximityError::ProbabilityOutOfRange(e.weight));
    }
    Ok(())
}

/// Probability that `j` is reachable from `i` when every edge survives
/// independently with probability equal to its weight.
pub fn reliability_by_states(
    g: &WeightedMultigraph,
    i: usize,
    j: usize,
    cfg: &OracleConfig,
) -> Result<f64> {
    check_state_graph(g, cfg)?;
    if i == j {
        return Ok(1.0);
    }
    let m = g.edge_count();
    let mut sum = CompensatedSum::default();
    for state in 0u64..(1u64 << m) {
        let reach = reach_in_state(g, state, i);
        if reach[j] {
            sum.add(state_probability(g, state));
        }
    }
    Ok(sum.value())
}

/// [`reliability_by_states`] for every ordered pair at once.
pub fn reliability_matrix_by_states(
    g: &WeightedMultigraph,
    cfg: &OracleConfig,
) -> Result<DMatrix<f64>> {
    check_state_graph(g, cfg)?;
    let n = g.n();
    let m = g.edge_count();
    let mut sums = vec![CompensatedSum::default(); n * n];
    for state in 0u64..(1u64 << m) {
        let prob = state_probability(g, state);
        for s in 0..n {
            let reach = reach_in_state(g, state, s);
            for (t, &r) in reach.iter().enumerate() {
                if r && t != s {
                    sums[s * n + t].add(prob);
                }
            }
        }
    }
    Ok(DMatrix::from_fn(n, n, |a, b| {
        if a == b {
            1.0
        } else {
            sums[a * n + b].value()
        }
    }))
}

fn state_probability(g: &WeightedMultigraph, state: u64) -> f64 {
    g.edges()
        .iter()
        .enumerate()
        .map(|(idx, e)| {
            if state >> idx & 1 == 1 {
                e.weight
            } else {
                1.0 - e.weight
            }
        })
        .product()
}

fn reach_in_state(g: &WeightedMultigraph, state: u64, source: usize) -> Vec<bool> {
    let n = g.n();
    let mut seen = vec![false; n];
    seen[source] = true;
    let mut stack = vec![source];
    while let Some(u) = stack.pop() {
        for (idx, e) in g.edges().iter().enumerate() {
            if state >> idx & 1 == 0 {
                continue;
            }
            let next = if e.tail == u {
                Some(e.head)
            } else if !g.is_directed() && e.head == u {
                Some(e.tail)
            } else {
                None
            };
            if let Some(w) = next {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
    }
    seen
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> WeightedMultigraph {
        WeightedMultigraph::undirected(3, [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)]).unwrap()
    }

    #[test]
    fn triangle_paths() {
        let paths = enum_simple_paths(&triangle(), 0, 1);
        let mut seqs: Vec<Vec<usize>> = paths.iter().map(|p| p.vertices.clone()).collect();
        seqs.sort();
        assert_eq!(seqs, vec![vec![0, 1], vec![0, 2, 1]]);
        assert_eq!(paths.iter().map(|p| p.weight).sum::<f64>(), 2.0);
    }

    #[test]
    fn single_edge_and_disconnected_paths() {
        let k2 = WeightedMultigraph::undirected(2, [(0, 1, 0.3)]).unwrap();
        let paths = enum_simple_paths(&k2, 0, 1);
        assert_eq!(paths.len(), 1);
        assert_eq!(paths[0].weight, 0.3);

        let split = WeightedMultigraph::undirected(4, [(0, 1, 1.0), (2, 3, 1.0)]).unwrap();
        assert!(enum_simple_paths(&split, 0, 3).is_empty());
    }

    #[test]
    fn cycles_count_orientations_and_parallel_edges() {
        let par = WeightedMultigraph::undirected(2, [(0, 1, 0.2), (0, 1, 0.3)]).unwrap();
        let cycles = enum_simple_cycles(&par, 0);
        assert_eq!(cycles.len(), 2);
        let total: f64 = cycles.iter().map(|c| c.weight).sum();
        assert!((total - 0.12).abs() < 1e-15);

        let k2 = WeightedMultigraph::undirected(2, [(0, 1, 0.3)]).unwrap();
        assert!(enum_simple_cycles(&k2, 0).is_empty());

        assert_eq!(enum_simple_cycles(&triangle(), 0).len(), 2);

        let looped = WeightedMultigraph::undirected(1, [(0, 0, 0.5)]).unwrap();
        assert_eq!(enum_simple_cycles(&looped, 0).len(), 1);

        let dcyc =
            WeightedMultigraph::directed(3, [(0, 1, 1.0), (1, 2, 1.0), (2, 0, 1.0)]).unwrap();
        assert_eq!(enum_simple_cycles(&dcyc, 0).len(), 1);
    }

    #[test]
    fn route_totals_by_length() {
        let k2 = WeightedMultigraph::undirected(2, [(0, 1, 0.5)]).unwrap();
        let t = enum_routes(&k2, 0, 0, 4);
        assert_eq!(t, vec![1.0, 0.0, 0.25, 0.0, 0.0625]);
        assert_eq!(enum_routes(&k2, 0, 1, 0), vec![0.0]);

        let arc = WeightedMultigraph::directed(2, [(0, 1, 0.7)]).unwrap();
        assert_eq!(enum_routes(&arc, 0, 1, 3), vec![0.0, 0.7, 0.0, 0.0]);
    }

    #[test]
    fn forest_census_of_small_path() {
        // path 2 - 1 - 3 with centre at index 0
        let g = WeightedMultigraph::undirected(3, [(1, 0, 1.0), (0, 2, 1.0)]).unwrap();
        let c = enum_rooted_forests(&g, &OracleConfig::default()).unwrap();
        assert_eq!(c.totals(), &[1.0, 4.0, 3.0]);
        assert_eq!(c.total_weight(), 8.0);
    }

    #[test]
    fn forest_census_of_k2() {
        let g = WeightedMultigraph::undirected(2, [(0, 1, 1.0)]).unwrap();
        let c = enum_rooted_forests(&g, &OracleConfig::default()).unwrap();
        assert_eq!(c.total_weight(), 3.0);
        let f11: f64 = (0..=c.max_edges()).map(|k| c.pair(k, 0, 0)).sum();
        let f12: f64 = (0..=c.max_edges()).map(|k| c.pair(k, 0, 1)).sum();
        assert_eq!((f11, f12), (2.0, 1.0));
    }

    #[test]
    fn forest_census_rejects_large_or_directed() {
        let big = WeightedMultigraph::edgeless(9, false).unwrap();
        assert!(matches!(
            enum_rooted_forests(&big, &OracleConfig::default()),
            Err(ProximityError::CapExceeded { .. })
        ));
        let arc = WeightedMultigraph::directed(2, [(0, 1, 1.0)]).unwrap();
        assert!(enum_rooted_forests(&arc, &OracleConfig::default()).is_err());
    }

    #[test]
    fn state_enumeration_examples() {
        let cfg = OracleConfig::default();
        let par = WeightedMultigraph::undirected(2, [(0, 1, 0.5), (0, 1, 0.5)]).unwrap();
        assert_eq!(reliability_by_states(&par, 0, 1, &cfg).unwrap(), 0.75);

        let (p, q) = (0.3, 0.6);
        let series = WeightedMultigraph::undirected(3, [(0, 1, p), (1, 2, q)]).unwrap();
        let r = reliability_by_states(&series, 0, 2, &cfg).unwrap();
        assert!((r - p * q).abs() < 1e-15);

        assert_eq!(reliability_by_states(&series, 1, 1, &cfg).unwrap(), 1.0);

        let heavy = WeightedMultigraph::undirected(2, [(0, 1, 1.5)]).unwrap();
        assert_eq!(
            reliability_by_states(&heavy, 0, 1, &cfg),
            Err(ProximityError::ProbabilityOutOfRange(1.5))
        );
        let many = WeightedMultigraph::undirected(2, vec![(0, 1, 0.5); 17]).unwrap();
        assert!(matches!(
            reliability_by_states(&many, 0, 1, &cfg),
            Err(ProximityError::CapExceeded { .. })
        ));
    }

    #[test]
    fn state_matrix_respects_direction() {
        let arc = WeightedMultigraph::directed(2, [(0, 1, 0.4)]).unwrap();
        let m = reliability_matrix_by_states(&arc, &OracleConfig::default()).unwrap();
        assert!((m[(0, 1)] - 0.4).abs() < 1e-15);
        assert_eq!(m[(1, 0)], 0.0);
    }
}
