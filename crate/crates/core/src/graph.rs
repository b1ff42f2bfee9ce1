//! Weighted multigraphs and multidigraphs, and the matrices derived from them.
//!
//! Vertices are dense indices `0..n`. Undirected edges are stored once; the
//! weight matrix materializes the symmetry. Parallel edges and loops are
//! allowed and every weight is strictly positive.

use std::collections::{HashMap, VecDeque};

use nalgebra::DMatrix;

use crate::error::{ProximityError, Result};

/// One edge (or arc, when the graph is directed).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub tail: usize,
    pub head: usize,
    pub weight: f64,
}

impl Edge {
    pub fn new(tail: usize, head: usize, weight: f64) -> Self {
        Self { tail, head, weight }
    }

    pub fn is_loop(&self) -> bool {
        self.tail == self.head
    }

    /// Endpoint pair with the smaller index first.
    pub fn unordered(&self) -> (usize, usize) {
        (self.tail.min(self.head), self.tail.max(self.head))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightedMultigraph {
    n: usize,
    directed: bool,
    edges: Vec<Edge>,
}

impl WeightedMultigraph {
    pub fn new(n: usize, directed: bool, edges: Vec<Edge>) -> Result<Self> {
        if n == 0 {
            return Err(ProximityError::EmptyGraph);
        }
        for e in &edges {
            for v in [e.tail, e.head] {
                if v >= n {
                    return Err(ProximityError::VertexOutOfRange { vertex: v, n });
                }
            }
            if !(e.weight.is_finite() && e.weight > 0.0) {
                return Err(ProximityError::NonPositiveWeight(e.weight));
            }
        }
        Ok(Self { n, directed, edges })
    }

    pub fn undirected(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize, f64)>,
    ) -> Result<Self> {
        let edges = edges
            .into_iter()
            .map(|(u, v, w)| Edge::new(u, v, w))
            .collect();
        Self::new(n, false, edges)
    }

    pub fn directed(n: usize, arcs: impl IntoIterator<Item = (usize, usize, f64)>) -> Result<Self> {
        let edges = arcs
            .into_iter()
            .map(|(u, v, w)| Edge::new(u, v, w))
            .collect();
        Self::new(n, true, edges)
    }

    /// Graph on `n` vertices with no edges.
    pub fn edgeless(n: usize, directed: bool) -> Result<Self> {
        Self::new(n, directed, Vec::new())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn max_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.weight).fold(0.0, f64::max)
    }

    /// Largest number of parallel edges joining one pair of vertices
    /// (ordered pairs for digraphs). Zero for an edgeless graph.
    pub fn max_multiplicity(&self) -> usize {
        let mut counts: HashMap<(usize, usize), usize> = HashMap::new();
        for e in &self.edges {
            let key = if self.directed {
                (e.tail, e.head)
            } else {
                e.unordered()
            };
            *counts.entry(key).or_default() += 1;
        }
        counts.values().copied().max().unwrap_or(0)
    }

    /// Number of parallel edges from `tail` to `head` (either orientation when undirected).
    pub fn multiplicity(&self, tail: usize, head: usize) -> usize {
        self.edges
            .iter()
            .filter(|e| self.joins(e, tail, head))
            .count()
    }

    /// Indices of the edges joining `tail` to `head`.
    pub fn edges_between(&self, tail: usize, head: usize) -> Vec<usize> {
        self.edges
            .iter()
            .enumerate()
            .filter(|(_, e)| self.joins(e, tail, head))
            .map(|(i, _)| i)
            .collect()
    }

    fn joins(&self, e: &Edge, tail: usize, head: usize) -> bool {
        if self.directed {
            e.tail == tail && e.head == head
        } else {
            e.unordered() == (tail.min(head), tail.max(head))
        }
    }

    /// Matrix of total edge weights: entry `(i, j)` sums every edge from `i` to `j`.
    pub fn weight_matrix(&self) -> WeightMatrix {
        let mut m = DMatrix::zeros(self.n, self.n);
        for e in &self.edges {
            m[(e.tail, e.head)] += e.weight;
            if !self.directed && !e.is_loop() {
                m[(e.head, e.tail)] += e.weight;
            }
        }
        WeightMatrix(m)
    }

    /// Kirchhoff matrix; loops contribute nothing.
    pub fn laplacian(&self) -> Result<LaplacianMatrix> {
        if self.directed {
            return Err(ProximityError::DirectedUnsupported("the Laplacian matrix"));
        }
        let mut l = DMatrix::zeros(self.n, self.n);
        for e in self.edges.iter().filter(|e| !e.is_loop()) {
            let (u, v, w) = (e.tail, e.head, e.weight);
            l[(u, v)] -= w;
            l[(v, u)] -= w;
            l[(u, u)] += w;
            l[(v, v)] += w;
        }
        Ok(LaplacianMatrix(l))
    }

    /// Connected components, ignoring arc directions.
    pub fn components(&self) -> ComponentPartition {
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for e in &self.edges {
            let (a, b) = (find(&mut parent, e.tail), find(&mut parent, e.head));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
        let mut label_of_root = HashMap::new();
        let mut labels = vec![0; self.n];
        let mut parts: Vec<Vec<usize>> = Vec::new();
        for v in 0..self.n {
            let r = find(&mut parent, v);
            let label = *label_of_root.entry(r).or_insert_with(|| {
                parts.push(Vec::new());
                parts.len() - 1
            });
            labels[v] = label;
            parts[label].push(v);
        }
        ComponentPartition { labels, parts }
    }

    /// Multiplies every weight by `tau`.
    pub fn scale_weights(&self, tau: f64) -> Result<Self> {
        if !(tau.is_finite() && tau > 0.0) {
            return Err(ProximityError::NonPositiveScale(tau));
        }
        let edges = self
            .edges
            .iter()
            .map(|e| Edge::new(e.tail, e.head, e.weight * tau))
            .collect();
        Self::new(self.n, self.directed, edges)
    }

    /// Undirected graph with the same weight matrix as this symmetric digraph.
    ///
    /// Each unordered pair gets a single edge carrying the total weight.
    pub fn symmetrize(&self) -> Result<Self> {
        if !self.directed {
            return Ok(self.clone());
        }
        let e = self.weight_matrix().0;
        let scale = e.iter().fold(1.0_f64, |a, v| a.max(v.abs()));
        let mut edges = Vec::new();
        for i in 0..self.n {
            for j in i..self.n {
                let diff = (e[(i, j)] - e[(j, i)]).abs();
                if diff > 1e-12 * scale {
                    return Err(ProximityError::AsymmetricWeights {
                        row: i,
                        col: j,
                        diff,
                    });
                }
                if e[(i, j)] > 0.0 {
                    edges.push(Edge::new(i, j, e[(i, j)]));
                }
            }
        }
        Self::new(self.n, false, edges)
    }

    /// Reverses every arc; undirected graphs are returned unchanged.
    pub fn reversed(&self) -> Self {
        let edges = if self.directed {
            self.edges
                .iter()
                .map(|e| Edge::new(e.head, e.tail, e.weight))
                .collect()
        } else {
            self.edges.clone()
        };
        Self {
            n: self.n,
            directed: self.directed,
            edges,
        }
    }

    /// Copy with one more edge appended.
    pub fn with_edge(&self, tail: usize, head: usize, weight: f64) -> Result<Self> {
        let mut edges = self.edges.clone();
        edges.push(Edge::new(tail, head, weight));
        Self::new(self.n, self.directed, edges)
    }

    /// Copy with the weight of edge `index` increased by `delta`.
    pub fn with_weight_increase(&self, index: usize, delta: f64) -> Result<Self> {
        let mut edges = self.edges.clone();
        let edge = edges
            .get_mut(index)
            .ok_or(ProximityError::InvalidParameter(format!(
                "edge index {index} out of range"
            )))?;
        edge.weight += delta;
        Self::new(self.n, self.directed, edges)
    }

    /// Copy with the weight of edge `index` replaced.
    pub fn with_weight(&self, index: usize, weight: f64) -> Result<Self> {
        let mut edges = self.edges.clone();
        let edge = edges
            .get_mut(index)
            .ok_or(ProximityError::InvalidParameter(format!(
                "edge index {index} out of range"
            )))?;
        edge.weight = weight;
        Self::new(self.n, self.directed, edges)
    }

    /// Subgraph induced by `vertices`, relabelled `0..vertices.len()` in the given order.
    pub fn induced(&self, vertices: &[usize]) -> Self {
        let mut index = vec![usize::MAX; self.n];
        for (new, &old) in vertices.iter().enumerate() {
            index[old] = new;
        }
        let edges = self
            .edges
            .iter()
            .filter(|e| index[e.tail] != usize::MAX && index[e.head] != usize::MAX)
            .map(|e| Edge::new(index[e.tail], index[e.head], e.weight))
            .collect();
        Self {
            n: vertices.len(),
            directed: self.directed,
            edges,
        }
    }

    /// Outgoing steps `(edge index, neighbour)` for every vertex. Undirected
    /// edges appear under both endpoints; a loop appears once.
    pub fn steps(&self) -> Vec<Vec<(usize, usize)>> {
        let mut out = vec![Vec::new(); self.n];
        for (idx, e) in self.edges.iter().enumerate() {
            out[e.tail].push((idx, e.head));
            if !self.directed && !e.is_loop() {
                out[e.head].push((idx, e.tail));
            }
        }
        out
    }

    /// Vertices reachable from `source` (including itself).
    pub fn reachable_from(&self, source: usize) -> Vec<bool> {
        self.reachable_avoiding(source, None)
    }

    /// Vertices reachable from `source` along paths that never enter `blocked`.
    pub fn reachable_avoiding(&self, source: usize, blocked: Option<usize>) -> Vec<bool> {
        let steps = self.steps();
        let mut seen = vec![false; self.n];
        seen[source] = true;
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            for &(_, w) in &steps[u] {
                if Some(w) != blocked && !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        seen
    }

    /// Full reachability relation: entry `[i][j]` is true when a path leads from `i` to `j`.
    pub fn reachability(&self) -> Vec<Vec<bool>> {
        (0..self.n).map(|s| self.reachable_from(s)).collect()
    }

    /// True when there is a path from `i` to `k` and every path from `i` to `t`
    /// passes through `k` (vacuously so when `t` is unreachable from `i`).
    pub fn routes_through(&self, i: usize, k: usize, t: usize) -> bool {
        if i == k || k == t || i == t {
            return false;
        }
        self.reachable_from(i)[k] && !self.reachable_avoiding(i, Some(k))[t]
    }
}

macro_rules! matrix_newtype {
    ($(#[$doc:meta])* $name:ident) => {
        $(#[$doc])*
        #[derive(Debug, Clone, PartialEq)]
        pub struct $name(pub(crate) DMatrix<f64>);

        impl $name {
            pub fn as_matrix(&self) -> &DMatrix<f64> {
                &self.0
            }

            pub fn into_inner(self) -> DMatrix<f64> {
                self.0
            }
        }

        impl std::ops::Index<(usize, usize)> for $name {
            type Output = f64;

            fn index(&self, idx: (usize, usize)) -> &f64 {
                &self.0[idx]
            }
        }
    };
}

matrix_newtype!(
    /// Totals of parallel edge weights for every ordered pair of vertices.
    WeightMatrix
);
matrix_newtype!(
    /// Off-diagonal entries are minus the total edge weights; rows sum to zero.
    LaplacianMatrix
);
matrix_newtype!(
    /// Per-component uniform matrix: `1/|V_i|` inside the component of `i`, zero elsewhere.
    AveragingMatrix
);

/// Connected components of the underlying undirected graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentPartition {
    labels: Vec<usize>,
    parts: Vec<Vec<usize>>,
}

impl ComponentPartition {
    pub fn count(&self) -> usize {
        self.parts.len()
    }

    pub fn parts(&self) -> &[Vec<usize>] {
        &self.parts
    }

    pub fn component_of(&self, v: usize) -> usize {
        self.labels[v]
    }

    pub fn size_of_component_of(&self, v: usize) -> usize {
        self.parts[self.labels[v]].len()
    }

    pub fn same_component(&self, a: usize, b: usize) -> bool {
        self.labels[a] == self.labels[b]
    }

    pub fn averaging_matrix(&self) -> AveragingMatrix {
        let n = self.labels.len();
        AveragingMatrix(DMatrix::from_fn(n, n, |i, j| {
            if self.same_component(i, j) {
                1.0 / self.size_of_component_of(i) as f64
            } else {
                0.0
            }
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs;

    fn path_213() -> WeightedMultigraph {
        // centre vertex 0, leaves 1 and 2
        WeightedMultigraph::undirected(3, [(1, 0, 1.0), (0, 2, 1.0)]).unwrap()
    }

    #[test]
    fn weight_matrix_totals() {
        let k2 = WeightedMultigraph::undirected(2, [(0, 1, 1.0)]).unwrap();
        assert_eq!(
            k2.weight_matrix().0,
            DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0])
        );

        let par = WeightedMultigraph::undirected(2, [(0, 1, 0.2), (1, 0, 0.3)]).unwrap();
        let e = par.weight_matrix();
        assert_eq!(e[(0, 1)], 0.5);
        assert_eq!(e[(1, 0)], 0.5);

        let arc = WeightedMultigraph::directed(2, [(0, 1, 0.4)]).unwrap();
        let e = arc.weight_matrix();
        assert_eq!((e[(0, 1)], e[(1, 0)]), (0.4, 0.0));
    }

    #[test]
    fn laplacian_examples() {
        let l = path_213().laplacian().unwrap();
        let expected =
            DMatrix::from_row_slice(3, 3, &[2.0, -1.0, -1.0, -1.0, 1.0, 0.0, -1.0, 0.0, 1.0]);
        assert_eq!(l.0, expected);

        let empty = WeightedMultigraph::edgeless(3, false).unwrap();
        assert_eq!(max_abs(&empty.laplacian().unwrap().0), 0.0);

        let k2 = WeightedMultigraph::undirected(2, [(0, 1, 1.0)]).unwrap();
        let looped = k2.with_edge(0, 0, 5.0).unwrap();
        assert_eq!(k2.laplacian().unwrap(), looped.laplacian().unwrap());

        let arc = WeightedMultigraph::directed(2, [(0, 1, 1.0)]).unwrap();
        assert!(matches!(
            arc.laplacian(),
            Err(ProximityError::DirectedUnsupported(_))
        ));
    }

    #[test]
    fn averaging_matrix_examples() {
        let g = WeightedMultigraph::undirected(3, [(0, 1, 1.0)]).unwrap();
        let j = g.components().averaging_matrix();
        let expected =
            DMatrix::from_row_slice(3, 3, &[0.5, 0.5, 0.0, 0.5, 0.5, 0.0, 0.0, 0.0, 1.0]);
        assert_eq!(j.0, expected);

        let j = path_213().components().averaging_matrix();
        assert!(j.0.iter().all(|&v| (v - 1.0 / 3.0).abs() < 1e-15));

        let point = WeightedMultigraph::edgeless(1, false).unwrap();
        assert_eq!(
            point.components().averaging_matrix().0,
            DMatrix::from_element(1, 1, 1.0)
        );
    }

    #[test]
    fn averaging_matrix_identities() {
        let g = WeightedMultigraph::undirected(
            6,
            [
                (0, 1, 0.5),
                (1, 2, 2.0),
                (0, 2, 1.5),
                (3, 4, 0.7),
                (4, 4, 3.0),
            ],
        )
        .unwrap();
        let j = g.components().averaging_matrix().0;
        let l = g.laplacian().unwrap().0;
        assert!(max_abs(&(&j * &j - &j)) < 1e-12);
        assert!(max_abs(&(&j * &l)) < 1e-12);
        assert!(max_abs(&(&l * &j)) < 1e-12);
        for r in 0..6 {
            assert_eq!(l.row(r).sum(), 0.0);
        }
        assert_eq!(l, l.transpose());
    }

    #[test]
    fn scaling() {
        let g = WeightedMultigraph::undirected(2, [(0, 1, 0.2), (0, 1, 0.3)]).unwrap();
        assert_eq!(g.scale_weights(1.0).unwrap(), g);
        let s = g.scale_weights(0.1).unwrap();
        let w: Vec<f64> = s.edges().iter().map(|e| e.weight).collect();
        assert_eq!(w, vec![0.2 * 0.1, 0.3 * 0.1]);
        assert!((w[0] - 0.02).abs() < 1e-17 && (w[1] - 0.03).abs() < 1e-17);
        assert!(g.scale_weights(0.0).is_err());
        assert!(g.scale_weights(-1.0).is_err());

        let unweighted = WeightedMultigraph::undirected(3, [(0, 1, 1.0), (1, 2, 1.0)]).unwrap();
        let lifted = unweighted.scale_weights(0.5).unwrap();
        assert!(lifted.edges().iter().all(|e| e.weight == 0.5));
    }

    #[test]
    fn symmetrize_bridge() {
        let cyc = WeightedMultigraph::directed(2, [(0, 1, 0.3), (1, 0, 0.3)]).unwrap();
        let und = cyc.symmetrize().unwrap();
        assert!(!und.is_directed());
        assert_eq!(und.edges(), &[Edge::new(0, 1, 0.3)]);
        assert_eq!(und.weight_matrix(), cyc.weight_matrix());

        let und2 = und.symmetrize().unwrap();
        assert_eq!(und2.weight_matrix(), und.weight_matrix());

        let arc = WeightedMultigraph::directed(2, [(0, 1, 0.3)]).unwrap();
        assert!(matches!(
            arc.symmetrize(),
            Err(ProximityError::AsymmetricWeights { .. })
        ));
    }

    #[test]
    fn validation() {
        assert_eq!(
            WeightedMultigraph::edgeless(0, false),
            Err(ProximityError::EmptyGraph)
        );
        assert!(matches!(
            WeightedMultigraph::undirected(2, [(0, 2, 1.0)]),
            Err(ProximityError::VertexOutOfRange { vertex: 2, n: 2 })
        ));
        assert!(WeightedMultigraph::undirected(2, [(0, 1, 0.0)]).is_err());
        assert!(WeightedMultigraph::undirected(2, [(0, 1, f64::NAN)]).is_err());
    }

    #[test]
    fn through_vertex_hypothesis() {
        // chain 0 - 1 - 2
        let g = WeightedMultigraph::undirected(3, [(0, 1, 1.0), (1, 2, 1.0)]).unwrap();
        assert!(g.routes_through(0, 1, 2));
        assert!(!g.routes_through(1, 0, 2));
        let tri = g.with_edge(0, 2, 1.0).unwrap();
        assert!(!tri.routes_through(0, 1, 2));
    }

    #[test]
    fn multiplicity_counts() {
        let g = WeightedMultigraph::undirected(3, [(0, 1, 1.0), (1, 0, 1.0), (1, 2, 1.0)]).unwrap();
        assert_eq!(g.max_multiplicity(), 2);
        assert_eq!(g.multiplicity(1, 0), 2);
        let d = WeightedMultigraph::directed(2, [(0, 1, 1.0), (1, 0, 1.0)]).unwrap();
        assert_eq!(d.max_multiplicity(), 1);
    }
}
