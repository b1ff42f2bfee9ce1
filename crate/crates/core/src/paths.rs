//! Path accessibility and connection reliability.

use std::collections::BTreeMap;

use nalgebra::DMatrix;

use crate::error::{ProximityError, Result};
use crate::graph::WeightedMultigraph;
use crate::linalg::sorted_sum;
use crate::measure::{MeasureKind, ProximityMatrix};

/// Positive root in `eps` of `sum_{k=1}^{n-1} A(n-2, k-1) (eps m)^k = 1`,
/// where `A(a, b)` counts arrangements of `b` out of `a` items.
///
/// Below this weight every path accessibility off the diagonal stays under 1.
pub fn epsilon0(n: usize, m: usize) -> f64 {
    assert!(n >= 2 && m >= 1, "epsilon0 needs n >= 2 and m >= 1");
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    // The polynomial in x = eps * m is increasing and reaches >= 1 at x = 1.
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if epsilon0_polynomial(n, mid) < 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi) / m as f64
}

/// `sum_{k=1}^{n-1} A(n-2, k-1) x^k`.
pub fn epsilon0_polynomial(n: usize, x: f64) -> f64 {
    let mut term = x;
    let mut total = 0.0;
    for k in 1..n {
        total += term;
        term *= (n - 1 - k) as f64 * x;
    }
    total
}

/// What the diagonal of path accessibility counts besides the empty path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Diagonal {
    /// `1 +` the total weight of simple cycles through the vertex.
    #[default]
    CyclesAndTrivial,
    /// Only the path of length zero, so every diagonal entry is 1.
    TrivialOnly,
}

/// How undirected cycles of length two or more are counted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CycleOrientation {
    /// Once per direction of traversal.
    #[default]
    Both,
    /// Once per edge set.
    Once,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PathOptions {
    pub diagonal: Diagonal,
    pub orientation: CycleOrientation,
}

impl PathOptions {
    pub fn trivial_diagonal() -> Self {
        Self {
            diagonal: Diagonal::TrivialOnly,
            ..Self::default()
        }
    }

    pub fn cycles_once() -> Self {
        Self {
            orientation: CycleOrientation::Once,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReliabilityOptions {
    /// Largest number of simple paths per ordered pair for inclusion-exclusion.
    pub max_paths: usize,
}

impl Default for ReliabilityOptions {
    fn default() -> Self {
        Self { max_paths: 20 }
    }
}

/// Largest parallel-edge count and the corresponding `epsilon0`, or `None` for
/// a single vertex.
fn admissible_bound(g: &WeightedMultigraph) -> Option<f64> {
    (g.n() >= 2).then(|| epsilon0(g.n(), g.max_multiplicity().max(1)))
}

/// Total weight of simple paths between every ordered pair of vertices.
pub fn path_accessibility(g: &WeightedMultigraph, opts: &PathOptions) -> ProximityMatrix {
    let n = g.n();
    let steps = g.steps();
    let weights: Vec<f64> = g.edges().iter().map(|e| e.weight).collect();
    let mut p = DMatrix::zeros(n, n);
    for i in 0..n {
        let mut walker = PathWalker {
            steps: &steps,
            weights: &weights,
            source: i,
            on_path: vec![false; n],
            reach: vec![0.0; n],
            loops: 0.0,
            cycles: 0.0,
        };
        walker.on_path[i] = true;
        walker.visit(i, 1.0, None, 0);
        for j in 0..n {
            p[(i, j)] = walker.reach[j];
        }
        let cycles = match (opts.orientation, g.is_directed()) {
            (CycleOrientation::Once, false) => walker.cycles / 2.0,
            _ => walker.cycles,
        };
        p[(i, i)] = match opts.diagonal {
            Diagonal::CyclesAndTrivial => 1.0 + walker.loops + cycles,
            Diagonal::TrivialOnly => 1.0,
        };
    }
    let mut out = ProximityMatrix::new(MeasureKind::Paths, p);
    if let Some(bound) = admissible_bound(g) {
        out = out.with_param("epsilon0", bound);
        if g.max_weight() >= bound {
            out = out.with_warning(format!(
                "maximum edge weight {} is not below epsilon0 = {bound}",
                g.max_weight()
            ));
        }
    }
    out
}

struct PathWalker<'a> {
    steps: &'a [Vec<(usize, usize)>],
    weights: &'a [f64],
    source: usize,
    on_path: Vec<bool>,
    reach: Vec<f64>,
    loops: f64,
    cycles: f64,
}

impl PathWalker<'_> {
    fn visit(&mut self, u: usize, weight: f64, first_edge: Option<usize>, depth: usize) {
        for &(e, w) in &self.steps[u] {
            let ew = weight * self.weights[e];
            if w == self.source {
                if u == self.source {
                    self.loops += ew;
                } else if depth > 1 || first_edge != Some(e) {
                    self.cycles += ew;
                }
                continue;
            }
            if self.on_path[w] {
                continue;
            }
            self.reach[w] += ew;
            self.on_path[w] = true;
            self.visit(w, ew, first_edge.or(Some(e)), depth + 1);
            self.on_path[w] = false;
        }
    }
}

/// Edge sets of the simple paths from `i` to `j`, as bitmasks over edge indices.
fn path_masks(g: &WeightedMultigraph, i: usize, j: usize, cap: usize) -> Result<Vec<u128>> {
    let steps = g.steps();
    let mut out = Vec::new();
    let mut on_path = vec![false; g.n()];
    on_path[i] = true;
    collect_masks(&steps, i, j, 0, &mut on_path, &mut out, cap)?;
    Ok(out)
}

fn collect_masks(
    steps: &[Vec<(usize, usize)>],
    u: usize,
    target: usize,
    mask: u128,
    on_path: &mut [bool],
    out: &mut Vec<u128>,
    cap: usize,
) -> Result<()> {
    for &(e, w) in &steps[u] {
        if on_path[w] {
            continue;
        }
        let next = mask | 1u128 << e;
        if w == target {
            out.push(next);
            if out.len() > cap {
                return Err(ProximityError::CapExceeded {
                    what: "simple paths per vertex pair",
                    limit: cap,
                    actual: out.len(),
                });
            }
        } else {
            on_path[w] = true;
            collect_masks(steps, w, target, next, on_path, out, cap)?;
            on_path[w] = false;
        }
    }
    Ok(())
}

/// Probability that an intact path joins each ordered pair when every edge is
/// intact independently with probability equal to its weight.
///
/// Inclusion-exclusion over the simple paths of each pair; subsets with the same
/// edge union are merged so only distinct unions are evaluated.
pub fn connection_reliability(
    g: &WeightedMultigraph,
    opts: &ReliabilityOptions,
) -> Result<ProximityMatrix> {
    if let Some(e) = g.edges().iter().find(|e| e.weight > 1.0) {
        return Err(ProximityError::ProbabilityOutOfRange(e.weight));
    }
    if g.edge_count() > 128 {
        return Err(ProximityError::CapExceeded {
            what: "edge count for reliability",
            limit: 128,
            actual: g.edge_count(),
        });
    }
    let n = g.n();
    let weights: Vec<f64> = g.edges().iter().map(|e| e.weight).collect();
    let reach = g.reachability();
    let mut p = DMatrix::identity(n, n);
    for i in 0..n {
        for j in 0..n {
            if i == j || !reach[i][j] {
                continue;
            }
            let masks = path_masks(g, i, j, opts.max_paths)?;
            p[(i, j)] = union_probability(&masks, &weights);
        }
    }
    Ok(ProximityMatrix::new(MeasureKind::Reliability, p)
        .with_param("max_paths", opts.max_paths as f64))
}

/// `Pr(at least one path intact)` for path edge sets `masks`.
fn union_probability(masks: &[u128], weights: &[f64]) -> f64 {
    let mut coef: BTreeMap<u128, i64> = BTreeMap::new();
    for &path in masks {
        let mut fresh: Vec<(u128, i64)> = coef.iter().map(|(&m, &c)| (m | path, -c)).collect();
        fresh.push((path, 1));
        for (m, c) in fresh {
            *coef.entry(m).or_insert(0) += c;
        }
    }
    let terms: Vec<f64> = coef
        .into_iter()
        .filter(|&(_, c)| c != 0)
        .map(|(m, c)| c as f64 * mask_weight(m, weights))
        .collect();
    sorted_sum(terms)
}

fn mask_weight(mut mask: u128, weights: &[f64]) -> f64 {
    let mut w = 1.0;
    while mask != 0 {
        let e = mask.trailing_zeros() as usize;
        w *= weights[e];
        mask &= mask - 1;
    }
    w
}
