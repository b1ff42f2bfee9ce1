//! Route accessibility `P = (I - E)^-1`, its convergence diagnostics and
//! rank-one updates.

use nalgebra::{DMatrix, DVector};

use crate::error::{ProximityError, Result};
use crate::graph::WeightedMultigraph;
use crate::linalg::{inf_norm, inverse};
use crate::measure::{MeasureKind, ProximityMatrix};

const POWER_ITERATIONS: usize = 200;
const POWER_WINDOW: f64 = 1e-10;
const SINGULAR_DENOMINATOR: f64 = 1e-12;

/// Whether the route series `sum_k E^k` converges for a graph.
#[derive(Debug, Clone, PartialEq)]
pub struct AdmissibilityReport {
    pub n: usize,
    /// Largest number of parallel edges between two vertices.
    pub m: usize,
    pub eps_max: f64,
    /// Maximum absolute row sum of `E`, an upper bound on its spectral radius.
    pub gershgorin: f64,
    /// Power-iteration estimate of the spectral radius.
    pub spectral_estimate: f64,
    /// Collatz-Wielandt upper bound from the power-iteration vector.
    pub certified_bound: f64,
    /// `1 / (m (n - 1))`, infinite when there is no pair of vertices.
    pub weight_bound: f64,
    /// `eps_max < weight_bound`, a sufficient condition for convergence.
    pub constraint_satisfied: bool,
}

impl AdmissibilityReport {
    /// Whether a certified bound places the spectral radius below 1.
    pub fn convergent(&self) -> bool {
        self.gershgorin.min(self.certified_bound) < 1.0
    }

    pub fn diagnostic(&self) -> String {
        format!(
            "spectral radius ~ {:.6} (Gershgorin row-sum bound {:.6}, certified bound {:.6}); \
             max weight {} vs 1/(m(n-1)) = {} with m = {}",
            self.spectral_estimate,
            self.gershgorin,
            self.certified_bound,
            self.eps_max,
            self.weight_bound,
            self.m
        )
    }
}

pub fn check_admissibility(g: &WeightedMultigraph) -> AdmissibilityReport {
    let n = g.n();
    let e = g.weight_matrix().into_inner();
    let gershgorin = inf_norm(&e);
    let (spectral_estimate, certified_bound) = spectral_radius(&e);
    let m = g.max_multiplicity();
    let eps_max = g.max_weight();
    let weight_bound = if n <= 1 || m == 0 {
        f64::INFINITY
    } else {
        1.0 / (m as f64 * (n - 1) as f64)
    };
    AdmissibilityReport {
        n,
        m,
        eps_max,
        gershgorin,
        spectral_estimate: spectral_estimate.min(gershgorin).min(certified_bound),
        certified_bound,
        weight_bound,
        constraint_satisfied: eps_max < weight_bound,
    }
}

/// Power iteration on `E + I`, which keeps the iterate positive for a
/// nonnegative `E`. Returns the estimate and a Collatz-Wielandt upper bound.
fn spectral_radius(e: &DMatrix<f64>) -> (f64, f64) {
    let n = e.nrows();
    let shifted = e + DMatrix::identity(n, n);
    let mut x = DVector::from_element(n, 1.0);
    let mut estimate = 0.0;
    for _ in 0..POWER_ITERATIONS {
        let y = &shifted * &x;
        let norm = y.amax();
        let next = norm - 1.0;
        x = y / norm;
        if (next - estimate).abs() <= POWER_WINDOW {
            estimate = next;
            break;
        }
        estimate = next;
    }
    let ex = e * &x;
    let bound = (0..n).map(|i| ex[i] / x[i]).fold(0.0, f64::max);
    (estimate.max(0.0), bound)
}

/// Total weight of all routes (walks) between every ordered pair.
pub fn route_accessibility(g: &WeightedMultigraph) -> Result<ProximityMatrix> {
    let report = check_admissibility(g);
    if !report.convergent() {
        return Err(ProximityError::Divergent(Box::new(report)));
    }
    let n = g.n();
    let e = g.weight_matrix().into_inner();
    let p = inverse(&(DMatrix::identity(n, n) - e))?;
    let mut out = ProximityMatrix::new(MeasureKind::Routes, p)
        .with_param("spectral_radius", report.spectral_estimate)
        .with_param("eps_max", report.eps_max);
    if !report.constraint_satisfied {
        out = out.with_warning(format!(
            "maximum weight {} is not below 1/(m(n-1)) = {}",
            report.eps_max, report.weight_bound
        ));
    }
    Ok(out)
}

/// Route accessibility after adding `delta` to the single entry `e_kt`.
///
/// `P' = P + h R` with `h = delta / (1 - delta p_tk)` and `r_ij = p_ik p_tj`.
pub fn rank_one_update(p: &DMatrix<f64>, k: usize, t: usize, delta: f64) -> Result<DMatrix<f64>> {
    let n = p.nrows();
    if k >= n || t >= n {
        return Err(ProximityError::VertexOutOfRange {
            vertex: k.max(t),
            n,
        });
    }
    let denom = 1.0 - delta * p[(t, k)];
    if denom.abs() <= SINGULAR_DENOMINATOR {
        return Err(ProximityError::SingularUpdate(denom));
    }
    let h = delta / denom;
    let col = p.column(k).into_owned();
    let row = p.row(t).into_owned();
    Ok(p + (col * row) * h)
}

/// Applies an edge increment of `delta` between `k` and `t`; an undirected
/// non-loop edge changes both `e_kt` and `e_tk`.
pub fn edge_update(
    p: &DMatrix<f64>,
    directed: bool,
    k: usize,
    t: usize,
    delta: f64,
) -> Result<DMatrix<f64>> {
    let once = rank_one_update(p, k, t, delta)?;
    if directed || k == t {
        Ok(once)
    } else {
        rank_one_update(&once, t, k, delta)
    }
}

/// Route accessibility maintained under a sequence of edge increments.
#[derive(Debug, Clone)]
pub struct IncrementalRoutes {
    graph: WeightedMultigraph,
    p: DMatrix<f64>,
    since_refresh: usize,
    refresh_every: usize,
}

impl IncrementalRoutes {
    pub const DEFAULT_REFRESH: usize = 32;

    pub fn new(graph: WeightedMultigraph) -> Result<Self> {
        let p = route_accessibility(&graph)?.into_matrix();
        Ok(Self {
            graph,
            p,
            since_refresh: 0,
            refresh_every: Self::DEFAULT_REFRESH,
        })
    }

    /// Recompute from scratch after this many chained updates.
    pub fn with_refresh_interval(mut self, every: usize) -> Self {
        self.refresh_every = every.max(1);
        self
    }

    /// Adds an edge of weight `delta` from `k` to `t`.
    pub fn add(&mut self, k: usize, t: usize, delta: f64) -> Result<()> {
        let graph = self.graph.with_edge(k, t, delta)?;
        if self.since_refresh + 1 >= self.refresh_every {
            self.p = route_accessibility(&graph)?.into_matrix();
            self.since_refresh = 0;
        } else {
            self.p = edge_update(&self.p, graph.is_directed(), k, t, delta)?;
            self.since_refresh += 1;
        }
        self.graph = graph;
        Ok(())
    }

    pub fn graph(&self) -> &WeightedMultigraph {
        &self.graph
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.p
    }

    pub fn updates_since_refresh(&self) -> usize {
        self.since_refresh
    }
}
