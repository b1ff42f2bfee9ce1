//! Relative forest accessibility `(I + tau L)^-1`, its coefficient matrices
//! `Q_k`, the Laplacian pseudoinverse and dense-forest accessibility.
//!
//! Everything is computed one connected component at a time and scattered
//! back, so `Q(tau)` and `L+` are exactly block diagonal.

use nalgebra::DMatrix;

use crate::error::{ProximityError, Result};
use crate::graph::{ComponentPartition, WeightedMultigraph};
use crate::linalg::{gather_block, max_abs, scatter_block, solve};
use crate::measure::{MeasureKind, ProximityMatrix};
use crate::oracle::{enum_rooted_forests, OracleConfig};

fn laplacian_and_parts(
    g: &WeightedMultigraph,
    what: &'static str,
) -> Result<(DMatrix<f64>, ComponentPartition)> {
    if g.is_directed() {
        return Err(ProximityError::DirectedUnsupported(what));
    }
    Ok((g.laplacian()?.into_inner(), g.components()))
}

fn uniform(s: usize) -> DMatrix<f64> {
    DMatrix::from_element(s, s, 1.0 / s as f64)
}

/// `Q(tau) = (I + tau L)^-1`.
pub fn forest_accessibility(g: &WeightedMultigraph, tau: f64) -> Result<ProximityMatrix> {
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(ProximityError::InvalidParameter(format!(
            "tau must be positive and finite, got {tau}"
        )));
    }
    let (l, parts) = laplacian_and_parts(g, "forest accessibility")?;
    let n = g.n();
    let mut q = DMatrix::zeros(n, n);
    for part in parts.parts() {
        let s = part.len();
        let jbar = uniform(s);
        let a = DMatrix::identity(s, s) + gather_block(&l, part) * tau;
        // (I + tau L)^-1 = Jbar + (I + tau L)^-1 (I - Jbar); the second term
        // carries the decaying part without cancellation against Jbar.
        let block = &jbar + solve(&a, &(DMatrix::identity(s, s) - &jbar))?;
        scatter_block(&mut q, part, &block);
    }
    Ok(ProximityMatrix::new(MeasureKind::Forests, q).with_param("tau", tau))
}

/// Largest entrywise deviation `|Q(tau) - Jbar|` at each `tau`.
pub fn jbar_limit_check(g: &WeightedMultigraph, taus: &[f64]) -> Result<Vec<(f64, f64)>> {
    let jbar = g.components().averaging_matrix().into_inner();
    taus.iter()
        .map(|&tau| {
            let q = forest_accessibility(g, tau)?;
            Ok((tau, max_abs(&(q.matrix() - &jbar))))
        })
        .collect()
}

/// Moore-Penrose inverse of the Laplacian, `(L + Jbar)^-1 - Jbar`.
pub fn laplacian_pinv(g: &WeightedMultigraph) -> Result<DMatrix<f64>> {
    let (l, parts) = laplacian_and_parts(g, "the Laplacian pseudoinverse")?;
    let n = g.n();
    let mut out = DMatrix::zeros(n, n);
    for part in parts.parts() {
        let s = part.len();
        let jbar = uniform(s);
        let a = gather_block(&l, part) + &jbar;
        let block = solve(&a, &(DMatrix::identity(s, s) - &jbar))?;
        scatter_block(&mut out, part, &block);
    }
    Ok(out)
}

/// `L+` from counts of spanning rooted forests with `n - v` and `n - v - 1` edges.
pub fn pinv_topological(g: &WeightedMultigraph, cfg: &OracleConfig) -> Result<DMatrix<f64>> {
    let census = enum_rooted_forests(g, cfg)?;
    let parts = g.components();
    let n = g.n();
    let top = census.max_edges();
    let full = census.total(top);
    let mut out = DMatrix::zeros(n, n);
    if top == 0 {
        return Ok(out);
    }
    let below = census.total(top - 1);
    for i in 0..n {
        for j in 0..n {
            if parts.same_component(i, j) {
                let size = parts.size_of_component_of(i) as f64;
                out[(i, j)] = (census.pair(top - 1, i, j) - below / size) / full;
            }
        }
    }
    Ok(out)
}

/// Coefficients of `det(I + tau L) (I + tau L)^-1 = sum_k tau^k Q_k` and of
/// `det(I + tau L) = sum_k tau^k eps(F_k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct QkStack {
    q: Vec<DMatrix<f64>>,
    forests: Vec<f64>,
    components: usize,
}

impl QkStack {
    /// `n - v`, the largest `k` with a nonzero `Q_k`.
    pub fn top(&self) -> usize {
        self.q.len() - 1
    }

    pub fn components(&self) -> usize {
        self.components
    }

    pub fn q(&self, k: usize) -> &DMatrix<f64> {
        &self.q[k]
    }

    pub fn matrices(&self) -> &[DMatrix<f64>] {
        &self.q
    }

    /// Total weight of spanning rooted forests with `k` edges.
    pub fn forest_weight(&self, k: usize) -> f64 {
        self.forests.get(k).copied().unwrap_or(0.0)
    }

    pub fn forest_weights(&self) -> &[f64] {
        &self.forests
    }

    /// `det(I + tau L)`.
    pub fn determinant(&self, tau: f64) -> f64 {
        self.forests.iter().rev().fold(0.0, |acc, &c| acc * tau + c)
    }

    /// `Q(tau)` reassembled from the coefficients.
    pub fn evaluate(&self, tau: f64) -> DMatrix<f64> {
        let n = self.q[0].nrows();
        let adj = self
            .q
            .iter()
            .rev()
            .fold(DMatrix::zeros(n, n), |acc, m| acc * tau + m);
        adj / self.determinant(tau)
    }

    /// `L+ = (Q_{n-v-1} - eps(F_{n-v-1}) Jbar) / eps(F_{n-v})`.
    pub fn pinv(&self, jbar: &DMatrix<f64>) -> DMatrix<f64> {
        let top = self.top();
        if top == 0 {
            return DMatrix::zeros(jbar.nrows(), jbar.ncols());
        }
        (&self.q[top - 1] - jbar * self.forests[top - 1]) / self.forests[top]
    }
}

/// Polynomial coefficients (ascending) of `det` and the adjugate of
/// `I + tau L_c` for one component.
struct ComponentPolynomials {
    det: Vec<f64>,
    adj: Vec<DMatrix<f64>>,
}

fn chebyshev_nodes(count: usize) -> Vec<f64> {
    (0..count)
        .map(|r| {
            let theta = std::f64::consts::PI * (2 * r + 1) as f64 / (2 * count) as f64;
            1.25 + 0.75 * theta.cos()
        })
        .collect()
}

fn component_polynomials(l: &DMatrix<f64>) -> Result<ComponentPolynomials> {
    let s = l.nrows();
    let degree = s - 1;
    if degree == 0 {
        return Ok(ComponentPolynomials {
            det: vec![1.0],
            adj: vec![DMatrix::identity(1, 1)],
        });
    }
    // Interpolate in sigma = tau * scale so the nodes sit where the
    // Vandermonde system is well conditioned.
    let scale = (0..s).map(|i| l[(i, i)]).fold(0.0, f64::max);
    let nodes = chebyshev_nodes(degree + 1);
    let vander = DMatrix::from_fn(degree + 1, degree + 1, |r, c| nodes[r].powi(c as i32));
    let mut values = DMatrix::zeros(degree + 1, 1 + s * s);
    for (r, &sigma) in nodes.iter().enumerate() {
        let a = DMatrix::identity(s, s) + l * (sigma / scale);
        let lu = a.clone().lu();
        let det = lu.determinant();
        let inv = lu
            .solve(&DMatrix::identity(s, s))
            .ok_or(ProximityError::Singular)?;
        values[(r, 0)] = det;
        for (idx, v) in inv.iter().enumerate() {
            values[(r, 1 + idx)] = det * v;
        }
    }
    let coeffs = solve(&vander, &values)?;
    let mut det = Vec::with_capacity(degree + 1);
    let mut adj = Vec::with_capacity(degree + 1);
    let mut unscale = 1.0;
    for k in 0..=degree {
        det.push(coeffs[(k, 0)] * unscale);
        adj.push(DMatrix::from_iterator(
            s,
            s,
            (0..s * s).map(|idx| coeffs[(k, 1 + idx)] * unscale),
        ));
        unscale *= scale;
    }
    Ok(ComponentPolynomials { det, adj })
}

fn poly_mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Coefficient matrices `Q_k` obtained by interpolating
/// `det(I + tau L) (I + tau L)^-1` per component.
pub fn qk_decomposition(g: &WeightedMultigraph) -> Result<QkStack> {
    let (l, parts) = laplacian_and_parts(g, "the forest coefficient matrices")?;
    let n = g.n();
    let polys = parts
        .parts()
        .iter()
        .map(|part| component_polynomials(&gather_block(&l, part)))
        .collect::<Result<Vec<_>>>()?;
    let forests = polys
        .iter()
        .fold(vec![1.0], |acc, p| poly_mul(&acc, &p.det));
    let top = forests.len() - 1;
    let mut q = vec![DMatrix::zeros(n, n); top + 1];
    for (c, part) in parts.parts().iter().enumerate() {
        // The other components contribute their determinant as a scalar factor.
        let others = polys
            .iter()
            .enumerate()
            .filter(|&(d, _)| d != c)
            .fold(vec![1.0], |acc, (_, p)| poly_mul(&acc, &p.det));
        for (a, adj_a) in polys[c].adj.iter().enumerate() {
            for (b, &scalar) in others.iter().enumerate() {
                for (x, &i) in part.iter().enumerate() {
                    for (y, &j) in part.iter().enumerate() {
                        q[a + b][(i, j)] += adj_a[(x, y)] * scalar;
                    }
                }
            }
        }
    }
    Ok(QkStack {
        q,
        forests,
        components: parts.count(),
    })
}

/// How a change of dense-forest accessibility is read.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DenseForestReading {
    /// Change of `(L + alpha Jbar)^-1 - alpha^-1 Jbar = L+`, independent of alpha.
    Pinv,
    /// Change of `(L + alpha Jbar)^-1` itself.
    Full,
}

/// Parameter of dense-forest accessibility and the largest value for which the
/// matrix stays a positive combination of `Q_{n-v-1}` and `Q_{n-v}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DenseForestParams {
    pub alpha: f64,
    /// `eps(F_{n-v}) / eps(F_{n-v-1})`, equal to `1 / tr(L+)`.
    pub threshold: f64,
}

impl DenseForestParams {
    pub fn for_graph(g: &WeightedMultigraph) -> Result<Self> {
        let threshold = dense_forest_threshold(g)?;
        let mut params = Self {
            alpha: 0.0,
            threshold,
        };
        params.alpha = params.default_alpha();
        Ok(params)
    }

    pub fn with_alpha(self, alpha: f64) -> Self {
        Self { alpha, ..self }
    }

    /// Half the threshold, or 1 when the graph has no edges.
    pub fn default_alpha(&self) -> f64 {
        if self.threshold.is_finite() {
            self.threshold / 2.0
        } else {
            1.0
        }
    }

    pub fn is_proximity(&self) -> bool {
        self.alpha > 0.0 && self.alpha < self.threshold
    }
}

pub fn dense_forest_threshold(g: &WeightedMultigraph) -> Result<f64> {
    let trace = laplacian_pinv(g)?.trace();
    Ok(if trace > 0.0 {
        1.0 / trace
    } else {
        f64::INFINITY
    })
}

fn dense_forest_inverse(g: &WeightedMultigraph, alpha: f64) -> Result<DMatrix<f64>> {
    if alpha == 0.0 {
        return Err(ProximityError::ZeroAlpha);
    }
    if !alpha.is_finite() {
        return Err(ProximityError::InvalidParameter(format!(
            "alpha must be finite, got {alpha}"
        )));
    }
    let (l, parts) = laplacian_and_parts(g, "dense-forest accessibility")?;
    let n = g.n();
    let a = l + parts.averaging_matrix().into_inner() * alpha;
    solve(&a, &DMatrix::identity(n, n))
}

/// `(L + alpha Jbar)^-1`.
pub fn dense_forest_accessibility(g: &WeightedMultigraph, alpha: f64) -> Result<ProximityMatrix> {
    let m = dense_forest_inverse(g, alpha)?;
    let threshold = dense_forest_threshold(g)?;
    let mut out = ProximityMatrix::new(MeasureKind::DenseForests, m)
        .with_param("alpha", alpha)
        .with_param("threshold", threshold);
    if !(alpha > 0.0 && alpha < threshold) {
        out = out.with_warning(format!(
            "alpha = {alpha} is outside (0, {threshold}); the matrix is not a positive forest combination"
        ));
    }
    Ok(out)
}

/// Dense-forest matrix under the chosen reading.
pub fn dense_forest_matrix(
    g: &WeightedMultigraph,
    alpha: f64,
    reading: DenseForestReading,
) -> Result<DMatrix<f64>> {
    match reading {
        DenseForestReading::Full => dense_forest_inverse(g, alpha),
        DenseForestReading::Pinv => {
            if alpha == 0.0 {
                return Err(ProximityError::ZeroAlpha);
            }
            laplacian_pinv(g)
        }
    }
}

/// Change of the dense-forest matrix between two graphs on the same vertices.
pub fn dense_forest_delta(
    before: &WeightedMultigraph,
    after: &WeightedMultigraph,
    alpha: f64,
    reading: DenseForestReading,
) -> Result<DMatrix<f64>> {
    Ok(dense_forest_matrix(after, alpha, reading)? - dense_forest_matrix(before, alpha, reading)?)
}
