//! Small dense linear-algebra helpers shared by the measure kernels.

use nalgebra::DMatrix;

use crate::error::{ProximityError, Result};

/// Solves `a * x = b` with partially pivoted LU.
pub fn solve(a: &DMatrix<f64>, b: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let lu = a.clone().lu();
    let x = lu.solve(b).ok_or(ProximityError::Singular)?;
    if x.iter().all(|v| v.is_finite()) {
        Ok(x)
    } else {
        Err(ProximityError::Singular)
    }
}

pub fn inverse(a: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    solve(a, &DMatrix::identity(a.nrows(), a.ncols()))
}

/// Determinant and inverse from a single LU factorization.
pub fn det_and_inverse(a: &DMatrix<f64>) -> Result<(f64, DMatrix<f64>)> {
    let lu = a.clone().lu();
    let det = lu.determinant();
    let inv = lu
        .solve(&DMatrix::identity(a.nrows(), a.ncols()))
        .ok_or(ProximityError::Singular)?;
    Ok((det, inv))
}

/// Largest absolute entry.
pub fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()))
}

pub fn max_abs_diff(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    assert_eq!(a.shape(), b.shape(), "shape mismatch");
    a.iter()
        .zip(b.iter())
        .fold(0.0_f64, |acc, (x, y)| acc.max((x - y).abs()))
}

/// Maximum absolute row sum.
pub fn inf_norm(m: &DMatrix<f64>) -> f64 {
    m.row_iter()
        .map(|r| r.iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Copies `block` into `target` at the rows and columns listed in `idx`.
pub fn scatter_block(target: &mut DMatrix<f64>, idx: &[usize], block: &DMatrix<f64>) {
    for (a, &i) in idx.iter().enumerate() {
        for (b, &j) in idx.iter().enumerate() {
            target[(i, j)] = block[(a, b)];
        }
    }
}

pub fn gather_block(source: &DMatrix<f64>, idx: &[usize]) -> DMatrix<f64> {
    DMatrix::from_fn(idx.len(), idx.len(), |a, b| source[(idx[a], idx[b])])
}

/// Sums after sorting by magnitude, giving an order-independent result.
pub fn sorted_sum(mut terms: Vec<f64>) -> f64 {
    terms.sort_by(|a, b| a.abs().total_cmp(&b.abs()));
    terms.into_iter().sum()
}

/// Neumaier compensated accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}
