//! Dense Chebyshev differentiation matrices.

use std::f64::consts::PI;

use faer::Mat;

use crate::error::{Error, Result};
use crate::grid::{ChebGrid, Domain};
use crate::par::Execution;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DerivOrder {
    First,
    Second,
}

/// First and second differentiation matrices on a mapped grid.
#[derive(Debug, Clone)]
pub struct DiffMatrices {
    order: usize,
    d1: Mat<f64>,
    d2: Mat<f64>,
    domain: Domain,
}

impl DiffMatrices {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn d1(&self) -> &Mat<f64> {
        &self.d1
    }

    pub fn d2(&self) -> &Mat<f64> {
        &self.d2
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn matrix(&self, deriv: DerivOrder) -> &Mat<f64> {
        match deriv {
            DerivOrder::First => &self.d1,
            DerivOrder::Second => &self.d2,
        }
    }

    /// Derivative samples of the interpolant through `values`.
    pub fn apply(&self, values: &[f64], deriv: DerivOrder) -> Result<Vec<f64>> {
        let n = self.order + 1;
        if values.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                got: values.len(),
            });
        }
        let m = self.matrix(deriv);
        Ok((0..n)
            .map(|i| (0..n).map(|j| m[(i, j)] * values[j]).sum())
            .collect())
    }
}

/// `x_k - x_j` for Chebyshev extreme points without cancellation:
/// `cos(a) - cos(b) = 2 sin((a + b)/2) sin((b - a)/2)`.
fn node_gap(n: usize, k: usize, j: usize) -> f64 {
    let h = PI / (2.0 * n as f64);
    2.0 * ((j + k) as f64 * h).sin() * ((j as f64 - k as f64) * h).sin()
}

/// Row `k` of the canonical first-derivative matrix, times `scale`.
///
/// Off-diagonal entries are `(c_k / c_j) (-1)^(k+j) / (x_k - x_j)` with
/// `c = 2` at the endpoints; the diagonal is the negated row sum.
pub fn first_derivative_row(n: usize, k: usize, scale: f64) -> Vec<f64> {
    let c = |j: usize| if j == 0 || j == n { 2.0 } else { 1.0 };
    let mut row = vec![0.0; n + 1];
    let mut off = 0.0;
    for (j, entry) in row.iter_mut().enumerate() {
        if j == k {
            continue;
        }
        let sign = if (k + j).is_multiple_of(2) { 1.0 } else { -1.0 };
        let v = sign * c(k) / (c(j) * node_gap(n, k, j));
        *entry = v;
        off += v;
    }
    row[k] = -off;
    row.iter_mut().for_each(|v| *v *= scale);
    row
}

/// Differentiation matrices for `grid`, each scaled by `(2/(b-a))^l`.
pub fn cheb_diff_matrix(grid: &ChebGrid) -> DiffMatrices {
    cheb_diff_matrix_with(grid, Execution::default())
}

pub fn cheb_diff_matrix_with(grid: &ChebGrid, exec: Execution) -> DiffMatrices {
    let n = grid.order();
    let domain = grid.domain();
    let scale = 2.0 / domain.length();
    let rows = exec.map_range(0..n + 1, |k| first_derivative_row(n, k, scale));
    let d1 = Mat::from_fn(n + 1, n + 1, |i, j| rows[i][j]);
    let d2 = exec.matmul(&d1, &d1);
    DiffMatrices {
        order: n,
        d1,
        d2,
        domain,
    }
}
