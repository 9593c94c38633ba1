//! Chebyshev points of the second kind, barycentric and Clenshaw-Curtis
//! weights, and the affine map between `[-1, 1]` and a physical interval.
//!
//! Nodes are stored in descending order, `x_0 = 1` down to `x_N = -1`. Every
//! other module relies on that ordering: node `0` is the right endpoint `b`
//! and node `N` is the left endpoint `a`.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// A finite interval `[a, b]` with `a < b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Domain {
    a: f64,
    b: f64,
}

impl Domain {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::InvalidDomain { a, b });
        }
        Ok(Self { a, b })
    }

    /// The canonical interval `[-1, 1]`.
    pub fn canonical() -> Self {
        Self { a: -1.0, b: 1.0 }
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn length(&self) -> f64 {
        self.b - self.a
    }

    /// Maps `t` in `[-1, 1]` to `((b - a) t + b + a) / 2`.
    pub fn from_canonical(&self, t: f64) -> f64 {
        0.5 * ((self.b - self.a) * t + self.b + self.a)
    }

    pub fn to_canonical(&self, x: f64) -> f64 {
        (2.0 * x - self.b - self.a) / (self.b - self.a)
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.a && x <= self.b
    }

    /// Returns an error naming `x` when it falls outside the interval.
    pub fn check(&self, x: f64) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::OutOfDomain {
                x,
                a: self.a,
                b: self.b,
            })
        }
    }

    /// `m` equispaced points from `a` to `b` inclusive; both endpoints are
    /// hit exactly.
    pub fn linspace(&self, m: usize) -> Vec<f64> {
        match m {
            0 => Vec::new(),
            1 => vec![self.a],
            _ => {
                let h = self.length() / (m - 1) as f64;
                (0..m)
                    .map(|i| {
                        if i == m - 1 {
                            self.b
                        } else {
                            self.a + i as f64 * h
                        }
                    })
                    .collect()
            }
        }
    }
}

/// Chebyshev extreme points `cos(j pi / N)`, `j = 0..=N`.
///
/// Evaluated as `sin(pi (N - 2j) / (2N))`, which is odd in `j -> N - j`, so
/// `x_j == -x_{N-j}` holds bitwise.
pub fn cheb_points(n: usize) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::InvalidOrder { got: 0, min: 1 });
    }
    let denom = 2.0 * n as f64;
    Ok((0..=n)
        .map(|j| {
            let k = n as i64 - 2 * j as i64;
            (PI * k as f64 / denom).sin()
        })
        .collect())
}

/// Clenshaw-Curtis weights on `[-1, 1]` for the nodes of [`cheb_points`].
///
/// `w_j = (c_j / N) (1 - sum_{k=1}^{N/2} b_k cos(2 k theta_j) / (4k^2 - 1))`
/// with `c_j = 1` at the endpoints and 2 elsewhere, and `b_k = 1` only for
/// `k = N/2` (even `N`), else 2.
pub fn clenshaw_curtis_weights(n: usize) -> Vec<f64> {
    if n == 0 {
        return vec![2.0];
    }
    let nf = n as f64;
    let half = n / 2;
    (0..=n)
        .map(|j| {
            let theta = j as f64 * PI / nf;
            let mut v = 1.0;
            for k in 1..=half {
                let bk = if 2 * k == n { 1.0 } else { 2.0 };
                let kf = k as f64;
                v -= bk * (2.0 * kf * theta).cos() / (4.0 * kf * kf - 1.0);
            }
            let cj = if j == 0 || j == n { 1.0 } else { 2.0 };
            cj * v / nf
        })
        .collect()
}

/// Barycentric weights for Chebyshev points of the second kind:
/// `(-1)^j`, halved at both ends. The common scale factor cancels in the
/// second barycentric formula.
pub fn bary_weights(n: usize) -> Vec<f64> {
    (0..=n)
        .map(|j| {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            if j == 0 || j == n {
                0.5 * sign
            } else {
                sign
            }
        })
        .collect()
}

/// Collocation grid on a physical interval.
#[derive(Debug, Clone, PartialEq)]
pub struct ChebGrid {
    order: usize,
    nodes: Vec<f64>,
    mapped_nodes: Vec<f64>,
    bary_weights: Vec<f64>,
    quad_weights: Vec<f64>,
    domain: Domain,
}

impl ChebGrid {
    pub fn new(n: usize, domain: Domain) -> Result<Self> {
        let nodes = cheb_points(n)?;
        let mapped_nodes = nodes
            .iter()
            .enumerate()
            .map(|(j, &t)| {
                // Pin the endpoints so Dirichlet data lands exactly on a and b.
                if j == 0 {
                    domain.b()
                } else if j == n {
                    domain.a()
                } else {
                    domain.from_canonical(t)
                }
            })
            .collect();
        let half = 0.5 * domain.length();
        let quad_weights = clenshaw_curtis_weights(n)
            .into_iter()
            .map(|w| w * half)
            .collect();
        Ok(Self {
            order: n,
            nodes,
            mapped_nodes,
            bary_weights: bary_weights(n),
            quad_weights,
            domain,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn len(&self) -> usize {
        self.order + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn mapped_nodes(&self) -> &[f64] {
        &self.mapped_nodes
    }

    pub fn bary_weights(&self) -> &[f64] {
        &self.bary_weights
    }

    pub fn quad_weights(&self) -> &[f64] {
        &self.quad_weights
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    /// Clenshaw-Curtis integral of nodal samples over the physical interval.
    pub fn integrate(&self, values: &[f64]) -> Result<f64> {
        if values.len() != self.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                got: values.len(),
            });
        }
        Ok(self
            .quad_weights
            .iter()
            .zip(values)
            .map(|(w, v)| w * v)
            .sum())
    }
}

/// Builds the grid of order `n` on `domain`.
pub fn make_grid(n: usize, domain: Domain) -> Result<ChebGrid> {
    ChebGrid::new(n, domain)
}
