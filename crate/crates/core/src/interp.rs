//! Eigenfunctions as polynomial interpolants through the grid values.

use crate::assemble::{DiscreteEVP, EndpointValue};
use crate::diffmat::first_derivative_row;
use crate::eigen::Spectrum;
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::grid::ChebGrid;

#[derive(Debug, Clone, PartialEq)]
pub struct Eigenfunction {
    node_values: Vec<f64>,
    grid: ChebGrid,
    eigenvalue: f64,
    index: usize,
}

/// Full nodal vector from the interior values `v`.
pub fn reattach_boundary(v: &[f64], evp: &DiscreteEVP) -> Result<Vec<f64>> {
    if v.len() != evp.dim() {
        return Err(Error::LengthMismatch {
            expected: evp.dim(),
            got: v.len(),
        });
    }
    let mut out = vec![0.0; evp.grid().len()];
    for (&node, &value) in evp.interior_index_map().iter().zip(v) {
        out[node] = value;
    }
    for rel in evp.endpoints() {
        out[rel.node] = match &rel.value {
            EndpointValue::Zero => 0.0,
            EndpointValue::Combination(c) => c.iter().zip(v).map(|(a, b)| a * b).sum(),
        };
    }
    Ok(out)
}

impl Eigenfunction {
    pub fn new(
        node_values: Vec<f64>,
        grid: ChebGrid,
        eigenvalue: f64,
        index: usize,
    ) -> Result<Self> {
        if node_values.len() != grid.len() {
            return Err(Error::LengthMismatch {
                expected: grid.len(),
                got: node_values.len(),
            });
        }
        Ok(Self {
            node_values,
            grid,
            eigenvalue,
            index,
        })
    }

    /// The eigenfunction at sorted position `k` of `spectrum`, which must
    /// come from solving `evp`.
    pub fn from_spectrum(evp: &DiscreteEVP, spectrum: &Spectrum, k: usize) -> Result<Self> {
        let v = spectrum
            .eigenvectors()
            .get(k)
            .ok_or_else(|| Error::Invalid(format!("no eigenpair at position {k}")))?;
        let values = reattach_boundary(v, evp)?;
        Self::new(
            values,
            evp.grid().clone(),
            spectrum.eigenvalues()[k],
            spectrum.first_index() + k,
        )
    }

    pub fn node_values(&self) -> &[f64] {
        &self.node_values
    }

    pub fn grid(&self) -> &ChebGrid {
        &self.grid
    }

    pub fn eigenvalue(&self) -> f64 {
        self.eigenvalue
    }

    pub fn index(&self) -> usize {
        self.index
    }

    /// Second-kind barycentric formula on the mapped nodes.
    pub fn bary_eval(&self, x: f64) -> Result<f64> {
        self.grid.domain().check(x)?;
        let nodes = self.grid.mapped_nodes();
        let weights = self.grid.bary_weights();
        let mut num = 0.0;
        let mut den = 0.0;
        for ((&xj, &wj), &fj) in nodes.iter().zip(weights).zip(&self.node_values) {
            let diff = x - xj;
            if diff == 0.0 {
                return Ok(fj);
            }
            let t = wj / diff;
            num += t * fj;
            den += t;
        }
        Ok(num / den)
    }

    /// `sum_j q_j w(x_j) f(x_j)^2` with Clenshaw-Curtis weights `q_j`.
    pub fn weighted_norm_sq(&self, w: &Expr) -> Result<f64> {
        self.weighted_inner(self, w)
    }

    /// Clenshaw-Curtis `<f, g>_w` on the shared grid.
    pub fn weighted_inner(&self, other: &Eigenfunction, w: &Expr) -> Result<f64> {
        if other.grid != self.grid {
            return Err(Error::Invalid("inner product needs a common grid".into()));
        }
        let mut s = 0.0;
        for (j, (&xj, &qj)) in self
            .grid
            .mapped_nodes()
            .iter()
            .zip(self.grid.quad_weights())
            .enumerate()
        {
            s += qj * w.eval(xj)? * self.node_values[j] * other.node_values[j];
        }
        Ok(s)
    }

    /// Derivative of the interpolant at `x = a` (node `N`).
    pub fn left_derivative(&self) -> f64 {
        let n = self.grid.order();
        let row = first_derivative_row(n, n, 2.0 / self.grid.domain().length());
        row.iter().zip(&self.node_values).map(|(d, y)| d * y).sum()
    }

    /// Unit weighted norm, then the sign making `y'(a) > 0`. When `y'(a)`
    /// is negligible the first nonzero value from the left is made positive.
    pub fn normalize(&self, w: &Expr) -> Result<Eigenfunction> {
        let norm_sq = self.weighted_norm_sq(w)?;
        if norm_sq.is_nan() || norm_sq <= 0.0 || norm_sq.is_infinite() {
            return Err(Error::ZeroVector);
        }
        let scale = norm_sq.sqrt().recip();
        let mut values: Vec<f64> = self.node_values.iter().map(|v| v * scale).collect();

        let n = self.grid.order();
        let row = first_derivative_row(n, n, 2.0 / self.grid.domain().length());
        let deriv: f64 = row.iter().zip(&values).map(|(d, y)| d * y).sum();
        let magnitude: f64 = row.iter().zip(&values).map(|(d, y)| (d * y).abs()).sum();
        let sign = if deriv.abs() > 1e-10 * magnitude {
            deriv.signum()
        } else {
            let peak = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            values
                .iter()
                .rev()
                .find(|v| v.abs() > 1e-12 * peak)
                .map_or(1.0, |v| v.signum())
        };
        if sign < 0.0 {
            values.iter_mut().for_each(|v| *v = -*v);
        }
        Ok(Eigenfunction {
            node_values: values,
            grid: self.grid.clone(),
            eigenvalue: self.eigenvalue,
            index: self.index,
        })
    }

    /// `m` equispaced `(x, y)` pairs over the domain.
    pub fn sample(&self, m: usize) -> Result<Vec<(f64, f64)>> {
        if m < 2 {
            return Err(Error::Invalid(format!("need at least 2 samples, got {m}")));
        }
        self.grid
            .domain()
            .linspace(m)
            .into_iter()
            .map(|x| Ok((x, self.bary_eval(x)?)))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assemble::assemble;
    use crate::eigen::solve;
    use crate::expr::parse;
    use crate::grid::Domain;
    use crate::problem::{BoundaryCondition, SLProblem};
    use std::f64::consts::PI;

    fn sampled(n: usize, domain: Domain, f: impl Fn(f64) -> f64) -> Eigenfunction {
        let grid = ChebGrid::new(n, domain).unwrap();
        let values = grid.mapped_nodes().iter().map(|&x| f(x)).collect();
        Eigenfunction::new(values, grid, 0.0, 1).unwrap()
    }

    #[test]
    fn reattach_dirichlet() {
        let prob = SLProblem::dirichlet("0", "1", Domain::canonical(), "t").unwrap();
        let evp = assemble(&prob, 6).unwrap();
        let full = reattach_boundary(&[1.0; 5], &evp).unwrap();
        assert_eq!(full, vec![0.0, 1.0, 1.0, 1.0, 1.0, 1.0, 0.0]);
        assert!(reattach_boundary(&[1.0; 4], &evp).is_err());
    }

    #[test]
    fn reattach_robin_uses_relation() {
        let prob = SLProblem::new(
            Expr::Num(1.0),
            Expr::Num(0.0),
            Expr::Num(1.0),
            Domain::new(0.0, 2.0).unwrap(),
            BoundaryCondition::new(1.0, -0.5).unwrap(),
            BoundaryCondition::dirichlet(),
            "robin",
        )
        .unwrap();
        let evp = assemble(&prob, 8).unwrap();
        let v: Vec<f64> = (0..7).map(|i| (i as f64 * 0.3).sin() + 0.1).collect();
        let full = reattach_boundary(&v, &evp).unwrap();
        let EndpointValue::Combination(c) = &evp.endpoints()[1].value else {
            panic!("left endpoint is Robin");
        };
        assert_eq!(full[8], c.iter().zip(&v).map(|(a, b)| a * b).sum::<f64>());
        assert_eq!(full[0], 0.0);
        // y(a) - 0.5 y'(a) = 0 holds for the reconstructed nodal vector.
        let f = Eigenfunction::new(full.clone(), evp.grid().clone(), 0.0, 1).unwrap();
        assert!((full[8] - 0.5 * f.left_derivative()).abs() < 1e-12);
    }

    #[test]
    fn barycentric_reproduces_polynomials() {
        let f = sampled(8, Domain::canonical(), |x| x.powi(3));
        assert!((f.bary_eval(0.3).unwrap() - 0.027).abs() < 1e-12);
        let one = sampled(5, Domain::new(2.0, 3.0).unwrap(), |_| 1.0);
        for x in [2.0, 2.123, 2.5, 2.999] {
            assert!((one.bary_eval(x).unwrap() - 1.0).abs() < 1e-15);
        }
        let g = sampled(9, Domain::new(-1.0, 4.0).unwrap(), |x| x * x - x);
        for (j, &xj) in g.grid().mapped_nodes().iter().enumerate() {
            assert_eq!(g.bary_eval(xj).unwrap(), g.node_values()[j]);
        }
        assert!(g.bary_eval(4.5).is_err());
    }

    #[test]
    fn normalization() {
        let w = parse("1").unwrap();
        let dom = Domain::new(0.0, PI).unwrap();
        let c = (2.0 / PI).sqrt();
        let f = sampled(32, dom, |x| c * x.sin());
        let g = f.normalize(&w).unwrap();
        for (a, b) in f.node_values().iter().zip(g.node_values()) {
            assert!((a - b).abs() < 1e-8);
        }
        let gg = g.normalize(&w).unwrap();
        for (a, b) in g.node_values().iter().zip(gg.node_values()) {
            assert!((a - b).abs() < 1e-12);
        }
        let neg = sampled(32, dom, |x| -3.0 * x.sin());
        let (a, b) = (neg.normalize(&w).unwrap(), f.normalize(&w).unwrap());
        for (x, y) in a.node_values().iter().zip(b.node_values()) {
            assert!((x - y).abs() < 1e-14);
        }
        assert!((g.weighted_norm_sq(&w).unwrap() - 1.0).abs() < 1e-12);

        let zero = sampled(8, dom, |_| 0.0);
        assert_eq!(zero.normalize(&w), Err(Error::ZeroVector));
    }

    #[test]
    fn sign_tie_break_uses_left_values() {
        // cos-like mode with zero slope at the left end.
        let dom = Domain::new(0.0, PI).unwrap();
        let w = parse("1").unwrap();
        let f = sampled(24, dom, |x| -x.cos()).normalize(&w).unwrap();
        assert!(f.node_values()[24] > 0.0);
        let g = sampled(24, dom, |x| x.cos()).normalize(&w).unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn sampling() {
        let prob = SLProblem::dirichlet("0", "1", Domain::new(0.0, PI).unwrap(), "t").unwrap();
        let evp = assemble(&prob, 16).unwrap();
        let spec = solve(&evp).unwrap();
        let f = Eigenfunction::from_spectrum(&evp, &spec, 0).unwrap();
        let s = f.sample(2).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s[0], (0.0, 0.0));
        assert_eq!(s[1].0, PI);
        assert_eq!(s[1].1, 0.0);
        let s3 = f.sample(3).unwrap();
        assert_eq!(s3[1].1, f.bary_eval(s3[1].0).unwrap());
        assert!(f.sample(1).is_err());
        assert_eq!(f.index(), 1);
    }
}
