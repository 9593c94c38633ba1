//! Collocation of the canonical operator and boundary-condition elimination.
//!
//! The operator `L = -D2 - diag(p~) D1 + diag(q~)` is built on the physical
//! grid with pre-scaled matrices, `B = diag(w~)`. Endpoint rows of `L` and `B`
//! are replaced by the boundary conditions, which are then eliminated so the
//! reduced problem `A v = lambda B v` is square on the `N - 1` interior nodes
//! with `B` diagonal and positive.

use faer::Mat;

use crate::diffmat::{cheb_diff_matrix_with, DiffMatrices};
use crate::error::{Error, Result};
use crate::grid::ChebGrid;
use crate::par::Execution;
use crate::problem::{canonicalize, BoundaryCondition, SLProblem};

/// Smallest collocation order accepted by [`assemble`].
pub const MIN_ORDER: usize = 4;

/// How an eliminated endpoint value is recovered from the interior vector.
#[derive(Debug, Clone, PartialEq)]
pub enum EndpointValue {
    /// Homogeneous Dirichlet: the value is zero.
    Zero,
    /// `y[node] = sum_k coeffs[k] * v[k]`.
    Combination(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct EndpointRelation {
    pub node: usize,
    pub value: EndpointValue,
}

#[derive(Debug, Clone)]
pub struct DiscreteEVP {
    a_mat: Mat<f64>,
    b_diag: Vec<f64>,
    interior_index_map: Vec<usize>,
    endpoints: Vec<EndpointRelation>,
    grid: ChebGrid,
    label: String,
}

impl DiscreteEVP {
    pub fn a_mat(&self) -> &Mat<f64> {
        &self.a_mat
    }

    pub fn b_diag(&self) -> &[f64] {
        &self.b_diag
    }

    /// Grid node index for each reduced index.
    pub fn interior_index_map(&self) -> &[usize] {
        &self.interior_index_map
    }

    pub fn endpoints(&self) -> &[EndpointRelation] {
        &self.endpoints
    }

    pub fn grid(&self) -> &ChebGrid {
        &self.grid
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Reduced dimension `m`.
    pub fn dim(&self) -> usize {
        self.b_diag.len()
    }
}

/// Discretizes `prob` on a Chebyshev grid of order `n`.
pub fn assemble(prob: &SLProblem, n: usize) -> Result<DiscreteEVP> {
    assemble_with(prob, n, Execution::default())
}

pub fn assemble_with(prob: &SLProblem, n: usize, exec: Execution) -> Result<DiscreteEVP> {
    if n < MIN_ORDER {
        return Err(Error::InvalidOrder {
            got: n,
            min: MIN_ORDER,
        });
    }
    let coeffs = canonicalize(prob)?;
    let grid = ChebGrid::new(n, prob.domain())?;
    let dm = cheb_diff_matrix_with(&grid, exec);
    let x = grid.mapped_nodes();

    let at_node = |name: &'static str, j: usize, f: &dyn Fn(f64) -> Result<f64>| {
        f(x[j]).map_err(|e| match e {
            Error::Expr(source) => Error::NodeEvaluation {
                coefficient: name,
                node: j,
                x: x[j],
                source,
            },
            other => other,
        })
    };

    // Endpoint rows stay zero: they are superseded by the boundary rows.
    let mut l_full = Mat::<f64>::zeros(n + 1, n + 1);
    let mut b_full = vec![0.0; n + 1];
    let rows = exec.map_range(1..n, |j| -> Result<(f64, f64, f64)> {
        Ok((
            at_node("p'/p", j, &|t| coeffs.p_tilde(t))?,
            at_node("q/p", j, &|t| coeffs.q_tilde(t))?,
            at_node("w/p", j, &|t| coeffs.w_tilde(t))?,
        ))
    });
    for (j, row) in (1..n).zip(rows) {
        let (pt, qt, wt) = row?;
        if wt.is_nan() || wt <= 0.0 {
            return Err(Error::NonPositive {
                coefficient: "w/p",
                x: x[j],
                value: wt,
            });
        }
        for k in 0..=n {
            l_full[(j, k)] = -dm.d2()[(j, k)] - pt * dm.d1()[(j, k)];
        }
        l_full[(j, j)] += qt;
        b_full[j] = wt;
    }

    let mut evp = eliminate_boundary(&l_full, &b_full, prob.bc_left(), prob.bc_right(), &dm, grid)?;
    evp.label = prob.label().to_string();
    Ok(evp)
}

/// Reduces the bordered system to the interior nodes.
///
/// Dirichlet endpoints are deleted outright. For an endpoint with `d != 0`
/// the rows `c y_r + d (D1 y)_r = 0` are solved for the endpoint values in
/// terms of the interior ones and substituted into the interior rows of `L`.
pub fn eliminate_boundary(
    l_full: &Mat<f64>,
    b_full: &[f64],
    bc_left: BoundaryCondition,
    bc_right: BoundaryCondition,
    dm: &DiffMatrices,
    grid: ChebGrid,
) -> Result<DiscreteEVP> {
    let n = grid.order();
    if l_full.nrows() != n + 1 || l_full.ncols() != n + 1 {
        return Err(Error::LengthMismatch {
            expected: n + 1,
            got: l_full.nrows(),
        });
    }
    if b_full.len() != n + 1 {
        return Err(Error::LengthMismatch {
            expected: n + 1,
            got: b_full.len(),
        });
    }
    let interior: Vec<usize> = (1..n).collect();
    let m = interior.len();
    let d1 = dm.d1();

    // Node 0 is x = b, node N is x = a.
    let ends = [(0, bc_right), (n, bc_left)];
    let robin: Vec<(usize, BoundaryCondition)> = ends
        .iter()
        .copied()
        .filter(|(_, bc)| !bc.is_dirichlet())
        .collect();

    let mut a_mat = Mat::from_fn(m, m, |i, k| l_full[(interior[i], interior[k])]);
    let mut endpoints: Vec<EndpointRelation> = ends
        .iter()
        .map(|&(node, _)| EndpointRelation {
            node,
            value: EndpointValue::Zero,
        })
        .collect();

    if !robin.is_empty() {
        let r = robin.len();
        // M y_R = -G v
        let mut mmat = vec![vec![0.0; r]; r];
        let mut g = vec![vec![0.0; m]; r];
        for (a, &(ra, bc)) in robin.iter().enumerate() {
            for (b, &(rb, _)) in robin.iter().enumerate() {
                mmat[a][b] = bc.d() * d1[(ra, rb)] + if a == b { bc.c() } else { 0.0 };
            }
            for (k, &ik) in interior.iter().enumerate() {
                g[a][k] = bc.d() * d1[(ra, ik)];
            }
        }
        let t = solve_small(&mmat, &g)?;
        for (a, &(ra, _)) in robin.iter().enumerate() {
            for (i, &ii) in interior.iter().enumerate() {
                let lir = l_full[(ii, ra)];
                if lir != 0.0 {
                    for k in 0..m {
                        a_mat[(i, k)] += lir * t[a][k];
                    }
                }
            }
            let slot = endpoints
                .iter_mut()
                .find(|e| e.node == ra)
                .expect("endpoint");
            slot.value = EndpointValue::Combination(t[a].clone());
        }
    }

    Ok(DiscreteEVP {
        a_mat,
        b_diag: interior.iter().map(|&j| b_full[j]).collect(),
        interior_index_map: interior,
        endpoints,
        grid,
        label: String::new(),
    })
}

/// Solves the 1x1 or 2x2 system `M T = -G` by Cramer's rule.
fn solve_small(mmat: &[Vec<f64>], g: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    let m = g[0].len();
    match mmat.len() {
        1 => {
            let d = mmat[0][0];
            let scale = g[0].iter().fold(0.0f64, |s, v| s.max(v.abs()));
            if d.abs() <= f64::EPSILON * scale.max(1.0) {
                return Err(Error::SingularBoundary);
            }
            Ok(vec![g[0].iter().map(|v| -v / d).collect()])
        }
        2 => {
            let (a, b, c, d) = (mmat[0][0], mmat[0][1], mmat[1][0], mmat[1][1]);
            let det = a * d - b * c;
            let scale = (a * d).abs().max((b * c).abs());
            if scale == 0.0 || det.abs() <= 1e3 * f64::EPSILON * scale {
                return Err(Error::SingularBoundary);
            }
            let mut t = vec![vec![0.0; m]; 2];
            for k in 0..m {
                let (g0, g1) = (-g[0][k], -g[1][k]);
                t[0][k] = (d * g0 - b * g1) / det;
                t[1][k] = (a * g1 - c * g0) / det;
            }
            Ok(t)
        }
        _ => unreachable!("at most two endpoints"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffmat::cheb_diff_matrix;
    use crate::grid::Domain;
    use crate::problem::{builtin, Example};
    use std::f64::consts::PI;

    #[test]
    fn three_point_laplacian() {
        // D1 for N = 2 squared: the centre entry of D2 is -2 on [-1, 1],
        // hence -(-2) (2/pi)^2 = 8/pi^2 on [0, pi].
        let prob = SLProblem::dirichlet("0", "1", Domain::new(0.0, PI).unwrap(), "t").unwrap();
        let grid = ChebGrid::new(2, prob.domain()).unwrap();
        let dm = cheb_diff_matrix(&grid);
        let l = Mat::from_fn(3, 3, |i, j| if i == 1 { -dm.d2()[(i, j)] } else { 0.0 });
        let evp = eliminate_boundary(
            &l,
            &[0.0, 1.0, 0.0],
            BoundaryCondition::dirichlet(),
            BoundaryCondition::dirichlet(),
            &dm,
            grid,
        )
        .unwrap();
        assert_eq!(evp.dim(), 1);
        assert!((evp.a_mat()[(0, 0)] - 8.0 / (PI * PI)).abs() < 1e-14);
        assert_eq!(evp.b_diag(), &[1.0]);
    }

    #[test]
    fn dirichlet_keeps_interior_block() {
        let prob = SLProblem::dirichlet("0", "1", Domain::canonical(), "t").unwrap();
        let n = 10;
        let evp = assemble(&prob, n).unwrap();
        assert_eq!(evp.dim(), 9);
        assert_eq!(evp.interior_index_map(), &(1..10).collect::<Vec<_>>()[..]);
        let dm = cheb_diff_matrix(evp.grid());
        for i in 0..9 {
            for k in 0..9 {
                assert_eq!(evp.a_mat()[(i, k)], -dm.d2()[(i + 1, k + 1)]);
            }
        }
        assert!(evp
            .endpoints()
            .iter()
            .all(|e| e.value == EndpointValue::Zero));
    }

    #[test]
    fn weighted_example_mass_matrix() {
        let prob = builtin(Example::Weighted, None).unwrap();
        let evp = assemble(&prob, 24).unwrap();
        let x = evp.grid().mapped_nodes();
        for (k, &j) in evp.interior_index_map().iter().enumerate() {
            let want = (x[j] + PI).powi(4);
            assert!(((evp.b_diag()[k] - want) / want).abs() <= 1e-14);
        }
    }

    #[test]
    fn quartic_potential_on_diagonal() {
        let prob = builtin(Example::Quartic, Some(10.0)).unwrap();
        let evp = assemble(&prob, 16).unwrap();
        let dm = cheb_diff_matrix(evp.grid());
        let x = evp.grid().mapped_nodes();
        for i in 0..15 {
            for k in 0..15 {
                let mut want = -dm.d2()[(i + 1, k + 1)];
                if i == k {
                    want += x[i + 1].powi(4);
                }
                assert_eq!(evp.a_mat()[(i, k)], want);
            }
            assert_eq!(evp.b_diag()[i], 1.0);
        }
    }

    #[test]
    fn neumann_left_dirichlet_right() {
        let prob = SLProblem::new(
            crate::expr::Expr::Num(1.0),
            crate::expr::Expr::Num(0.0),
            crate::expr::Expr::Num(1.0),
            Domain::canonical(),
            BoundaryCondition::neumann(),
            BoundaryCondition::dirichlet(),
            "mixed",
        )
        .unwrap();
        let evp = assemble(&prob, 4).unwrap();
        assert_eq!(evp.dim(), 3);
        let left = evp.endpoints().iter().find(|e| e.node == 4).unwrap();
        let EndpointValue::Combination(r) = &left.value else {
            panic!("left endpoint should be eliminated by combination");
        };
        // D1 row at the left node applied to (0, v, y_4) vanishes.
        let dm = cheb_diff_matrix(evp.grid());
        let v = [0.3, -1.2, 0.7];
        let y4: f64 = r.iter().zip(&v).map(|(a, b)| a * b).sum();
        let deriv = dm.d1()[(4, 1)] * v[0]
            + dm.d1()[(4, 2)] * v[1]
            + dm.d1()[(4, 3)] * v[2]
            + dm.d1()[(4, 4)] * y4;
        assert!(deriv.abs() < 1e-12);
        let right = evp.endpoints().iter().find(|e| e.node == 0).unwrap();
        assert_eq!(right.value, EndpointValue::Zero);
    }

    #[test]
    fn order_floor() {
        let prob = builtin(Example::Exact, None).unwrap();
        assert_eq!(
            assemble(&prob, 3).unwrap_err(),
            Error::InvalidOrder { got: 3, min: 4 }
        );
    }

    #[test]
    fn singular_robin_pair_rejected() {
        let singular = solve_small(&[vec![1.0, 2.0], vec![2.0, 4.0]], &[vec![1.0], vec![1.0]]);
        assert_eq!(singular.unwrap_err(), Error::SingularBoundary);
        let ok = solve_small(&[vec![2.0, 0.0], vec![0.0, 4.0]], &[vec![2.0], vec![4.0]]).unwrap();
        assert_eq!(ok, vec![vec![-1.0], vec![-1.0]]);
    }

    #[test]
    fn node_evaluation_errors_carry_the_node() {
        let domain = Domain::canonical();
        let t = ChebGrid::new(7, domain).unwrap().mapped_nodes()[2];
        assert!(!domain.linspace(101).contains(&t));
        let prob = SLProblem::dirichlet(&format!("1/(x - {t:?})"), "1", domain, "pole").unwrap();
        match assemble(&prob, 7).unwrap_err() {
            Error::NodeEvaluation {
                node, coefficient, ..
            } => {
                assert_eq!(node, 2);
                assert_eq!(coefficient, "q/p");
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
