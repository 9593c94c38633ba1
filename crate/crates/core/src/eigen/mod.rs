//! Dense solution of the reduced problem `A v = lambda B v` and
//! resolution-doubling certification.
//!
//! With `B` diagonal and positive, the pencil is reduced exactly to
//! `M = B^{-1} A`. `M` is balanced, then handed to faer's real
//! nonsymmetric eigendecomposition (Hessenberg reduction and shifted QR).
//! Eigenvalues whose imaginary part exceeds [`REALNESS_TOL`] (relative) are
//! discarded; the rest are sorted ascending with residuals measured against
//! the original `(A, B)`.

mod balance;

use faer::diag::Diag;
use faer::dyn_stack::{MemBuffer, MemStack};
use faer::linalg::evd::{self, ComputeEigenvectors};
use faer::Mat;

use crate::assemble::{assemble_with, DiscreteEVP};
use crate::error::{Error, Result};
use crate::par::Execution;
use crate::problem::SLProblem;

pub use balance::balance;

/// `|Im lambda| <= REALNESS_TOL * (1 + |Re lambda|)` for a retained value.
pub const REALNESS_TOL: f64 = 1e-8;

/// Default tolerance for [`certify`].
pub const DEFAULT_CERTIFY_TOL: f64 = 1e-8;

/// Smallest base order accepted by [`certify`].
pub const MIN_CERTIFY_ORDER: usize = 8;

/// Sorted real spectrum of a discretized problem.
#[derive(Debug, Clone)]
pub struct Spectrum {
    eigenvalues: Vec<f64>,
    eigenvectors: Vec<Vec<f64>>,
    residuals: Vec<f64>,
    n_grid: usize,
    converged: Vec<bool>,
    first_index: usize,
}

impl Spectrum {
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Interior-node eigenvectors, unit 2-norm, largest entry positive.
    pub fn eigenvectors(&self) -> &[Vec<f64>] {
        &self.eigenvectors
    }

    pub fn residuals(&self) -> &[f64] {
        &self.residuals
    }

    pub fn n_grid(&self) -> usize {
        self.n_grid
    }

    /// All `false` until [`certify`] has run.
    pub fn converged(&self) -> &[bool] {
        &self.converged
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// Mode number of the lowest eigenvalue.
    pub fn first_index(&self) -> usize {
        self.first_index
    }

    /// Position in the sorted list of mode number `n`.
    pub fn position_of_mode(&self, n: usize) -> Option<usize> {
        n.checked_sub(self.first_index).filter(|&k| k < self.len())
    }

    /// Eigenvalue of mode number `n`.
    pub fn mode(&self, n: usize) -> Option<f64> {
        self.position_of_mode(n).map(|k| self.eigenvalues[k])
    }

    pub fn with_first_index(mut self, first_index: usize) -> Self {
        self.first_index = first_index;
        self
    }

    /// Number of leading eigenvalues flagged converged without a gap.
    pub fn converged_prefix(&self) -> usize {
        self.converged.iter().take_while(|&&c| c).count()
    }
}

/// `||A v - lambda B v||_2 / ||v||_2`.
pub fn residual(evp: &DiscreteEVP, lambda: f64, v: &[f64]) -> Result<f64> {
    let m = evp.dim();
    if v.len() != m {
        return Err(Error::LengthMismatch {
            expected: m,
            got: v.len(),
        });
    }
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Err(Error::ZeroVector);
    }
    let a = evp.a_mat();
    let b = evp.b_diag();
    let r2: f64 = (0..m)
        .map(|i| {
            let av: f64 = (0..m).map(|k| a[(i, k)] * v[k]).sum();
            let ri = av - lambda * b[i] * v[i];
            ri * ri
        })
        .sum();
    Ok(r2.sqrt() / norm)
}

pub fn solve(evp: &DiscreteEVP) -> Result<Spectrum> {
    solve_with(evp, Execution::default())
}

pub fn solve_with(evp: &DiscreteEVP, exec: Execution) -> Result<Spectrum> {
    let n_grid = evp.grid().order();
    let m = evp.dim();
    let (a, b) = (evp.a_mat(), evp.b_diag());
    let mut mat = Mat::from_fn(m, m, |i, k| a[(i, k)] / b[i]);
    let scale = balance(&mut mat);

    let par = exec.faer_par();
    let mut s_re = Diag::<f64>::zeros(m);
    let mut s_im = Diag::<f64>::zeros(m);
    let mut u = Mat::<f64>::zeros(m, m);
    let mut mem = MemBuffer::new(evd::evd_scratch::<f64>(
        m,
        ComputeEigenvectors::No,
        ComputeEigenvectors::Yes,
        par,
        Default::default(),
    ));
    evd::evd_real(
        mat.as_ref(),
        s_re.as_mut(),
        s_im.as_mut(),
        None,
        Some(u.as_mut()),
        par,
        MemStack::new(&mut mem),
        Default::default(),
    )
    .map_err(|_| Error::EigenSolver { n: n_grid })?;

    // Column j holds the real eigenvector for a real eigenvalue, or the real
    // part of the first member of a conjugate pair.
    let mut picked = Vec::new();
    let mut j = 0;
    while j < m {
        let (re, im) = (s_re[j], s_im[j]);
        let pair = im != 0.0;
        if re.is_finite() && im.abs() <= REALNESS_TOL * (1.0 + re.abs()) {
            picked.push((re, j));
        }
        j += if pair { 2 } else { 1 };
    }
    if picked.is_empty() {
        return Err(Error::EmptySpectrum { n: n_grid });
    }
    picked.sort_by(|x, y| x.0.total_cmp(&y.0));
    picked.dedup_by(|later, earlier| later.0 == earlier.0);

    let pairs = exec.map(&picked, |&(lambda, col)| -> Result<(f64, Vec<f64>, f64)> {
        let mut v: Vec<f64> = (0..m).map(|i| u[(i, col)] * scale[i]).collect();
        normalize_vector(&mut v)?;
        let r = residual(evp, lambda, &v)?;
        Ok((lambda, v, r))
    });

    let mut eigenvalues = Vec::with_capacity(pairs.len());
    let mut eigenvectors = Vec::with_capacity(pairs.len());
    let mut residuals = Vec::with_capacity(pairs.len());
    for pair in pairs {
        let (lambda, v, r) = pair?;
        eigenvalues.push(lambda);
        eigenvectors.push(v);
        residuals.push(r);
    }
    let count = eigenvalues.len();
    Ok(Spectrum {
        eigenvalues,
        eigenvectors,
        residuals,
        n_grid,
        converged: vec![false; count],
        first_index: 1,
    })
}

/// Unit 2-norm with the largest-magnitude entry positive (first one on ties).
fn normalize_vector(v: &mut [f64]) -> Result<()> {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm == 0.0 || !norm.is_finite() {
        return Err(Error::ZeroVector);
    }
    let mut pivot = 0;
    for (i, x) in v.iter().enumerate() {
        if x.abs() > v[pivot].abs() {
            pivot = i;
        }
    }
    let s = if v[pivot] < 0.0 { -norm } else { norm };
    v.iter_mut().for_each(|x| *x /= s);
    Ok(())
}

/// Assembles and solves `prob` at order `n`.
pub fn solve_problem(prob: &SLProblem, n: usize, exec: Execution) -> Result<Spectrum> {
    let evp = assemble_with(prob, n, exec)?;
    Ok(solve_with(&evp, exec)?.with_first_index(prob.first_index()))
}

/// Solves at `n` and `2n` and returns the `2n` spectrum with flags.
///
/// Eigenvalue `k` is converged when
/// `|lambda_k(n) - lambda_k(2n)| / (1 + |lambda_k(2n)|) <= tol`, matching by
/// sorted position.
pub fn certify(prob: &SLProblem, n: usize, tol: f64) -> Result<Spectrum> {
    certify_with(prob, n, tol, Execution::default())
}

pub fn certify_with(prob: &SLProblem, n: usize, tol: f64, exec: Execution) -> Result<Spectrum> {
    Ok(certify_pair(prob, n, tol, exec)?.1)
}

/// Like [`certify_with`] but also returns the coarse spectrum.
pub fn certify_pair(
    prob: &SLProblem,
    n: usize,
    tol: f64,
    exec: Execution,
) -> Result<(Spectrum, Spectrum)> {
    if n < MIN_CERTIFY_ORDER {
        return Err(Error::InvalidOrder {
            got: n,
            min: MIN_CERTIFY_ORDER,
        });
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::Invalid(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let (coarse, fine) = exec.join(
        || solve_problem(prob, n, exec),
        || solve_problem(prob, 2 * n, exec),
    );
    let (coarse, mut fine) = (coarse?, fine?);
    fine.converged = fine
        .eigenvalues
        .iter()
        .enumerate()
        .map(|(k, &fine_k)| match coarse.eigenvalues.get(k) {
            Some(&coarse_k) => (coarse_k - fine_k).abs() / (1.0 + fine_k.abs()) <= tol,
            // No coarse partner: an infinite discrepancy, accepted only by tol = inf.
            None => tol == f64::INFINITY,
        })
        .collect();
    Ok((coarse, fine))
}

/// Spectra of one problem at several orders, in input order.
pub fn convergence_sweep(
    prob: &SLProblem,
    orders: &[usize],
    exec: Execution,
) -> Result<Vec<Spectrum>> {
    // Each instance runs its kernels sequentially; the sweep itself fans out.
    exec.map(orders, |&n| solve_problem(prob, n, Execution::Sequential))
        .into_iter()
        .collect()
}
