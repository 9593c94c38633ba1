//! Diagonal similarity scaling of a dense matrix.
//!
//! Finds `D = diag(2^k_i)` so that `D^{-1} M D` has comparable row and
//! column norms (Parlett-Reinsch, as in LAPACK `dgebal` without the
//! permutation step). Powers of two keep the scaling exact.

use faer::Mat;

const RADIX: f64 = 2.0;

/// Balances `m` in place and returns the diagonal of `D`.
///
/// The eigenvectors of the original matrix are `D` times those of the
/// balanced one.
pub fn balance(m: &mut Mat<f64>) -> Vec<f64> {
    let n = m.nrows();
    let mut scale = vec![1.0; n];
    let sqr = RADIX * RADIX;
    loop {
        let mut converged = true;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 0..n {
                if j != i {
                    c += m[(j, i)].abs();
                    r += m[(i, j)].abs();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let mut cc = c;
            let lo = r / RADIX;
            while cc < lo {
                f *= RADIX;
                cc *= sqr;
            }
            let hi = r * RADIX;
            while cc > hi {
                f /= RADIX;
                cc /= sqr;
            }
            if (c * f + r / f) < 0.95 * s {
                converged = false;
                scale[i] *= f;
                for j in 0..n {
                    m[(i, j)] /= f;
                }
                for j in 0..n {
                    m[(j, i)] *= f;
                }
            }
        }
        if converged {
            return scale;
        }
    }
}
