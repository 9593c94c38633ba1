//! Reference spectra for the builtin problems and the relative-error metric.
//!
//! The weighted and quartic problems only have WKB asymptotics, which are
//! not exact at low index; the `1/(1+x)^2` problem has a closed form.

use std::f64::consts::{LN_2, PI};

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::grid::{ChebGrid, Domain};
use crate::problem::Example;

/// Clenshaw-Curtis order used for `integral of sqrt(w)`.
pub const WKB_QUADRATURE_ORDER: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReferenceKind {
    Wkb,
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceValue {
    pub n: usize,
    pub value: f64,
    pub kind: ReferenceKind,
}

/// Lanczos approximation, `g = 7`, nine terms.
const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Gamma function for real arguments, with reflection below one half.
pub fn gamma(x: f64) -> f64 {
    if x < 0.5 {
        return PI / ((PI * x).sin() * gamma(1.0 - x));
    }
    let x = x - 1.0;
    let mut acc = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * acc
}

/// `(n pi / integral_a^b sqrt(w))^2`.
pub fn wkb_general(w: &Expr, domain: Domain, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::Invalid("WKB mode number starts at 1".into()));
    }
    let grid = ChebGrid::new(WKB_QUADRATURE_ORDER, domain)?;
    let roots = grid
        .mapped_nodes()
        .iter()
        .map(|&x| {
            let value = w.eval(x)?;
            if value < 0.0 {
                return Err(Error::NonPositive {
                    coefficient: "w",
                    x,
                    value,
                });
            }
            Ok(value.sqrt())
        })
        .collect::<Result<Vec<_>>>()?;
    let integral = grid.integrate(&roots)?;
    Ok((n as f64 * PI / integral).powi(2))
}

/// `9 n^2 / (49 pi^4)`.
pub fn wkb_example1(n: usize) -> f64 {
    let n = n as f64;
    9.0 * n * n / (49.0 * PI.powi(4))
}

/// `[3 Gamma(3/4) (n + 1/2) sqrt(pi) / Gamma(1/4)]^(4/3)`.
pub fn wkb_example2(n: usize) -> f64 {
    let base = 3.0 * gamma(0.75) * (n as f64 + 0.5) * PI.sqrt() / gamma(0.25);
    base.powf(4.0 / 3.0)
}

/// `1/4 + (pi n / ln 2)^2`.
pub fn exact_example3(n: usize) -> f64 {
    let k = PI * n as f64 / LN_2;
    0.25 + k * k
}

/// `sqrt(1 + x) sin(pi n ln(1 + x) / ln 2)` on `[0, 1]`.
pub fn exact_eigenfunction_example3(n: usize, x: f64) -> Result<f64> {
    Domain::new(0.0, 1.0)?.check(x)?;
    let arg = PI * n as f64 * x.ln_1p() / LN_2;
    Ok((1.0 + x).sqrt() * arg.sin())
}

/// `sqrt(6/(7 pi^3)) sin(n (x^3 + 3 x^2 pi + 3 pi^2 x) / (7 pi^2)) / (pi + x)`
/// on `[0, pi]`.
pub fn wkb_eigenfunction_example1(n: usize, x: f64) -> Result<f64> {
    Domain::new(0.0, PI)?.check(x)?;
    let cubic = x * (x * x + 3.0 * x * PI + 3.0 * PI * PI);
    let arg = n as f64 * cubic / (7.0 * PI * PI);
    Ok((6.0 / (7.0 * PI.powi(3))).sqrt() * arg.sin() / (PI + x))
}

/// `|exact - computed| / |exact|`.
pub fn relative_error(exact: f64, computed: f64) -> Result<f64> {
    if exact == 0.0 {
        return Err(Error::Invalid("relative error against zero".into()));
    }
    Ok((exact - computed).abs() / exact.abs())
}

/// Reference eigenvalue for mode `n` of a builtin problem.
pub fn reference_value(example: Example, n: usize) -> Result<ReferenceValue> {
    let first = example.first_index();
    if n < first {
        return Err(Error::Invalid(format!(
            "example {} counts modes from {first}",
            example.id()
        )));
    }
    let (value, kind) = match example {
        Example::Weighted => (wkb_example1(n), ReferenceKind::Wkb),
        Example::Quartic => (wkb_example2(n), ReferenceKind::Wkb),
        Example::Exact => (exact_example3(n), ReferenceKind::Exact),
    };
    Ok(ReferenceValue { n, value, kind })
}
