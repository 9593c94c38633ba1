//! Sturm-Liouville problems `-(p y')' + q y = lambda w y` on `[a, b]` with
//! separated conditions `c y + d y' = 0` at each end.

use crate::error::{Error, Result};
use crate::expr::{parse, Expr};
use crate::grid::Domain;

/// Number of equispaced points used to check positivity of `p` and `w`.
pub const POSITIVITY_SAMPLES: usize = 101;

/// `c y + d y' = 0` at one endpoint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryCondition {
    c: f64,
    d: f64,
}

impl BoundaryCondition {
    pub fn new(c: f64, d: f64) -> Result<Self> {
        if !(c.is_finite() && d.is_finite()) || (c == 0.0 && d == 0.0) {
            return Err(Error::DegenerateBoundary { c, d });
        }
        Ok(Self { c, d })
    }

    pub fn dirichlet() -> Self {
        Self { c: 1.0, d: 0.0 }
    }

    pub fn neumann() -> Self {
        Self { c: 0.0, d: 1.0 }
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    pub fn is_dirichlet(&self) -> bool {
        self.d == 0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Example {
    /// `-y'' = lambda (x + pi)^4 y` on `[0, pi]`.
    Weighted = 1,
    /// `-y'' + x^4 y = lambda y` on `[-d, d]`.
    Quartic = 2,
    /// `-y'' = lambda y / (1 + x)^2` on `[0, 1]`.
    Exact = 3,
}

impl Example {
    pub fn from_id(id: u32) -> Result<Self> {
        match id {
            1 => Ok(Example::Weighted),
            2 => Ok(Example::Quartic),
            3 => Ok(Example::Exact),
            other => Err(Error::UnknownExample(other)),
        }
    }

    pub fn id(self) -> u32 {
        self as u32
    }

    /// Index of the lowest mode: the oscillator counts from 0, the others from 1.
    pub fn first_index(self) -> usize {
        match self {
            Example::Quartic => 0,
            _ => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SLProblem {
    p: Expr,
    q: Expr,
    w: Expr,
    domain: Domain,
    bc_left: BoundaryCondition,
    bc_right: BoundaryCondition,
    label: String,
    first_index: usize,
}

impl SLProblem {
    /// Validates that `p` and `w` are positive on [`POSITIVITY_SAMPLES`]
    /// equispaced points of the domain, and that `q` evaluates there.
    pub fn new(
        p: Expr,
        q: Expr,
        w: Expr,
        domain: Domain,
        bc_left: BoundaryCondition,
        bc_right: BoundaryCondition,
        label: impl Into<String>,
    ) -> Result<Self> {
        let grid = domain.linspace(POSITIVITY_SAMPLES);
        for (name, coef) in [("p", &p), ("w", &w)] {
            for &x in &grid {
                let value = coef.eval(x)?;
                if value.is_nan() || value <= 0.0 || value.is_infinite() {
                    return Err(Error::NonPositive {
                        coefficient: name,
                        x,
                        value,
                    });
                }
            }
        }
        for &x in &grid {
            q.eval(x)?;
        }
        Ok(Self {
            p,
            q,
            w,
            domain,
            bc_left,
            bc_right,
            label: label.into(),
            first_index: 1,
        })
    }

    /// Shorthand for `p = 1`, Dirichlet at both ends.
    pub fn dirichlet(q: &str, w: &str, domain: Domain, label: &str) -> Result<Self> {
        Self::new(
            Expr::Num(1.0),
            parse(q)?,
            parse(w)?,
            domain,
            BoundaryCondition::dirichlet(),
            BoundaryCondition::dirichlet(),
            label,
        )
    }

    pub fn with_first_index(mut self, first_index: usize) -> Self {
        self.first_index = first_index;
        self
    }

    pub fn p(&self) -> &Expr {
        &self.p
    }

    pub fn q(&self) -> &Expr {
        &self.q
    }

    pub fn w(&self) -> &Expr {
        &self.w
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn bc_left(&self) -> BoundaryCondition {
        self.bc_left
    }

    pub fn bc_right(&self) -> BoundaryCondition {
        self.bc_right
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Mode number reported for the lowest eigenvalue.
    pub fn first_index(&self) -> usize {
        self.first_index
    }
}

/// Coefficients of `-y'' - (p'/p) y' + (q/p) y = lambda (w/p) y`.
#[derive(Debug, Clone)]
pub struct CanonicalCoefficients {
    p: Expr,
    dp: Expr,
    q: Expr,
    w: Expr,
}

impl CanonicalCoefficients {
    fn p_at(&self, x: f64) -> Result<f64> {
        let p = self.p.eval(x)?;
        if p == 0.0 {
            return Err(Error::NonPositive {
                coefficient: "p",
                x,
                value: p,
            });
        }
        Ok(p)
    }

    pub fn p_tilde(&self, x: f64) -> Result<f64> {
        let p = self.p_at(x)?;
        Ok(self.dp.eval(x)? / p)
    }

    pub fn q_tilde(&self, x: f64) -> Result<f64> {
        let p = self.p_at(x)?;
        Ok(self.q.eval(x)? / p)
    }

    pub fn w_tilde(&self, x: f64) -> Result<f64> {
        let p = self.p_at(x)?;
        Ok(self.w.eval(x)? / p)
    }

    /// Symbolic `p'`.
    pub fn p_derivative(&self) -> &Expr {
        &self.dp
    }
}

pub fn canonicalize(prob: &SLProblem) -> Result<CanonicalCoefficients> {
    for x in prob.domain.linspace(POSITIVITY_SAMPLES) {
        let value = prob.p.eval(x)?;
        if value == 0.0 {
            return Err(Error::NonPositive {
                coefficient: "p",
                x,
                value,
            });
        }
    }
    Ok(CanonicalCoefficients {
        p: prob.p.clone(),
        dp: prob.p.derivative(),
        q: prob.q.clone(),
        w: prob.w.clone(),
    })
}

/// One of the three reference problems. `d` is the truncation half-width
/// and is required for (and only used by) the quartic oscillator.
pub fn builtin(example: Example, d: Option<f64>) -> Result<SLProblem> {
    let prob = match example {
        Example::Weighted => SLProblem::dirichlet(
            "0",
            "(x+pi)^4",
            Domain::new(0.0, std::f64::consts::PI)?,
            "weighted: -y'' = lambda (x+pi)^4 y",
        )?,
        Example::Quartic => {
            let d = match d {
                Some(d) if d > 0.0 && d.is_finite() => d,
                _ => return Err(Error::MissingTruncation),
            };
            SLProblem::dirichlet(
                "x^4",
                "1",
                Domain::new(-d, d)?,
                &format!("quartic: -y'' + x^4 y = lambda y on [-{d}, {d}]"),
            )?
        }
        Example::Exact => SLProblem::dirichlet(
            "0",
            "1/(1+x)^2",
            Domain::new(0.0, 1.0)?,
            "exact: -y'' = lambda y/(1+x)^2",
        )?,
    };
    Ok(prob.with_first_index(example.first_index()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn boundary_conditions() {
        assert!(BoundaryCondition::new(0.0, 0.0).is_err());
        assert!(BoundaryCondition::new(f64::NAN, 1.0).is_err());
        assert!(BoundaryCondition::dirichlet().is_dirichlet());
        assert!(!BoundaryCondition::new(2.0, -1.0).unwrap().is_dirichlet());
    }

    #[test]
    fn builtin_domains() {
        let p1 = builtin(Example::Weighted, None).unwrap();
        assert_eq!(p1.domain(), Domain::new(0.0, PI).unwrap());
        assert!(p1.bc_left().is_dirichlet() && p1.bc_right().is_dirichlet());
        assert_eq!(p1.first_index(), 1);

        let p2 = builtin(Example::Quartic, Some(10.0)).unwrap();
        assert_eq!(p2.domain(), Domain::new(-10.0, 10.0).unwrap());
        assert_eq!(p2.first_index(), 0);

        let p3 = builtin(Example::Exact, None).unwrap();
        assert_eq!(p3.domain(), Domain::new(0.0, 1.0).unwrap());
    }

    #[test]
    fn quartic_needs_truncation() {
        assert_eq!(
            builtin(Example::Quartic, None),
            Err(Error::MissingTruncation)
        );
        assert_eq!(
            builtin(Example::Quartic, Some(-1.0)),
            Err(Error::MissingTruncation)
        );
        assert_eq!(Example::from_id(4), Err(Error::UnknownExample(4)));
    }

    #[test]
    fn canonical_coefficients() {
        let c = canonicalize(&builtin(Example::Weighted, None).unwrap()).unwrap();
        for x in [0.0, 1.0, PI] {
            assert_eq!(c.p_tilde(x).unwrap(), 0.0);
            assert_eq!(c.q_tilde(x).unwrap(), 0.0);
            approx::assert_relative_eq!(
                c.w_tilde(x).unwrap(),
                (x + PI).powi(4),
                max_relative = 1e-15
            );
        }
        let c = canonicalize(&builtin(Example::Quartic, Some(10.0)).unwrap()).unwrap();
        assert_eq!(c.q_tilde(-2.0).unwrap(), 16.0);
        assert_eq!(c.w_tilde(3.0).unwrap(), 1.0);

        let prob = SLProblem::new(
            parse("1+x").unwrap(),
            Expr::Num(0.0),
            Expr::Num(1.0),
            Domain::new(0.0, 2.0).unwrap(),
            BoundaryCondition::dirichlet(),
            BoundaryCondition::dirichlet(),
            "p = 1 + x",
        )
        .unwrap();
        let c = canonicalize(&prob).unwrap();
        assert_eq!(c.p_tilde(1.0).unwrap(), 0.5);
        assert_eq!(c.w_tilde(1.0).unwrap(), 0.5);
    }

    #[test]
    fn unit_p_gives_exact_zero_drift() {
        let prob = SLProblem::dirichlet("sin(x)", "2+cos(x)", Domain::new(-3.0, 4.0).unwrap(), "t")
            .unwrap();
        let c = canonicalize(&prob).unwrap();
        for x in prob.domain().linspace(50) {
            assert_eq!(c.p_tilde(x).unwrap(), 0.0);
        }
    }

    #[test]
    fn positivity_sampling() {
        let err = SLProblem::dirichlet("0", "x", Domain::canonical(), "w = x").unwrap_err();
        assert!(matches!(
            err,
            Error::NonPositive {
                coefficient: "w",
                ..
            }
        ));
        assert!(SLProblem::dirichlet("0", "(x+pi)^4", Domain::new(0.0, PI).unwrap(), "ok").is_ok());

        let err = SLProblem::new(
            parse("x - 1").unwrap(),
            Expr::Num(0.0),
            Expr::Num(1.0),
            Domain::new(0.0, 2.0).unwrap(),
            BoundaryCondition::dirichlet(),
            BoundaryCondition::dirichlet(),
            "p crosses zero",
        )
        .unwrap_err();
        assert!(matches!(
            err,
            Error::NonPositive {
                coefficient: "p",
                ..
            }
        ));

        let err =
            SLProblem::dirichlet("1/x", "1", Domain::new(0.0, 1.0).unwrap(), "q pole").unwrap_err();
        assert!(matches!(err, Error::Expr(_)));
    }
}
