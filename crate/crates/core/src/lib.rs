//! Spectral collocation solver for regular Sturm-Liouville eigenproblems
//!
//! `-(p y')' + q y = lambda w y` on `[a, b]` with separated boundary
//! conditions `c y + d y' = 0`, discretized on Chebyshev extreme points and
//! solved as a dense generalized eigenproblem. Eigenvalues are certified by
//! comparing two resolutions.
//!
//! ```
//! use chebsl::{builtin, certify, Example};
//!
//! let prob = builtin(Example::Exact, None).unwrap();
//! let spec = certify(&prob, 32, 1e-8).unwrap();
//! assert!(spec.converged()[0]);
//! assert!((spec.eigenvalues()[0] - 20.79228845517).abs() < 1e-9);
//! ```

pub mod assemble;
pub mod cli;
pub mod diffmat;
pub mod eigen;
pub mod error;
pub mod expr;
pub mod grid;
pub mod interp;
pub mod par;
pub mod problem;
pub mod reference;

pub use assemble::{assemble, assemble_with, DiscreteEVP};
pub use diffmat::{cheb_diff_matrix, DiffMatrices};
pub use eigen::{
    certify, certify_with, convergence_sweep, solve, solve_problem, solve_with, Spectrum,
};
pub use error::{Error, Result};
pub use expr::{parse, Expr, ExprError};
pub use grid::{cheb_points, ChebGrid, Domain};
pub use interp::Eigenfunction;
pub use par::Execution;
pub use problem::{builtin, BoundaryCondition, Example, SLProblem};
