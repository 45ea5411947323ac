//! Variational solver for second-order boundary-value problems with
//! non-instantaneous impulses:
//!
//! ```text
//! -u''(t) = D_x F_i(t, u(t) - u(t_{i+1})) + p(t),  t in (s_i, t_{i+1}],
//!  u'(t)  = alpha_i,                               t in (t_i, s_i],
//!  u(0) = u(T) = 0.
//! ```
//!
//! Weak solutions are the critical points of an energy functional on
//! `H^1_0(0, T)`. The crate discretizes that space with piecewise-linear
//! elements aligned to the impulse partition, evaluates the functional and its
//! derivatives, checks the growth and smallness hypotheses behind the
//! mountain-pass geometry, and finds critical points with Newton, descent and
//! a path-deforming mountain-pass solver. The [`verify`] module re-checks
//! candidates independently.
//!
//! ```
//! use std::sync::Arc;
//! use impulse_varsolve::prelude::*;
//!
//! let problem = validate_problem(ProblemSpec {
//!     partition: Partition::new(1.0, vec![Impulse { start: 0.5, end: 0.6 }]),
//!     slopes: ImpulseSlopes(vec![0.0, 1.0]),
//!     nonlinearities: vec![Nonlinearity::Zero, Nonlinearity::Zero],
//!     perturbation: Perturbation::zero(),
//! })?;
//! let dp = DiscreteProblem::new(problem, 8, 5)?;
//! let res = newton_solve(&dp, &DiscreteFunction::zeros(dp.mesh()), &SolveOptions::default())?;
//! assert!(res.converged);
//! assert!((res.u.eval(0.5) + 0.25).abs() < 1e-12);
//! # Ok::<(), impulse_varsolve::Error>(())
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod energy;
pub mod error;
pub mod fem;
pub mod problem;
pub mod solvers;
pub mod verify;

mod discrete;

pub use discrete::DiscreteProblem;
pub use error::{Error, Result};

pub mod prelude {
    pub use crate::discrete::DiscreteProblem;
    pub use crate::energy::{
        check_hypotheses, constants_report, energy, gradient, hessian, SamplingGrid,
    };
    pub use crate::fem::{
        first_eigenvalue, h1_inner, norms, DiscreteFunction, Mesh, QuadratureRule,
    };
    pub use crate::problem::{
        validate_problem, Impulse, ImpulseSlopes, Nonlinearity, Partition, Perturbation, PowerTerm,
        ProblemSpec, ValidatedProblem,
    };
    pub use crate::solvers::{
        find_uphill_endpoint, gradient_descent, mountain_pass_solve, newton_solve, sphere_probe,
        SolveOptions, SolveResult,
    };
    pub use crate::verify::{linear_oracle, strong_residual, weak_residual};
}
