//! Independent checks of candidate solutions: the weak-form residual,
//! strong-form residuals, impulse-slope diagnostics, the closed-form linear
//! oracle and cross-mesh convergence.

mod cross_mesh;
mod oracle;
mod residual;

use serde::Serialize;

pub use cross_mesh::{
    cross_mesh_check, cross_mesh_pair, refine_solution, solve, sup_difference, CrossMeshConfig,
    CrossMeshReport, SolverKind, COMPARE_POINTS,
};
pub use oracle::{green, linear_oracle, linear_solution, OracleSolution};
pub use residual::{
    impulse_diagnostics, strong_residual, weak_residual, weak_residual_normalized,
    weak_residual_vector, BoundaryReport, ImpulseDiagnostics, ImpulseSlope, StrongResidual,
};

use crate::energy::energy;
use crate::error::Result;
use crate::fem::{DiscreteFunction, QuadratureRule};
use crate::problem::ValidatedProblem;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub energy: f64,
    /// `max_k |I'(u) phi_k|`.
    pub weak_residual: f64,
    /// Same, each term divided by `max(1, ||phi_k||)`.
    pub weak_residual_normalized: f64,
    pub strong_ode_residual: Vec<f64>,
    pub impulse_slopes: Vec<ImpulseSlope>,
    pub boundary: BoundaryReport,
    pub cross_mesh_sup_diff: Option<f64>,
}

pub fn verify_solution(
    u: &DiscreteFunction,
    prob: &ValidatedProblem,
    rule: &QuadratureRule,
) -> Result<VerificationReport> {
    let strong = strong_residual(u, prob)?;
    Ok(VerificationReport {
        energy: energy(u, prob, rule)?,
        weak_residual: weak_residual(u, prob, rule)?,
        weak_residual_normalized: weak_residual_normalized(u, prob, rule)?,
        strong_ode_residual: strong.ode,
        impulse_slopes: strong.impulses,
        boundary: strong.boundary,
        cross_mesh_sup_diff: None,
    })
}
