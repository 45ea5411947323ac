use serde::Serialize;

use crate::discrete::DiscreteProblem;
use crate::error::{Error, Result};
use crate::fem::DiscreteFunction;
use crate::problem::ValidatedProblem;
use crate::solvers::{
    gradient_descent, mountain_pass_solve, newton_solve, SolveOptions, SolveResult,
};

/// Sample count for sup-norm comparisons.
pub const COMPARE_POINTS: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolverKind {
    Newton,
    Mpa,
    Descent,
}

/// Runs the chosen solver; Newton and descent start from zero.
pub fn solve(dp: &DiscreteProblem, kind: SolverKind, opts: &SolveOptions) -> Result<SolveResult> {
    match kind {
        SolverKind::Newton => newton_solve(dp, &dp.zeros(), opts),
        SolverKind::Descent => gradient_descent(dp, &dp.zeros(), opts),
        SolverKind::Mpa => mountain_pass_solve(dp, opts),
    }
}

/// Max of `|u - v|` over `COMPARE_POINTS` uniform points of `[0, T]`.
pub fn sup_difference(u: &DiscreteFunction, v: &DiscreteFunction) -> Result<f64> {
    if u.mesh().partition() != v.mesh().partition() {
        return Err(Error::ProblemMismatch);
    }
    let horizon = u.mesh().horizon();
    Ok((0..COMPARE_POINTS)
        .map(|k| {
            let t = horizon * k as f64 / (COMPARE_POINTS - 1) as f64;
            (u.eval(t) - v.eval(t)).abs()
        })
        .fold(0.0, f64::max))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossMeshReport {
    pub coarse_refinement: usize,
    pub fine_refinement: usize,
    pub coarse_energy: f64,
    pub fine_energy: f64,
    pub energy_diff: f64,
    pub sup_diff: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrossMeshConfig {
    pub solver: SolverKind,
    pub options: SolveOptions,
    pub quad_order: usize,
}

/// Solutions at refinements `r` and `2r`, the finer one started from the
/// interpolated coarse solution.
pub fn cross_mesh_pair(
    prob: &ValidatedProblem,
    cfg: &CrossMeshConfig,
    r: usize,
) -> Result<(SolveResult, SolveResult)> {
    let coarse_dp = DiscreteProblem::new(prob.clone(), r, cfg.quad_order)?;
    let coarse = solve(&coarse_dp, cfg.solver, &cfg.options)?;
    if !coarse.converged {
        return Err(Error::NoConvergence(format!(
            "coarse solve at refinement {r}"
        )));
    }
    let fine = refine_solution(prob, cfg, &coarse.u, 2 * r)?;
    Ok((coarse, fine))
}

/// Re-solves on `refinement` starting from `u` transferred to the new mesh.
pub fn refine_solution(
    prob: &ValidatedProblem,
    cfg: &CrossMeshConfig,
    u: &DiscreteFunction,
    refinement: usize,
) -> Result<SolveResult> {
    if u.mesh().partition() != prob.partition() {
        return Err(Error::ProblemMismatch);
    }
    let dp = DiscreteProblem::new(prob.clone(), refinement, cfg.quad_order)?;
    let start = u.transfer_to(dp.mesh());
    let res = match cfg.solver {
        SolverKind::Descent => gradient_descent(&dp, &start, &cfg.options)?,
        _ => newton_solve(&dp, &start, &cfg.options)?,
    };
    if !res.converged {
        return Err(Error::NoConvergence(format!(
            "solve at refinement {refinement}"
        )));
    }
    Ok(res)
}

pub fn cross_mesh_check(
    prob: &ValidatedProblem,
    cfg: &CrossMeshConfig,
    r: usize,
) -> Result<CrossMeshReport> {
    let (coarse, fine) = cross_mesh_pair(prob, cfg, r)?;
    Ok(CrossMeshReport {
        coarse_refinement: r,
        fine_refinement: 2 * r,
        coarse_energy: coarse.energy,
        fine_energy: fine.energy,
        energy_diff: fine.energy - coarse.energy,
        sup_diff: sup_difference(&coarse.u, &fine.u)?,
    })
}
