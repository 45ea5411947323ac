use serde::Serialize;

use crate::error::{Error, Result};
use crate::fem::DiscreteFunction;

#[derive(Debug, Clone, PartialEq)]
pub struct SolveOptions {
    /// Stopping threshold on the max-norm of the gradient coefficients.
    pub grad_tol: f64,
    pub max_newton_iters: usize,
    /// Cap for descent and for the path stage of the mountain-pass solver.
    pub max_descent_iters: usize,
    /// Step reduction factor in backtracking.
    pub backtrack: f64,
    /// Armijo constant.
    pub sufficient_decrease: f64,
    pub path_points: usize,
    /// Initial step for deforming the path maximizer.
    pub descent_step: f64,
    /// Path points are redistributed by arc length this often.
    pub reparam_every: usize,
    pub seed: u64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            grad_tol: 1e-10,
            max_newton_iters: 200,
            max_descent_iters: 20_000,
            backtrack: 0.5,
            sufficient_decrease: 1e-4,
            path_points: 41,
            descent_step: 1e-2,
            reparam_every: 50,
            seed: 0,
        }
    }
}

impl SolveOptions {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::BadOption(m.to_string()));
        if !(self.grad_tol > 0.0) {
            return bad("grad_tol must be positive");
        }
        if self.max_newton_iters == 0 || self.max_descent_iters == 0 {
            return bad("iteration caps must be positive");
        }
        if !(self.backtrack > 0.0 && self.backtrack < 1.0) {
            return bad("backtracking factor must lie in (0, 1)");
        }
        if !(self.sufficient_decrease > 0.0 && self.sufficient_decrease < 1.0) {
            return bad("sufficient-decrease constant must lie in (0, 1)");
        }
        if self.path_points < 3 {
            return bad("path needs at least 3 points");
        }
        if !(self.descent_step > 0.0) {
            return bad("descent step must be positive");
        }
        if self.reparam_every == 0 {
            return bad("reparametrization interval must be positive");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TracePoint {
    pub energy: f64,
    pub grad_norm: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    pub u: DiscreteFunction,
    pub energy: f64,
    /// Max-norm of the gradient coefficients at `u`.
    pub grad_norm: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Number of negative eigenvalues of the hessian at `u`, when available.
    pub morse_index: Option<usize>,
    /// `(energy, grad_norm)` per iteration; a converged run ends with a
    /// vanishing gradient at bounded energy.
    pub ps_trace: Vec<TracePoint>,
    pub warnings: Vec<String>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        SolveOptions::default().validate().unwrap();
    }

    #[test]
    fn short_path_rejected() {
        let o = SolveOptions {
            path_points: 2,
            ..SolveOptions::default()
        };
        assert!(o.validate().is_err());
    }
}
