use nalgebra::{DMatrix, DVector, SymmetricEigen};

use super::options::{SolveOptions, SolveResult, TracePoint};
use crate::discrete::DiscreteProblem;
use crate::error::{Error, Result};
use crate::fem::DiscreteFunction;

const MAX_BACKTRACKS: usize = 60;

fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Number of negative eigenvalues of a symmetric matrix, ignoring those
/// within rounding of zero.
pub fn morse_index(h: &DMatrix<f64>) -> usize {
    if h.nrows() == 0 {
        return 0;
    }
    let eig = SymmetricEigen::new(h.clone()).eigenvalues;
    let scale = eig.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    eig.iter().filter(|&&v| v < -1e-10 * scale).count()
}

pub(crate) fn morse_at(dp: &DiscreteProblem, u: &DiscreteFunction) -> Option<usize> {
    dp.hessian(u).ok().map(|h| morse_index(&h))
}

/// Damped Newton on `I'(u) = 0`, backtracking on the Euclidean norm of the
/// gradient. A singular hessian falls back to a gradient-flow step.
pub fn newton_solve(
    dp: &DiscreteProblem,
    u0: &DiscreteFunction,
    opts: &SolveOptions,
) -> Result<SolveResult> {
    opts.validate()?;
    if !u0.same_mesh(&dp.zeros()) {
        return Err(Error::MeshMismatch);
    }
    let mut u = u0.clone();
    let mut g = dp.gradient(&u)?;
    let mut trace = vec![TracePoint {
        energy: dp.energy(&u)?,
        grad_norm: g.max_abs(),
    }];
    let mut warnings = Vec::new();
    let mut iterations = 0;
    let mut stalled = false;

    while g.max_abs() > opts.grad_tol && iterations < opts.max_newton_iters {
        let h = dp.hessian(&u)?;
        let rhs = DVector::from_iterator(g.coeffs().len(), g.coeffs().iter().map(|v| -v));
        let step = match h.lu().solve(&rhs) {
            Some(d) if d.iter().all(|v| v.is_finite()) => d.as_slice().to_vec(),
            _ => {
                warnings.push(format!(
                    "singular hessian at iteration {iterations}; took a gradient-flow step"
                ));
                dp.riesz(g.coeffs()).iter().map(|v| -v).collect()
            }
        };
        let step = DiscreteFunction::from_coeffs(dp.mesh(), step);

        let merit = norm2(g.coeffs());
        let mut t = 1.0;
        let mut accepted = None;
        for _ in 0..MAX_BACKTRACKS {
            let trial = u.add_scaled(t, &step);
            let gt = dp.gradient(&trial)?;
            if norm2(gt.coeffs()) <= (1.0 - opts.sufficient_decrease * t) * merit {
                accepted = Some((trial, gt));
                break;
            }
            t *= opts.backtrack;
        }
        iterations += 1;
        let Some((next, gn)) = accepted else {
            stalled = true;
            warnings.push(format!("line search failed at iteration {iterations}"));
            break;
        };
        u = next;
        g = gn;
        trace.push(TracePoint {
            energy: dp.energy(&u)?,
            grad_norm: g.max_abs(),
        });
    }

    let grad_norm = g.max_abs();
    let converged = grad_norm <= opts.grad_tol;
    if !converged && !stalled {
        warnings.push(format!("iteration cap {} reached", opts.max_newton_iters));
    }
    Ok(SolveResult {
        energy: trace.last().map(|p| p.energy).unwrap_or(0.0),
        morse_index: morse_at(dp, &u),
        u,
        grad_norm,
        iterations,
        converged,
        ps_trace: trace,
        warnings,
    })
}
