use super::newton::morse_at;
use super::options::{SolveOptions, SolveResult, TracePoint};
use crate::discrete::DiscreteProblem;
use crate::error::{Error, Result};
use crate::fem::DiscreteFunction;

const MAX_BACKTRACKS: usize = 60;

/// One Armijo-backtracked step along the `H^1_0` steepest-descent direction
/// `-K^{-1} g`, starting from step length `t0`. Returns the new point, its
/// energy and the accepted step length, or `None` if no step decreased the
/// energy enough.
pub(crate) fn descent_step(
    dp: &DiscreteProblem,
    u: &DiscreteFunction,
    energy: f64,
    g: &DiscreteFunction,
    t0: f64,
    opts: &SolveOptions,
) -> Result<Option<(DiscreteFunction, f64, f64)>> {
    let dir: Vec<f64> = dp.riesz(g.coeffs()).iter().map(|v| -v).collect();
    line_search(
        dp,
        u,
        energy,
        g,
        &DiscreteFunction::from_coeffs(dp.mesh(), dir),
        t0,
        opts,
    )
}

/// Armijo backtracking along `dir` from step length `t0`.
pub(crate) fn line_search(
    dp: &DiscreteProblem,
    u: &DiscreteFunction,
    energy: f64,
    g: &DiscreteFunction,
    dir: &DiscreteFunction,
    t0: f64,
    opts: &SolveOptions,
) -> Result<Option<(DiscreteFunction, f64, f64)>> {
    let slope: f64 = dir
        .coeffs()
        .iter()
        .zip(g.coeffs())
        .map(|(d, g)| d * g)
        .sum();
    if !(slope < 0.0) {
        return Ok(None);
    }
    let mut t = t0;
    for _ in 0..MAX_BACKTRACKS {
        let trial = u.add_scaled(t, dir);
        let e = dp.energy(&trial)?;
        if e <= energy + opts.sufficient_decrease * t * slope {
            return Ok(Some((trial, e, t)));
        }
        t *= opts.backtrack;
    }
    Ok(None)
}

/// Steepest descent in the `H^1_0` inner product with backtracking; the
/// energy is non-increasing along the trace.
pub fn gradient_descent(
    dp: &DiscreteProblem,
    u0: &DiscreteFunction,
    opts: &SolveOptions,
) -> Result<SolveResult> {
    opts.validate()?;
    if !u0.same_mesh(&dp.zeros()) {
        return Err(Error::MeshMismatch);
    }
    let mut u = u0.clone();
    let mut e = dp.energy(&u)?;
    let mut g = dp.gradient(&u)?;
    let mut trace = vec![TracePoint {
        energy: e,
        grad_norm: g.max_abs(),
    }];
    let mut warnings = Vec::new();
    let mut iterations = 0;

    while g.max_abs() > opts.grad_tol {
        if iterations == opts.max_descent_iters {
            warnings.push(format!("iteration cap {} reached", opts.max_descent_iters));
            break;
        }
        let Some((next, en, _)) = descent_step(dp, &u, e, &g, 1.0, opts)? else {
            warnings.push(format!("line search failed at iteration {iterations}"));
            break;
        };
        iterations += 1;
        u = next;
        e = en;
        if !e.is_finite() {
            warnings.push("energy diverged".into());
            break;
        }
        g = dp.gradient(&u)?;
        trace.push(TracePoint {
            energy: e,
            grad_norm: g.max_abs(),
        });
    }
    let grad_norm = g.max_abs();
    Ok(SolveResult {
        energy: e,
        morse_index: morse_at(dp, &u),
        u,
        grad_norm,
        iterations,
        converged: grad_norm <= opts.grad_tol,
        ps_trace: trace,
        warnings,
    })
}
