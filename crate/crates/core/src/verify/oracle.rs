use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fem::{DiscreteFunction, Mesh, QuadratureRule};
use crate::problem::{Perturbation, ValidatedProblem};

/// Closed-form critical point of the problem with every `F_i = 0`.
#[derive(Debug, Clone)]
pub struct OracleSolution {
    /// Nodal interpolant of the exact solution.
    pub u: DiscreteFunction,
    /// Energy of the exact (continuum) critical point, `-1/2 ||u*||^2`.
    pub energy: f64,
    /// `||u*||^2 = int |u*'|^2`.
    pub norm_sq: f64,
}

/// Green's function of `-u'' = delta_tau` with `u(0) = u(T) = 0`, i.e. the
/// hat with `(h_tau, v) = v(tau)`.
pub fn green(horizon: f64, tau: f64, t: f64) -> f64 {
    if t <= tau {
        t * (horizon - tau) / horizon
    } else {
        tau * (horizon - t) / horizon
    }
}

/// `int_a^b G(t, tau) d tau`.
fn green_integral(horizon: f64, a: f64, b: f64, t: f64) -> f64 {
    let m = t.clamp(a, b);
    (horizon - t) / horizon * (m * m - a * a) / 2.0
        + t / horizon * (horizon * (b - m) - (b * b - m * m) / 2.0)
}

/// Exact solution of `(u, v) = sum (alpha_{i-1} - alpha_i) v(t_i)
/// + p sum int_{s_i}^{t_{i+1}} (v - v(t_{i+1}))` for constant `p`.
pub fn linear_solution(prob: &ValidatedProblem) -> Result<impl Fn(f64) -> f64 + '_> {
    if let Some(i) = prob.nonlinearities().iter().position(|f| !f.is_zero()) {
        return Err(Error::NonlinearPresent(i));
    }
    let p = match prob.perturbation() {
        Perturbation::Constant(v) => *v,
        other if other.is_identically_zero() => 0.0,
        _ => return Err(Error::UnsupportedPerturbation),
    };
    let horizon = prob.horizon();
    let part = prob.partition();
    Ok(move |t: f64| {
        let mut u = 0.0;
        for i in 1..=part.len() {
            u += prob.slopes().jump(i) * green(horizon, part.impulses[i - 1].start, t);
        }
        if p != 0.0 {
            for i in 0..=part.len() {
                let (a, b) = part.ode_interval(i);
                u += p * (green_integral(horizon, a, b, t) - (b - a) * green(horizon, b, t));
            }
        }
        u
    })
}

pub fn linear_oracle(prob: &ValidatedProblem, mesh: &Arc<Mesh>) -> Result<OracleSolution> {
    let exact = linear_solution(prob)?;
    let part = prob.partition();
    let p = prob.p(0.0);

    // L(u*) = (u*, u*). u* is a cubic between partition points, so a 5-point
    // rule per macro-interval integrates it exactly.
    let rule = QuadratureRule::gauss_legendre(5)?;
    let mut load = 0.0;
    for i in 1..=part.len() {
        load += prob.slopes().jump(i) * exact(part.impulses[i - 1].start);
    }
    if p != 0.0 {
        for i in 0..=part.len() {
            let (a, b) = part.ode_interval(i);
            let ub = exact(b);
            load += p * rule.integrate_interval(a, b, |t| exact(t) - ub);
        }
    }
    Ok(OracleSolution {
        u: DiscreteFunction::interpolate(mesh, &exact),
        energy: -0.5 * load,
        norm_sq: load,
    })
}
