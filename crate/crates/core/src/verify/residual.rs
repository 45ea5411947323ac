use serde::Serialize;

use crate::energy::check_mesh;
use crate::error::Result;
use crate::fem::{DiscreteFunction, QuadratureRule};
use crate::problem::ValidatedProblem;

/// `phi_k(t)` for the hat at node `k`.
fn hat_value(nodes: &[f64], k: usize, t: f64) -> f64 {
    if t <= nodes[k - 1] || t >= nodes[k + 1] {
        0.0
    } else if t <= nodes[k] {
        (t - nodes[k - 1]) / (nodes[k] - nodes[k - 1])
    } else {
        (nodes[k + 1] - t) / (nodes[k + 1] - nodes[k])
    }
}

/// `I'(u) phi_k` for every interior node `k`, each evaluated on its own from
/// the weak formulation rather than by element assembly.
pub fn weak_residual_vector(
    u: &DiscreteFunction,
    prob: &ValidatedProblem,
    rule: &QuadratureRule,
) -> Result<Vec<f64>> {
    let mesh = u.mesh();
    check_mesh(mesh, prob)?;
    let nodes = mesh.nodes();
    let n_ode = prob.impulse_count() + 1;

    // D_x F_i(t, u - u(t_{i+1})) + p at time t
    let load = |i: usize, t: f64| -> Result<f64> {
        let end = u.nodal(mesh.ode_interval(i).last);
        Ok(prob.nonlinearity(i).eval(t, u.eval(t) - end, 1)? + prob.p(t))
    };

    let mut totals = Vec::with_capacity(n_ode);
    for i in 0..n_ode {
        let iv = mesh.ode_interval(i);
        let mut s = 0.0;
        for e in iv.elements() {
            for (t, w) in rule.mapped(nodes[e], nodes[e + 1]) {
                s += w * load(i, t)?;
            }
        }
        totals.push(s);
    }

    let mut out = Vec::with_capacity(mesh.interior_count());
    for k in 1..mesh.node_count() - 1 {
        let left = (u.nodal(k) - u.nodal(k - 1)) / (nodes[k] - nodes[k - 1]);
        let right = (u.nodal(k + 1) - u.nodal(k)) / (nodes[k + 1] - nodes[k]);
        let mut r = left - right;
        for i in 1..=prob.impulse_count() {
            if mesh.node_of_t(i) == k {
                r -= prob.slopes().jump(i);
            }
        }
        for (i, total) in totals.iter().enumerate() {
            let iv = mesh.ode_interval(i);
            for e in [k - 1, k] {
                if e >= iv.first && e < iv.last {
                    for (t, w) in rule.mapped(nodes[e], nodes[e + 1]) {
                        r -= w * load(i, t)? * hat_value(nodes, k, t);
                    }
                }
            }
            if iv.last == k {
                r += total;
            }
        }
        out.push(r);
    }
    Ok(out)
}

/// `max_k |I'(u) phi_k|`.
pub fn weak_residual(
    u: &DiscreteFunction,
    prob: &ValidatedProblem,
    rule: &QuadratureRule,
) -> Result<f64> {
    Ok(weak_residual_vector(u, prob, rule)?
        .iter()
        .fold(0.0, |m, r| m.max(r.abs())))
}

/// `max_k |I'(u) phi_k| / max(1, ||phi_k||)`.
pub fn weak_residual_normalized(
    u: &DiscreteFunction,
    prob: &ValidatedProblem,
    rule: &QuadratureRule,
) -> Result<f64> {
    let nodes = u.mesh().nodes();
    Ok(weak_residual_vector(u, prob, rule)?
        .iter()
        .enumerate()
        .map(|(j, r)| {
            let k = j + 1;
            let norm = (1.0 / (nodes[k] - nodes[k - 1]) + 1.0 / (nodes[k + 1] - nodes[k])).sqrt();
            r.abs() / norm.max(1.0)
        })
        .fold(0.0, f64::max))
}

/// Slope statistics on one impulse interval `(t_i, s_i]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ImpulseSlope {
    pub index: usize,
    /// Mean slope `(u(s_i) - u(t_i)) / (s_i - t_i)`.
    pub fitted: f64,
    /// Length-weighted variance of the element slopes.
    pub variance: f64,
    /// `fitted - alpha_i`.
    pub deviation: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundaryReport {
    pub u_start: f64,
    pub u_end: f64,
    /// One-sided slope on the first element.
    pub du_start: f64,
    /// `du_start - alpha_0`.
    pub du_start_deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ImpulseDiagnostics {
    pub impulses: Vec<ImpulseSlope>,
    pub boundary: BoundaryReport,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StrongResidual {
    /// Discrete `L^2` norm of `-u'' - D_x F_i - p` per ODE interval.
    pub ode: Vec<f64>,
    pub impulses: Vec<ImpulseSlope>,
    pub boundary: BoundaryReport,
}

/// Slopes on the impulse intervals and at the origin. These are reported,
/// not judged: weak solutions are affine on each impulse interval but their
/// slope need not equal `alpha_i`.
pub fn impulse_diagnostics(u: &DiscreteFunction, prob: &ValidatedProblem) -> ImpulseDiagnostics {
    let mesh = u.mesh();
    let slopes = u.slopes();
    let alphas = prob.slopes().as_slice();
    let impulses = (1..=prob.impulse_count())
        .map(|i| {
            let iv = mesh.impulse_interval(i);
            let (a, b) = (mesh.nodes()[iv.first], mesh.nodes()[iv.last]);
            let fitted = (u.nodal(iv.last) - u.nodal(iv.first)) / (b - a);
            let variance = iv
                .elements()
                .map(|e| mesh.element_len(e) * (slopes[e] - fitted).powi(2))
                .sum::<f64>()
                / (b - a);
            ImpulseSlope {
                index: i,
                fitted,
                variance,
                deviation: fitted - alphas[i],
            }
        })
        .collect();
    let du_start = slopes[0];
    ImpulseDiagnostics {
        impulses,
        boundary: BoundaryReport {
            u_start: u.nodal(0),
            u_end: u.nodal(mesh.node_count() - 1),
            du_start,
            du_start_deviation: du_start - alphas[0],
        },
    }
}

/// Strong-form residuals from three-point second differences at the nodes
/// strictly inside each ODE interval.
pub fn strong_residual(u: &DiscreteFunction, prob: &ValidatedProblem) -> Result<StrongResidual> {
    let mesh = u.mesh();
    check_mesh(mesh, prob)?;
    let nodes = mesh.nodes();
    let mut ode = Vec::with_capacity(prob.impulse_count() + 1);
    for i in 0..=prob.impulse_count() {
        let iv = mesh.ode_interval(i);
        let end = u.nodal(iv.last);
        let f = prob.nonlinearity(i);
        let mut sq = 0.0;
        for k in iv.first + 1..iv.last {
            let (hl, hr) = (nodes[k] - nodes[k - 1], nodes[k + 1] - nodes[k]);
            let upp = 2.0
                * ((u.nodal(k + 1) - u.nodal(k)) / hr - (u.nodal(k) - u.nodal(k - 1)) / hl)
                / (hl + hr);
            let r = -upp - f.eval(nodes[k], u.nodal(k) - end, 1)? - prob.p(nodes[k]);
            sq += r * r * 0.5 * (hl + hr);
        }
        ode.push(sq.sqrt());
    }
    let diag = impulse_diagnostics(u, prob);
    Ok(StrongResidual {
        ode,
        impulses: diag.impulses,
        boundary: diag.boundary,
    })
}
