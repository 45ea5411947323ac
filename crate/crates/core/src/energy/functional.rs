use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::fem::{h1_inner, DiscreteFunction, Mesh, QuadratureRule};
use crate::problem::ValidatedProblem;

pub(crate) fn check_mesh(mesh: &Mesh, prob: &ValidatedProblem) -> Result<()> {
    if mesh.partition() == prob.partition() {
        Ok(())
    } else {
        Err(Error::ProblemMismatch)
    }
}

/// Visits every quadrature point of ODE interval `i` as
/// `(t, weight, element, local, z)` where `local` is the weight of the
/// element's right node and `z = u(t) - u(t_{i+1})`.
fn for_each_ode_point(
    u: &DiscreteFunction,
    i: usize,
    rule: &QuadratureRule,
    mut visit: impl FnMut(f64, f64, usize, f64, f64) -> Result<()>,
) -> Result<()> {
    let mesh = u.mesh();
    let iv = mesh.ode_interval(i);
    let end = u.nodal(iv.last);
    let nodes = mesh.nodes();
    for e in iv.elements() {
        let (ua, ub) = (u.nodal(e), u.nodal(e + 1));
        for (t, w, lam) in rule.mapped_with_local(nodes[e], nodes[e + 1]) {
            let z = ua + lam * (ub - ua) - end;
            visit(t, w, e, lam, z)?;
        }
    }
    Ok(())
}

/// The energy functional
/// `1/2 int |u'|^2 - sum (alpha_{i-1} - alpha_i) u(t_i)
///  - sum int_{s_i}^{t_{i+1}} [p (u - u(t_{i+1})) + F_i(t, u - u(t_{i+1}))]`.
pub fn energy(u: &DiscreteFunction, prob: &ValidatedProblem, rule: &QuadratureRule) -> Result<f64> {
    let mesh = u.mesh();
    check_mesh(mesh, prob)?;
    let mut value = 0.5 * h1_inner(u, u)?;
    for i in 1..=prob.impulse_count() {
        value -= prob.slopes().jump(i) * u.nodal(mesh.node_of_t(i));
    }
    for i in 0..=prob.impulse_count() {
        let f = prob.nonlinearity(i);
        let mut load = 0.0;
        for_each_ode_point(u, i, rule, |t, w, _, _, z| {
            load += w * (prob.p(t) * z + f.eval(t, z, 0)?);
            Ok(())
        })?;
        value -= load;
    }
    Ok(value)
}

/// Coefficients `I'(u) phi_j` for every interior hat function `phi_j`.
pub fn gradient(
    u: &DiscreteFunction,
    prob: &ValidatedProblem,
    rule: &QuadratureRule,
) -> Result<DiscreteFunction> {
    let mesh = u.mesh();
    check_mesh(mesh, prob)?;
    let mut g = vec![0.0; mesh.node_count()];
    for e in 0..mesh.element_count() {
        let s = (u.nodal(e + 1) - u.nodal(e)) / mesh.element_len(e);
        g[e] -= s;
        g[e + 1] += s;
    }
    for i in 1..=prob.impulse_count() {
        g[mesh.node_of_t(i)] -= prob.slopes().jump(i);
    }
    for i in 0..=prob.impulse_count() {
        let f = prob.nonlinearity(i);
        let mut total = 0.0;
        for_each_ode_point(u, i, rule, |t, w, e, lam, z| {
            let v = w * (f.eval(t, z, 1)? + prob.p(t));
            g[e] -= v * (1.0 - lam);
            g[e + 1] -= v * lam;
            total += v;
            Ok(())
        })?;
        // the test function enters as phi - phi(t_{i+1})
        g[mesh.ode_interval(i).last] += total;
    }
    let n = g.len();
    Ok(DiscreteFunction::from_coeffs(mesh, g[1..n - 1].to_vec()))
}

/// Second derivative `I''(u)[phi_j, phi_k]` over the interior nodes.
pub fn hessian(
    u: &DiscreteFunction,
    prob: &ValidatedProblem,
    rule: &QuadratureRule,
) -> Result<DMatrix<f64>> {
    let mesh = u.mesh();
    check_mesh(mesh, prob)?;
    if prob
        .nonlinearities()
        .iter()
        .any(|f| !f.supports_second_derivative())
    {
        return Err(Error::UndefinedDerivative { order: 2, x: 0.0 });
    }
    let n = mesh.interior_count();
    let mut h = DMatrix::zeros(n, n);
    let row = |node: usize| mesh.is_interior(node).then(|| node - 1);
    for e in 0..mesh.element_count() {
        let k = 1.0 / mesh.element_len(e);
        let (a, b) = (row(e), row(e + 1));
        if let Some(a) = a {
            h[(a, a)] += k;
        }
        if let Some(b) = b {
            h[(b, b)] += k;
        }
        if let (Some(a), Some(b)) = (a, b) {
            h[(a, b)] -= k;
            h[(b, a)] -= k;
        }
    }
    for i in 0..=prob.impulse_count() {
        let f = prob.nonlinearity(i);
        let end = mesh.ode_interval(i).last;
        for_each_ode_point(u, i, rule, |t, w, e, lam, z| {
            let d2 = w * f.eval(t, z, 2)?;
            if d2 == 0.0 {
                return Ok(());
            }
            let terms = [(e, 1.0 - lam), (e + 1, lam), (end, -1.0)];
            for &(na, ca) in &terms {
                let Some(ra) = row(na) else { continue };
                for &(nb, cb) in &terms {
                    let Some(rb) = row(nb) else { continue };
                    h[(ra, rb)] -= d2 * (ca * cb);
                }
            }
            Ok(())
        })?;
    }
    Ok(h)
}
