use serde::Serialize;

use crate::fem::{exact_first_eigenvalue, QuadratureRule};
use crate::problem::{Nonlinearity, ValidatedProblem};

/// Sub-intervals per ODE interval when integrating data that is not tied to a mesh.
const DATA_PIECES: usize = 64;

/// Constants entering the sphere estimate and the perturbation bound.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstantsReport {
    /// `(pi / T)^2`.
    pub lambda1: f64,
    /// Embedding constant in `||u||_inf <= beta ||u||`.
    pub beta: f64,
    /// Sphere radius `1 / (2 beta)`.
    pub rho: f64,
    /// `int M_i(t) dt` per ODE interval, `M_i(t) = max_{|x|=1} F_i(t, x)`.
    #[serde(rename = "Mi")]
    pub upper_integrals: Vec<f64>,
    /// `int m_i(t) dt` per ODE interval, `m_i(t) = min_{|x|=1} F_i(t, x)`.
    #[serde(rename = "mi")]
    pub lower_integrals: Vec<f64>,
    pub alpha_jump_sum: f64,
    /// `||p||_{L^2(s_i, t_{i+1})}` per ODE interval.
    pub p_norms: Vec<f64>,
    /// `sum sqrt(t_{i+1} - s_i) ||p||_{L^2(s_i, t_{i+1})}`.
    pub p_weighted_sum: f64,
    /// `1/(8 beta^2) - 1/2 sum |alpha_{i-1} - alpha_i| - sum int M_i`.
    #[serde(rename = "M_constant")]
    pub m_constant: f64,
}

impl ConstantsReport {
    /// Lower bound for the energy on the sphere of radius `rho`.
    pub fn sphere_floor(&self) -> f64 {
        self.m_constant - self.p_weighted_sum
    }
}

pub fn embedding_constant(horizon: f64, lambda1: f64) -> f64 {
    (horizon * lambda1).powf(-0.5) + horizon.sqrt()
}

pub(crate) fn unit_extremes(f: &Nonlinearity, t: f64) -> (f64, f64) {
    let a = f.eval(t, 1.0, 0).expect("order 0 is always defined");
    let b = f.eval(t, -1.0, 0).expect("order 0 is always defined");
    (a.max(b), a.min(b))
}

/// Composite integral over `[a, b]`, split at the perturbation's kinks.
pub(crate) fn integrate_data(
    prob: &ValidatedProblem,
    a: f64,
    b: f64,
    rule: &QuadratureRule,
    f: impl Fn(f64) -> f64,
) -> f64 {
    let mut cuts = vec![a];
    for k in 1..DATA_PIECES {
        cuts.push(a + (b - a) * k as f64 / DATA_PIECES as f64);
    }
    cuts.extend(prob.perturbation().kinks_within(a, b));
    cuts.push(b);
    cuts.sort_by(f64::total_cmp);
    cuts.windows(2)
        .map(|w| rule.integrate_interval(w[0], w[1], &f))
        .sum()
}

pub fn constants_report(prob: &ValidatedProblem, rule: &QuadratureRule) -> ConstantsReport {
    let horizon = prob.horizon();
    let lambda1 = exact_first_eigenvalue(horizon);
    let beta = embedding_constant(horizon, lambda1);
    let part = prob.partition();

    let mut upper_integrals = Vec::new();
    let mut lower_integrals = Vec::new();
    let mut p_norms = Vec::new();
    let mut p_weighted_sum = 0.0;
    for i in 0..=prob.impulse_count() {
        let (a, b) = part.ode_interval(i);
        let f = prob.nonlinearity(i);
        upper_integrals.push(integrate_data(prob, a, b, rule, |t| unit_extremes(f, t).0));
        lower_integrals.push(integrate_data(prob, a, b, rule, |t| unit_extremes(f, t).1));
        let norm = integrate_data(prob, a, b, rule, |t| prob.p(t).powi(2)).sqrt();
        p_weighted_sum += (b - a).sqrt() * norm;
        p_norms.push(norm);
    }
    let alpha_jump_sum = prob.slopes().jump_sum();
    let m_constant =
        1.0 / (8.0 * beta * beta) - 0.5 * alpha_jump_sum - upper_integrals.iter().sum::<f64>();
    ConstantsReport {
        lambda1,
        beta,
        rho: 1.0 / (2.0 * beta),
        upper_integrals,
        lower_integrals,
        alpha_jump_sum,
        p_norms,
        p_weighted_sum,
        m_constant,
    }
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::problem::*;

    fn n0(p: Perturbation) -> ValidatedProblem {
        validate_problem(ProblemSpec {
            partition: Partition::without_impulses(1.0),
            slopes: ImpulseSlopes(vec![0.0]),
            nonlinearities: vec![Nonlinearity::power(0.05, 4.0)],
            perturbation: p,
        })
        .unwrap()
    }

    #[test]
    fn unit_horizon_constants() {
        let c = constants_report(&n0(Perturbation::zero()), &QuadratureRule::default());
        assert!((c.beta - (1.0 + 1.0 / PI)).abs() < 1e-15);
        assert!((c.beta - 1.318_309_9).abs() < 1e-6);
        assert!((c.rho - 0.379_273_5).abs() < 1e-6);
        assert_eq!(c.rho, 1.0 / (2.0 * c.beta));
    }

    #[test]
    fn n0_power_constant() {
        let c = constants_report(&n0(Perturbation::zero()), &QuadratureRule::default());
        assert!((c.upper_integrals[0] - 0.05).abs() < 1e-15);
        assert_eq!(c.upper_integrals, c.lower_integrals);
        let want = 1.0 / (8.0 * (1.0 + 1.0 / PI).powi(2)) - 0.05;
        assert!((c.m_constant - want).abs() < 1e-15);
        assert!((c.m_constant - 0.021_924_2).abs() < 1e-6);
        assert_eq!(c.p_weighted_sum, 0.0);
    }

    #[test]
    fn constant_perturbation_norm() {
        let c = constants_report(&n0(Perturbation::Constant(0.1)), &QuadratureRule::default());
        assert!((c.p_norms[0] - 0.1).abs() < 1e-14);
        assert!((c.p_weighted_sum - 0.1).abs() < 1e-14);
    }

    #[test]
    fn sine_perturbation_norm() {
        let p = Perturbation::Sine {
            amplitude: 2.0,
            frequency: 3,
        };
        let c = constants_report(&n0(p), &QuadratureRule::default());
        // int_0^1 4 sin^2(3 pi t) = 2
        assert!((c.p_norms[0] - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn sampled_perturbation_is_split_at_kinks() {
        let p = Perturbation::Samples {
            ts: vec![0.0, 0.3001, 1.0],
            values: vec![0.0, 1.0, 0.0],
        };
        let c = constants_report(&n0(p), &QuadratureRule::default());
        // each linear ramp contributes len / 3
        assert!((c.p_norms[0].powi(2) - 1.0 / 3.0).abs() < 1e-14);
    }
}
