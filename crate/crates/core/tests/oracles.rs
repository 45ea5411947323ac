mod common;

use std::f64::consts::PI;
use std::sync::Arc;

use common::*;
use impulse_varsolve::fem::exact_first_eigenvalue;
use impulse_varsolve::prelude::*;
use impulse_varsolve::verify::{impulse_diagnostics, weak_residual_vector};
use impulse_varsolve::Error;

#[test]
fn newton_reproduces_linear_oracle() {
    for r in [1, 8, 64] {
        let dp = DiscreteProblem::new(linear_n1(), r, 5).unwrap();
        let res = newton_solve(&dp, &dp.zeros(), &SolveOptions::default()).unwrap();
        assert!(res.converged && res.iterations <= 2);
        assert!((res.u.eval(0.5) + 0.25).abs() <= 1e-10);
        assert!((res.energy + 0.125).abs() <= 1e-10);
        let oracle = linear_oracle(dp.problem(), dp.mesh()).unwrap();
        assert!((oracle.energy + 0.125).abs() < 1e-15);
        assert!((oracle.norm_sq - 0.25).abs() < 1e-15);
        assert!(weak_residual(&oracle.u, dp.problem(), dp.rule()).unwrap() <= 1e-12);
    }
}

#[test]
fn two_impulse_superposition() {
    let prob = linear_n2([0.0, 1.0, 0.0], 0.0);
    let dp = DiscreteProblem::new(prob, 6, 5).unwrap();
    let res = newton_solve(&dp, &dp.zeros(), &SolveOptions::default()).unwrap();
    assert!((res.u.eval(1.0 / 3.0) + 1.0 / 9.0).abs() <= 1e-9);
    let oracle = linear_oracle(dp.problem(), dp.mesh()).unwrap();
    assert!((oracle.u.eval(1.0 / 3.0) + 1.0 / 9.0).abs() <= 1e-15);
}

#[test]
fn oracle_with_constant_load_is_critical() {
    let prob = linear_n2([0.5, -1.0, 0.25], 0.3);
    for r in [1, 3, 10] {
        let m = Arc::new(Mesh::build(prob.partition(), r).unwrap());
        let oracle = linear_oracle(&prob, &m).unwrap();
        assert!(weak_residual(&oracle.u, &prob, &QuadratureRule::default()).unwrap() <= 1e-12);
        let e = energy(&oracle.u, &prob, &QuadratureRule::default()).unwrap();
        // the discrete minimum over a subspace cannot undercut the continuum one
        assert!(e >= oracle.energy - 1e-14);
        assert!(e - oracle.energy <= 0.1 / (r * r) as f64);
    }
    let strong = strong_residual(
        &linear_oracle(
            &linear_n1(),
            &Arc::new(Mesh::build(linear_n1().partition(), 8).unwrap()),
        )
        .unwrap()
        .u,
        &linear_n1(),
    )
    .unwrap();
    assert!(strong.ode.iter().all(|&r| r == 0.0));
    assert!(strong.impulses.iter().all(|s| s.variance < 1e-30));
}

#[test]
fn oracle_rejects_nonlinear_problems() {
    let prob = impulsive();
    let m = Arc::new(Mesh::build(prob.partition(), 2).unwrap());
    assert!(matches!(
        linear_oracle(&prob, &m),
        Err(Error::NonlinearPresent(0))
    ));
}

#[test]
fn eigenvalue_converges_quadratically() {
    let errs: Vec<f64> = [64, 128, 256]
        .iter()
        .map(|&r| {
            let m = Arc::new(Mesh::build(&Partition::without_impulses(1.0), r).unwrap());
            first_eigenvalue(&m).unwrap().numeric - PI * PI
        })
        .collect();
    assert!(errs[0] <= 0.04 && errs[1] <= 0.01 && errs[2] <= 0.0025);
    for w in errs.windows(2) {
        assert!((3.8..=4.2).contains(&(w[0] / w[1])));
    }
    assert_eq!(exact_first_eigenvalue(2.0), PI * PI / 4.0);
}

#[test]
fn constants_and_third_hypothesis() {
    let rule = QuadratureRule::default();
    let c = constants_report(&n0_power(Perturbation::zero()), &rule);
    assert!((c.beta - 1.318_309_9).abs() <= 1e-6);
    assert!((c.rho - 1.0 / (2.0 * (1.0 + 1.0 / PI))).abs() <= 1e-15);
    assert!((c.m_constant - (1.0 / (8.0 * (1.0 + 1.0 / PI).powi(2)) - 0.05)).abs() <= 1e-15);
    let grid = impulse_varsolve::energy::SamplingGrid::default();
    assert!(
        check_hypotheses(&n0_power(Perturbation::zero()), &grid, &rule)
            .h3
            .holds()
    );
    let failing = check_hypotheses(&n0_power(Perturbation::Constant(0.1)), &grid, &rule);
    assert!(!failing.h3.holds());
    assert!(failing.h3_margin < 0.0);
}

#[test]
fn weak_residual_of_zero_is_load() {
    let prob = validate_problem(ProblemSpec {
        partition: Partition::new(
            1.0,
            vec![Impulse {
                start: 0.5,
                end: 0.6,
            }],
        ),
        slopes: ImpulseSlopes(vec![0.0, 0.0]),
        nonlinearities: vec![Nonlinearity::Zero; 2],
        perturbation: Perturbation::Constant(0.3),
    })
    .unwrap();
    let m = Arc::new(Mesh::build(prob.partition(), 4).unwrap());
    let u = DiscreteFunction::zeros(&m);
    // -int p (phi_k - phi_k(end)) per ODE interval; exact for hats with constant p
    let nodes = m.nodes();
    let mut want = 0.0f64;
    for k in 1..m.node_count() - 1 {
        let mut load = 0.0;
        for (a, b) in [(0.0, 0.5), (0.6, 1.0)] {
            let hat_integral = |lo: f64, hi: f64| {
                let (l, c, r) = (nodes[k - 1], nodes[k], nodes[k + 1]);
                let left = ((c.min(hi) - l.max(lo)).max(0.0), l.max(lo), c.min(hi));
                let right = ((r.min(hi) - c.max(lo)).max(0.0), c.max(lo), r.min(hi));
                let phi = |t: f64| {
                    if t <= c {
                        (t - l) / (c - l)
                    } else {
                        (r - t) / (r - c)
                    }
                };
                left.0 * 0.5 * (phi(left.1) + phi(left.2))
                    + right.0 * 0.5 * (phi(right.1) + phi(right.2))
            };
            let end_value = if nodes[k] == b { 1.0 } else { 0.0 };
            load += 0.3 * (hat_integral(a, b) - (b - a) * end_value);
        }
        want = want.max(load.abs());
    }
    let got = weak_residual(&u, &prob, &QuadratureRule::default()).unwrap();
    assert!(want > 0.0);
    assert!((got - want).abs() <= 1e-14, "{got} vs {want}");
    assert_eq!(
        weak_residual_vector(&u, &prob, &QuadratureRule::default())
            .unwrap()
            .len(),
        m.interior_count()
    );
}

#[test]
fn impulse_slope_reports_deviation() {
    let prob = linear_n1();
    let m = Arc::new(Mesh::build(prob.partition(), 8).unwrap());
    let u = linear_oracle(&prob, &m).unwrap().u;
    let d = impulse_diagnostics(&u, &prob);
    assert!((d.impulses[0].fitted - 0.5).abs() <= 1e-12);
    assert!((d.impulses[0].deviation + 0.5).abs() <= 1e-12);
    assert!(d.impulses[0].variance <= 1e-24);
    assert_eq!((d.boundary.u_start, d.boundary.u_end), (0.0, 0.0));

    let zero = impulse_diagnostics(&DiscreteFunction::zeros(&m), &prob);
    assert_eq!(zero.impulses[0].fitted, 0.0);
    assert_eq!(zero.impulses[0].deviation, -1.0);
}

#[test]
fn noise_is_not_a_solution() {
    let dp = DiscreteProblem::new(impulsive(), 16, 5).unwrap();
    let u = random_function(&dp, &mut rng(21), 1.0);
    let s = strong_residual(&u, dp.problem()).unwrap();
    assert!(s.ode.iter().all(|&r| r > 1.0));
    assert!(s.impulses[0].variance > 0.0);
    assert!(weak_residual(&u, dp.problem(), dp.rule()).unwrap() > 1e-3);
}

#[test]
fn mountain_pass_geometry() {
    let dp = DiscreteProblem::new(n0_power(Perturbation::zero()), 64, 5).unwrap();
    let probe = sphere_probe(&dp, 200, 0, None).unwrap();
    let floor = dp.constants().sphere_floor();
    assert_eq!(probe.floor, floor);
    assert!(probe.min_energy >= floor - 1e-9 && floor > 0.0);
    assert_eq!(probe.below_floor, 0);
    assert!(probe.offsets_within_unit);

    let w = DiscreteFunction::interpolate(dp.mesh(), |t| (PI * t).sin());
    let (xi, e) = find_uphill_endpoint(&dp, &w, &SolveOptions::default()).unwrap();
    assert!(xi.is_finite() && xi > dp.constants().rho);
    assert!(dp.energy(&e).unwrap() <= 0.0);
    assert!(dp.h1_norm_sq(e.coeffs()).sqrt() > dp.constants().rho);
}

#[test]
fn failing_third_hypothesis_still_solves_with_warning() {
    let dp = DiscreteProblem::new(n0_power(Perturbation::Constant(0.1)), 32, 5).unwrap();
    let res = mountain_pass_solve(&dp, &SolveOptions::default()).unwrap();
    assert!(!res.warnings.is_empty());
}
