//! Acceptance suite: one PASS/FAIL line per criterion at the stated
//! tolerances. Run with `cargo test -p impulse-varsolve-cli --test acceptance -- --nocapture`.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::sync::Arc;

use impulse_varsolve::energy::SamplingGrid;
use impulse_varsolve::fem::norms;
use impulse_varsolve::prelude::*;
use impulse_varsolve::verify::sup_difference;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_impulse-varsolve"))
}

fn problem(
    partition: Partition,
    alphas: Vec<f64>,
    fs: Vec<Nonlinearity>,
    p: Perturbation,
) -> ValidatedProblem {
    validate_problem(ProblemSpec {
        partition,
        slopes: ImpulseSlopes(alphas),
        nonlinearities: fs,
        perturbation: p,
    })
    .unwrap()
}

fn n0_power(p: f64) -> ValidatedProblem {
    problem(
        Partition::without_impulses(1.0),
        vec![0.0],
        vec![Nonlinearity::power(0.05, 4.0)],
        Perturbation::Constant(p),
    )
}

fn impulsive() -> ValidatedProblem {
    problem(
        Partition::new(
            1.0,
            vec![Impulse {
                start: 0.4,
                end: 0.5,
            }],
        ),
        vec![0.0, 0.1],
        vec![Nonlinearity::power(0.01, 3.0); 2],
        Perturbation::Constant(0.005),
    )
}

fn random_function(dp: &DiscreteProblem, rng: &mut ChaCha8Rng) -> DiscreteFunction {
    let coeffs = (0..dp.mesh().interior_count())
        .map(|_| rng.random_range(-1.0..1.0))
        .collect();
    DiscreteFunction::from_coeffs(dp.mesh(), coeffs)
}

fn criterion_1() -> Outcome {
    let prob = problem(
        Partition::new(
            1.0,
            vec![Impulse {
                start: 0.5,
                end: 0.6,
            }],
        ),
        vec![0.0, 1.0],
        vec![Nonlinearity::Zero; 2],
        Perturbation::zero(),
    );
    let mut pass = true;
    let mut detail = Vec::new();
    for r in [1, 8, 64] {
        let dp = DiscreteProblem::new(prob.clone(), r, 5).unwrap();
        let res = newton_solve(&dp, &dp.zeros(), &SolveOptions::default()).unwrap();
        let du = (res.u.eval(0.5) + 0.25).abs();
        let de = (res.energy + 0.125).abs();
        pass &= res.converged && res.iterations <= 2 && du <= 1e-10 && de <= 1e-10;
        detail.push(format!(
            "r={r}: {} iters, |u(0.5)+0.25|={du:.1e}, |I+0.125|={de:.1e}",
            res.iterations
        ));
    }
    outcome(pass, detail.join("; "))
}

fn criterion_2() -> Outcome {
    let prob = problem(
        Partition::new(
            1.0,
            vec![
                Impulse {
                    start: 1.0 / 3.0,
                    end: 0.4,
                },
                Impulse {
                    start: 2.0 / 3.0,
                    end: 0.75,
                },
            ],
        ),
        vec![0.0, 1.0, 0.0],
        vec![Nonlinearity::Zero; 3],
        Perturbation::zero(),
    );
    let dp = DiscreteProblem::new(prob, 6, 5).unwrap();
    let res = newton_solve(&dp, &dp.zeros(), &SolveOptions::default()).unwrap();
    let err = (res.u.eval(1.0 / 3.0) + 1.0 / 9.0).abs();
    outcome(
        res.converged && err <= 1e-9,
        format!("|u(1/3)+1/9| = {err:.1e}"),
    )
}

fn criterion_3() -> Outcome {
    let bounds = [0.04, 0.01, 0.0025];
    let errs: Vec<f64> = [64, 128, 256]
        .iter()
        .map(|&r| {
            let m = Arc::new(Mesh::build(&Partition::without_impulses(1.0), r).unwrap());
            first_eigenvalue(&m).unwrap().numeric - PI * PI
        })
        .collect();
    let ratios = [errs[0] / errs[1], errs[1] / errs[2]];
    let pass = errs.iter().zip(bounds).all(|(e, b)| e.abs() <= b)
        && ratios.iter().all(|r| (3.8..=4.2).contains(r));
    outcome(
        pass,
        format!(
            "errors {:.3e}/{:.3e}/{:.3e}, ratios {:.3}/{:.3}",
            errs[0], errs[1], errs[2], ratios[0], ratios[1]
        ),
    )
}

fn criterion_4() -> Outcome {
    let dp = DiscreteProblem::new(impulsive(), 8, 5).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let h = 1e-5;
    let (mut worst_g, mut worst_h) = (0.0f64, 0.0f64);
    for _ in 0..50 {
        let u = random_function(&dp, &mut rng);
        let g = dp.gradient(&u).unwrap();
        for j in 0..g.coeffs().len() {
            let mut up = u.clone();
            let mut dn = u.clone();
            up.coeffs_mut()[j] += h;
            dn.coeffs_mut()[j] -= h;
            let fd = (dp.energy(&up).unwrap() - dp.energy(&dn).unwrap()) / (2.0 * h);
            let err = (g.coeffs()[j] - fd).abs();
            if err > 1e-10 {
                worst_g = worst_g.max(err / fd.abs());
            }
        }
        let v = random_function(&dp, &mut rng);
        let hess = dp.hessian(&u).unwrap();
        let gp = dp.gradient(&u.add_scaled(h, &v)).unwrap();
        let gm = dp.gradient(&u.add_scaled(-h, &v)).unwrap();
        let n = v.coeffs().len();
        let hv: Vec<f64> = (0..n)
            .map(|i| (0..n).map(|k| hess[(i, k)] * v.coeffs()[k]).sum())
            .collect();
        let scale = hv.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        for (i, hvi) in hv.iter().enumerate() {
            let fd = (gp.coeffs()[i] - gm.coeffs()[i]) / (2.0 * h);
            worst_h = worst_h.max((hvi - fd).abs() / scale);
        }
    }
    outcome(
        worst_g <= 1e-6 && worst_h <= 1e-5,
        format!("gradient rel dev {worst_g:.1e}, hessian-vector rel dev {worst_h:.1e}"),
    )
}

fn criterion_5() -> Outcome {
    let m = Arc::new(Mesh::build(&Partition::without_impulses(1.0), 64).unwrap());
    let beta = 1.0 + 1.0 / PI;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut violations = 0;
    for _ in 0..100 {
        let coeffs = (0..m.interior_count())
            .map(|_| rng.random_range(-1.0..1.0))
            .collect();
        let n = norms(&DiscreteFunction::from_coeffs(&m, coeffs));
        if n.sup > beta * n.h1 || n.l2 * n.l2 > n.h1 * n.h1 / (PI * PI) {
            violations += 1;
        }
    }
    outcome(
        violations == 0,
        format!("{violations} violations in 100 draws"),
    )
}

fn criterion_6() -> Outcome {
    let rule = QuadratureRule::default();
    let c = constants_report(&n0_power(0.0), &rule);
    let beta_ok = (c.beta - 1.318_309_9).abs() <= 1e-6;
    // The stated rho and M literals are roundings of 1/(2 beta) and
    // 1/(8 beta^2) - 0.05 that are off in the seventh decimal; compare
    // against the same expressions evaluated for the stated beta.
    let rho_want = 1.0 / (2.0 * 1.318_309_9);
    let m_want = 1.0 / (8.0 * 1.318_309_9f64.powi(2)) - 0.05;
    let rho_ok = (c.rho - rho_want).abs() <= 1e-6;
    let m_ok = (c.m_constant - m_want).abs() <= 1e-6;
    let grid = SamplingGrid::default();
    let holds = check_hypotheses(&n0_power(0.0), &grid, &rule).h3.holds();
    let fails = !check_hypotheses(&n0_power(0.1), &grid, &rule).h3.holds();
    outcome(
        beta_ok && rho_ok && m_ok && holds && fails,
        format!(
            "beta={:.7}, rho={:.7} (literal 0.3792724 differs by {:.1e}), M={:.7} (literal 0.0219258 differs by {:.1e}), H3 p=0 {}, p=0.1 {}",
            c.beta,
            c.rho,
            (c.rho - 0.379_272_4).abs(),
            c.m_constant,
            (c.m_constant - 0.021_925_8).abs(),
            if holds { "holds" } else { "fails" },
            if fails { "fails" } else { "holds" },
        ),
    )
}

fn criterion_7() -> Outcome {
    let dp = DiscreteProblem::new(n0_power(0.0), 64, 5).unwrap();
    let probe = sphere_probe(&dp, 200, 0, None).unwrap();
    let floor = dp.constants().sphere_floor();
    let probe_ok = probe.min_energy >= floor - 1e-9 && floor > 0.0;
    let w = DiscreteFunction::interpolate(dp.mesh(), |t| (PI * t).sin());
    let w = w.scaled(1.0 / dp.h1_norm_sq(w.coeffs()).sqrt());
    let (xi, e) = find_uphill_endpoint(&dp, &w, &SolveOptions::default()).unwrap();
    let ie = dp.energy(&e).unwrap();
    let rho = dp.constants().rho;
    let endpoint_ok = xi.is_finite() && ie <= 0.0 && xi > rho;
    outcome(
        probe_ok && endpoint_ok,
        format!(
            "probe min {:.6e} >= floor {floor:.6e}; xi={xi}, I(xi w)={ie:.3e}, rho={rho:.6}",
            probe.min_energy
        ),
    )
}

fn criterion_8() -> Outcome {
    let prob = n0_power(0.0);
    let runs: Vec<SolveResult> = [32, 64, 128]
        .iter()
        .map(|&r| {
            let dp = DiscreteProblem::new(prob.clone(), r, 5).unwrap();
            mountain_pass_solve(&dp, &SolveOptions::default()).unwrap()
        })
        .collect();
    let solved = runs
        .iter()
        .all(|r| r.converged && r.grad_norm <= 1e-10 && r.energy > 0.0 && r.morse_index == Some(1));
    let strong: Vec<f64> = runs
        .iter()
        .map(|r| strong_residual(&r.u, &prob).unwrap().ode[0])
        .collect();
    let strong_ratios = [strong[0] / strong[1], strong[1] / strong[2]];
    let d1 = sup_difference(&runs[0].u, &runs[1].u).unwrap();
    let d2 = sup_difference(&runs[1].u, &runs[2].u).unwrap();
    let sup_ratio = d1 / d2;
    // "approximately 4" for the strong residual is read as the same [3, 5]
    // band used for the sup differences.
    let pass = solved
        && strong_ratios.iter().all(|r| (3.0..=5.0).contains(r))
        && (3.0..=5.0).contains(&sup_ratio);
    outcome(
        pass,
        format!(
            "energies {:.6}/{:.6}/{:.6}, grad {:.1e}/{:.1e}/{:.1e}, morse {:?}, strong ratios {:.3}/{:.3}, sup diffs {d1:.3e}/{d2:.3e} ratio {sup_ratio:.3}",
            runs[0].energy,
            runs[1].energy,
            runs[2].energy,
            runs[0].grad_norm,
            runs[1].grad_norm,
            runs[2].grad_norm,
            runs.iter().map(|r| r.morse_index.unwrap_or(usize::MAX)).collect::<Vec<_>>(),
            strong_ratios[0],
            strong_ratios[1],
        ),
    )
}

fn run_json(cmd: &mut Command) -> (i32, Value) {
    let out = cmd.output().unwrap();
    let code = out.status.code().unwrap_or(-1);
    let v = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (code, v)
}

fn criterion_9() -> Outcome {
    let cfg = fixture("impulsive_n1.cfg");
    let dir = tempfile::tempdir().unwrap();
    let (check_code, _) = run_json(bin().arg("check").arg(&cfg));
    let mut pass = check_code == 0
        && check_hypotheses(
            &impulsive(),
            &SamplingGrid::default(),
            &QuadratureRule::default(),
        )
        .h3
        .holds();
    let mut detail = vec![format!("check exit {check_code}")];
    for r in [32, 64] {
        let table = dir.path().join(format!("sol{r}.csv"));
        let (code, result) = run_json(
            bin()
                .args(["solve"])
                .arg(&cfg)
                .args(["--refinement", &r.to_string(), "--out"])
                .arg(&table),
        );
        let (vcode, report) = run_json(bin().arg("verify").arg(&cfg).arg("--solution").arg(&table));
        let grad = result["grad_norm"].as_f64().unwrap_or(f64::NAN);
        let energy = result["energy"].as_f64().unwrap_or(f64::NAN);
        let venergy = report["energy"].as_f64().unwrap_or(f64::NAN);
        let variance = report["impulse_slopes"][0]["variance"]
            .as_f64()
            .unwrap_or(f64::NAN);
        let de = (energy - venergy).abs();
        pass &= code == 0 && vcode == 0 && grad <= 1e-10 && variance <= 1e-8 && de <= 1e-9;
        detail.push(format!(
            "r={r}: grad {grad:.1e}, slope variance {variance:.1e}, round-trip |dI| {de:.1e}"
        ));
    }
    outcome(pass, detail.join("; "))
}

fn criterion_10() -> Outcome {
    let grid = SamplingGrid::default();
    let mut worst = 0.0f64;
    for f in [
        Nonlinearity::power(0.05, 4.0),
        Nonlinearity::power(0.01, 3.0),
        Nonlinearity::power(2.0, 2.5),
    ] {
        let mu = f.growth_exponent().unwrap();
        for k in 0..grid.t_per_interval {
            let t = (k as f64 + 0.5) / grid.t_per_interval as f64;
            for &x in &grid.xs {
                let lhs = mu * f.eval(t, x, 0).unwrap();
                let rhs = x * f.eval(t, x, 1).unwrap();
                worst = worst.max((lhs - rhs).abs() / rhs.abs());
            }
        }
    }
    let zero = problem(
        Partition::new(
            1.0,
            vec![Impulse {
                start: 0.4,
                end: 0.5,
            }],
        ),
        vec![0.0, 0.1],
        vec![Nonlinearity::power(0.01, 3.0), Nonlinearity::Zero],
        Perturbation::zero(),
    );
    let report = check_hypotheses(&zero, &grid, &QuadratureRule::default());
    let (code, doc) = run_json(bin().arg("check").arg(fixture("zero_family.cfg")));
    let h2_cli = doc["h2"]["status"].as_str().unwrap_or("").to_string();
    outcome(
        worst <= 1e-12 && !report.h2.holds() && code == 2 && h2_cli == "fails",
        format!("max relative H2 gap {worst:.1e}; zero family: h2 {h2_cli}, check exit {code}"),
    )
}

#[test]
fn acceptance() {
    let criteria: [(u32, fn() -> Outcome); 10] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
        (10, criterion_10),
    ];
    let mut failed = Vec::new();
    for (n, run) in criteria {
        let o = run();
        println!(
            "criterion {n:>2} {}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
        if !o.pass {
            failed.push(n);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
