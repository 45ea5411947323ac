#![allow(dead_code)]

use impulse_varsolve::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn n0_power(p: Perturbation) -> ValidatedProblem {
    validate_problem(ProblemSpec {
        partition: Partition::without_impulses(1.0),
        slopes: ImpulseSlopes(vec![0.0]),
        nonlinearities: vec![Nonlinearity::power(0.05, 4.0)],
        perturbation: p,
    })
    .unwrap()
}

pub fn linear_n1() -> ValidatedProblem {
    validate_problem(ProblemSpec {
        partition: Partition::new(
            1.0,
            vec![Impulse {
                start: 0.5,
                end: 0.6,
            }],
        ),
        slopes: ImpulseSlopes(vec![0.0, 1.0]),
        nonlinearities: vec![Nonlinearity::Zero; 2],
        perturbation: Perturbation::zero(),
    })
    .unwrap()
}

pub fn linear_n2(alphas: [f64; 3], p: f64) -> ValidatedProblem {
    validate_problem(ProblemSpec {
        partition: Partition::new(
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
        slopes: ImpulseSlopes(alphas.to_vec()),
        nonlinearities: vec![Nonlinearity::Zero; 3],
        perturbation: Perturbation::Constant(p),
    })
    .unwrap()
}

pub fn impulsive() -> ValidatedProblem {
    validate_problem(ProblemSpec {
        partition: Partition::new(
            1.0,
            vec![Impulse {
                start: 0.4,
                end: 0.5,
            }],
        ),
        slopes: ImpulseSlopes(vec![0.0, 0.1]),
        nonlinearities: vec![Nonlinearity::power(0.01, 3.0); 2],
        perturbation: Perturbation::Constant(0.005),
    })
    .unwrap()
}

pub fn random_function(dp: &DiscreteProblem, rng: &mut ChaCha8Rng, scale: f64) -> DiscreteFunction {
    let coeffs = (0..dp.mesh().interior_count())
        .map(|_| scale * rng.random_range(-1.0..1.0))
        .collect();
    DiscreteFunction::from_coeffs(dp.mesh(), coeffs)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
