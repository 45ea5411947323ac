use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::discrete::DiscreteProblem;
use crate::error::{Error, Result};
use crate::fem::DiscreteFunction;

/// Energy statistics on the sphere `||u|| = rho`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeReport {
    pub rho: f64,
    pub n_dirs: usize,
    pub seed: u64,
    pub min_energy: f64,
    pub mean_energy: f64,
    pub max_energy: f64,
    /// `M_constant - p_weighted_sum`.
    pub floor: f64,
    /// Samples with energy below `floor - 1e-9`.
    pub below_floor: usize,
    /// Largest `|u(t) - u(t_{i+1})|` over all samples and ODE intervals.
    pub max_offset: f64,
    /// Whether every sample had `|u(t) - u(t_{i+1})| <= 1`.
    pub offsets_within_unit: bool,
}

/// Largest `|u(t) - u(t_{i+1})|` over the ODE intervals.
pub fn max_interval_offset(u: &DiscreteFunction) -> f64 {
    let mesh = u.mesh();
    let mut worst = 0.0f64;
    for i in 0..=mesh.partition().len() {
        let iv = mesh.ode_interval(i);
        let end = u.nodal(iv.last);
        for k in iv.first..=iv.last {
            worst = worst.max((u.nodal(k) - end).abs());
        }
    }
    worst
}

/// Samples `n_dirs` seeded random directions scaled to `H^1_0` norm `rho`
/// (default `1 / (2 beta)`) and reports their energies.
pub fn sphere_probe(
    dp: &DiscreteProblem,
    n_dirs: usize,
    seed: u64,
    rho_override: Option<f64>,
) -> Result<ProbeReport> {
    if n_dirs == 0 {
        return Err(Error::BadOption(
            "at least one direction is required".into(),
        ));
    }
    let consts = dp.constants();
    let rho = rho_override.unwrap_or(consts.rho);
    let floor = consts.sphere_floor();
    let n = dp.mesh().interior_count();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut energies = Vec::with_capacity(n_dirs);
    let mut max_offset = 0.0f64;
    while energies.len() < n_dirs {
        let coeffs: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let norm = dp.h1_norm_sq(&coeffs).sqrt();
        if !(norm > 0.0) {
            continue;
        }
        let u = DiscreteFunction::from_coeffs(dp.mesh(), coeffs).scaled(rho / norm);
        max_offset = max_offset.max(max_interval_offset(&u));
        energies.push(dp.energy(&u)?);
    }
    let min_energy = energies.iter().copied().fold(f64::INFINITY, f64::min);
    let max_energy = energies.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mean_energy = energies.iter().sum::<f64>() / n_dirs as f64;
    Ok(ProbeReport {
        rho,
        n_dirs,
        seed,
        min_energy,
        mean_energy,
        max_energy,
        floor,
        below_floor: energies.iter().filter(|&&e| e < floor - 1e-9).count(),
        max_offset,
        offsets_within_unit: max_offset <= 1.0,
    })
}
