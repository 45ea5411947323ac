//! Mountain-pass solver: a discrete path from `0` to an uphill endpoint `e`
//! with `I(e) <= 0` is deformed by repeatedly pushing its highest point
//! downhill, which drives the path maximum toward the min-max level
//! `c = inf_g max_s I(g(s))`. The maximizer is then polished with Newton.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::descent::line_search;
use super::newton::newton_solve;
use super::options::{SolveOptions, SolveResult, TracePoint};
use crate::discrete::DiscreteProblem;
use crate::error::{Error, Result};
use crate::fem::{first_eigenvalue, DiscreteFunction};

/// Doubling stops once `xi` passes this.
const MAX_XI: f64 = (1u64 << 60) as f64;
/// Random directions tried after the eigenfunction direction fails.
const RANDOM_DIRECTIONS: usize = 8;
/// The path stage ends early when a reparametrization cycle lowers the level
/// by less than this (relative).
const STAGNATION: f64 = 1e-13;

/// Doubles `xi` from 1 until `I(xi w) <= 0` and `xi ||w|| > rho`, where `w`
/// is first scaled to unit `H^1_0` norm. Returns `xi` and `e = xi w`.
pub fn find_uphill_endpoint(
    dp: &DiscreteProblem,
    w: &DiscreteFunction,
    _opts: &SolveOptions,
) -> Result<(f64, DiscreteFunction)> {
    if !w.same_mesh(&dp.zeros()) {
        return Err(Error::MeshMismatch);
    }
    let norm = dp.h1_norm_sq(w.coeffs()).sqrt();
    if !(norm > 0.0) {
        return Err(Error::ZeroDirection);
    }
    let w = w.scaled(1.0 / norm);
    let rho = dp.constants().rho;
    let mut xi = 1.0;
    loop {
        let e = w.scaled(xi);
        if xi > rho && dp.energy(&e)? <= 0.0 {
            return Ok((xi, e));
        }
        xi *= 2.0;
        if xi > MAX_XI {
            return Err(Error::NoUphillEndpoint { xi });
        }
    }
}

/// Discretized path `g: [0, 1] -> E` with `g(0) = 0`, `g(1) = e`.
#[derive(Debug, Clone)]
pub struct MountainPassState {
    pub path: Vec<DiscreteFunction>,
    pub energies: Vec<f64>,
    pub max_index: usize,
    /// `max_s I(g(s))` over the path points.
    pub level: f64,
}

impl MountainPassState {
    fn straight(dp: &DiscreteProblem, e: &DiscreteFunction, points: usize) -> Result<Self> {
        let path: Vec<_> = (0..points)
            .map(|k| e.scaled(k as f64 / (points - 1) as f64))
            .collect();
        let energies = path
            .iter()
            .map(|u| dp.energy(u))
            .collect::<Result<Vec<_>>>()?;
        let mut s = Self {
            path,
            energies,
            max_index: 0,
            level: 0.0,
        };
        s.locate_max();
        Ok(s)
    }

    /// First interior index of maximal energy.
    fn locate_max(&mut self) {
        let n = self.path.len();
        let mut best = 1;
        for k in 2..n - 1 {
            if self.energies[k] > self.energies[best] {
                best = k;
            }
        }
        self.max_index = best;
        self.level = self.energies[best];
    }

    /// Redistributes interior points uniformly in `H^1_0` arc length,
    /// interpolating linearly between the current points.
    fn reparametrize(&mut self, dp: &DiscreteProblem) -> Result<()> {
        let n = self.path.len();
        let mut arc = vec![0.0; n];
        for k in 1..n {
            let d = self.path[k].add_scaled(-1.0, &self.path[k - 1]);
            arc[k] = arc[k - 1] + dp.h1_norm_sq(d.coeffs()).sqrt();
        }
        let total = arc[n - 1];
        if !(total > 0.0) {
            return Ok(());
        }
        let mut next = Vec::with_capacity(n);
        next.push(self.path[0].clone());
        let mut seg = 1;
        for k in 1..n - 1 {
            let target = total * k as f64 / (n - 1) as f64;
            while seg < n - 1 && arc[seg] < target {
                seg += 1;
            }
            let len = arc[seg] - arc[seg - 1];
            let w = if len > 0.0 {
                (target - arc[seg - 1]) / len
            } else {
                0.0
            };
            next.push(
                self.path[seg - 1]
                    .add_scaled(w, &self.path[seg].add_scaled(-1.0, &self.path[seg - 1])),
            );
        }
        next.push(self.path[n - 1].clone());
        self.energies = next
            .iter()
            .map(|u| dp.energy(u))
            .collect::<Result<Vec<_>>>()?;
        self.path = next;
        self.locate_max();
        Ok(())
    }
}

fn random_direction(dp: &DiscreteProblem, rng: &mut ChaCha8Rng) -> DiscreteFunction {
    let n = dp.mesh().interior_count();
    let coeffs = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
    DiscreteFunction::from_coeffs(dp.mesh(), coeffs)
}

/// Endpoint search along the discrete first eigenfunction, then along seeded
/// random directions.
fn endpoint(dp: &DiscreteProblem, opts: &SolveOptions) -> Result<(f64, DiscreteFunction)> {
    let mut first_err = None;
    if let Ok(eig) = first_eigenvalue(dp.mesh()) {
        match find_uphill_endpoint(dp, &eig.eigenfunction, opts) {
            Ok(found) => return Ok(found),
            Err(e) => first_err = Some(e),
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for _ in 0..RANDOM_DIRECTIONS {
        let w = random_direction(dp, &mut rng);
        match find_uphill_endpoint(dp, &w, opts) {
            Ok(found) => return Ok(found),
            Err(e) => {
                first_err.get_or_insert(e);
            }
        }
    }
    Err(first_err.unwrap_or(Error::ZeroDirection))
}

/// Steepest-descent direction at the path maximizer with its component
/// along the path tangent removed, scaled to at most the local point spacing
/// so the point cannot jump across its neighbours.
fn transverse_direction(
    dp: &DiscreteProblem,
    state: &MountainPassState,
    g: &DiscreteFunction,
) -> DiscreteFunction {
    let k = state.max_index;
    let mut dir: Vec<f64> = dp.riesz(g.coeffs()).iter().map(|v| -v).collect();
    let tangent = state.path[k + 1].add_scaled(-1.0, &state.path[k - 1]);
    let tt = dp.h1_norm_sq(tangent.coeffs());
    if tt > 0.0 {
        // (d, tau)_{H^1} = d . K tau
        let kt = dp.stiffness().apply(tangent.coeffs());
        let c = dir.iter().zip(&kt).map(|(d, k)| d * k).sum::<f64>() / tt;
        for (d, t) in dir.iter_mut().zip(tangent.coeffs()) {
            *d -= c * t;
        }
    }
    let spacing = 0.5 * tt.sqrt();
    let len = dp.h1_norm_sq(&dir).sqrt();
    if len > spacing && spacing > 0.0 {
        let s = spacing / len;
        dir.iter_mut().for_each(|d| *d *= s);
    }
    DiscreteFunction::from_coeffs(dp.mesh(), dir)
}

/// Runs the path stage and returns the final path state, its trace and the
/// number of deformation steps.
pub fn deform_path(
    dp: &DiscreteProblem,
    e: &DiscreteFunction,
    opts: &SolveOptions,
) -> Result<(MountainPassState, Vec<TracePoint>, usize)> {
    opts.validate()?;
    let mut state = MountainPassState::straight(dp, e, opts.path_points)?;
    let mut trace = Vec::new();
    let stage_tol = 100.0 * opts.grad_tol;
    let mut step = opts.descent_step;
    let mut cycle_level = state.level;
    let mut iterations = 0;

    while iterations < opts.max_descent_iters {
        let k = state.max_index;
        let g = dp.gradient(&state.path[k])?;
        trace.push(TracePoint {
            energy: state.level,
            grad_norm: g.max_abs(),
        });
        if g.max_abs() <= stage_tol {
            break;
        }
        let dir = transverse_direction(dp, &state, &g);
        let moved = line_search(dp, &state.path[k], state.energies[k], &g, &dir, step, opts)?;
        iterations += 1;
        match moved {
            Some((u, en, t)) => {
                state.path[k] = u;
                state.energies[k] = en;
                step = if t == step { (2.0 * step).min(1.0) } else { t };
                state.locate_max();
            }
            None => break,
        }
        if iterations % opts.reparam_every == 0 {
            state.reparametrize(dp)?;
            let drop = cycle_level - state.level;
            if drop.abs() <= STAGNATION * state.level.abs().max(1e-300) {
                break;
            }
            cycle_level = state.level;
        }
    }
    Ok((state, trace, iterations))
}

/// Mountain-pass critical point: straight path to an uphill endpoint,
/// maximizer deformation, then a Newton polish.
pub fn mountain_pass_solve(dp: &DiscreteProblem, opts: &SolveOptions) -> Result<SolveResult> {
    opts.validate()?;
    let mut warnings = Vec::new();
    let hyp = dp.hypotheses();
    if !hyp.all_hold() {
        warnings.push(
            "hypotheses (H1)-(H3) do not all hold; mountain-pass geometry is not guaranteed"
                .to_string(),
        );
    }
    let (_, e) = endpoint(dp, opts)?;
    let (state, mut trace, path_iters) = deform_path(dp, &e, opts)?;
    let start = &state.path[state.max_index];
    let mut res = newton_solve(dp, start, opts)?;
    trace.append(&mut res.ps_trace);
    res.ps_trace = trace;
    res.iterations += path_iters;
    warnings.append(&mut res.warnings);

    if hyp.all_hold() {
        let floor = dp.constants().sphere_floor();
        if res.energy < floor - 1e-9 {
            warnings.push(format!(
                "critical value {} lies below the sphere floor {floor}",
                res.energy
            ));
        }
    }
    if res.converged && res.u.max_abs() == 0.0 {
        warnings.push("polish converged to the trivial solution".into());
    }
    res.warnings = warnings;
    Ok(res)
}
