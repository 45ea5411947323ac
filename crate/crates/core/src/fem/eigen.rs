use std::f64::consts::PI;
use std::sync::Arc;

use super::function::DiscreteFunction;
use super::mesh::Mesh;
use super::tridiag::SymTridiagonal;
use crate::error::{Error, Result};

pub const EIGEN_TOL: f64 = 1e-10;
pub const EIGEN_MAX_ITERS: usize = 10_000;

#[derive(Debug, Clone)]
pub struct FirstEigen {
    /// Smallest eigenvalue of the discrete pencil (stiffness, mass).
    pub numeric: f64,
    /// `(pi / T)^2`.
    pub exact: f64,
    /// Eigenvector, normalized to unit mass norm and positive sum.
    pub eigenfunction: DiscreteFunction,
    pub iterations: usize,
}

/// `(pi / T)^2`, the first Dirichlet eigenvalue of `-u'' = lambda u` on `(0, T)`.
pub fn exact_first_eigenvalue(horizon: f64) -> f64 {
    (PI / horizon).powi(2)
}

/// Inverse iteration on `K x = lambda M x`.
pub fn first_eigenvalue(mesh: &Arc<Mesh>) -> Result<FirstEigen> {
    first_eigenvalue_with(mesh, EIGEN_TOL, EIGEN_MAX_ITERS)
}

pub fn first_eigenvalue_with(mesh: &Arc<Mesh>, tol: f64, max_iters: usize) -> Result<FirstEigen> {
    let n = mesh.interior_count();
    if n < 2 {
        return Err(Error::TooFewNodes {
            needed: 2,
            found: n,
        });
    }
    let k = SymTridiagonal::stiffness(mesh);
    let m = SymTridiagonal::mass(mesh);

    let mut x = vec![1.0; n];
    normalize(&m, &mut x);
    let mut lambda = k.quad_form(&x);
    for it in 1..=max_iters {
        let mut y = k.solve(&m.apply(&x));
        normalize(&m, &mut y);
        let next = k.quad_form(&y);
        x = y;
        let done = (next - lambda).abs() <= tol * next.abs();
        lambda = next;
        if done {
            if x.iter().sum::<f64>() < 0.0 {
                x.iter_mut().for_each(|v| *v = -*v);
            }
            return Ok(FirstEigen {
                numeric: lambda,
                exact: exact_first_eigenvalue(mesh.horizon()),
                eigenfunction: DiscreteFunction::from_coeffs(mesh, x),
                iterations: it,
            });
        }
    }
    Err(Error::EigenNoConvergence(max_iters))
}

fn normalize(m: &SymTridiagonal, x: &mut [f64]) {
    let s = m.quad_form(x).sqrt();
    x.iter_mut().for_each(|v| *v /= s);
}
