use std::sync::Arc;

use super::mesh::Mesh;
use super::quadrature::QuadratureRule;
use crate::error::{Error, Result};

/// Continuous piecewise-linear function vanishing at `0` and `T`, stored by
/// its values at the interior nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteFunction {
    mesh: Arc<Mesh>,
    coeffs: Vec<f64>,
}

impl DiscreteFunction {
    pub fn zeros(mesh: &Arc<Mesh>) -> Self {
        Self {
            mesh: Arc::clone(mesh),
            coeffs: vec![0.0; mesh.interior_count()],
        }
    }

    /// # Panics
    /// If `coeffs` does not have one entry per interior node.
    pub fn from_coeffs(mesh: &Arc<Mesh>, coeffs: Vec<f64>) -> Self {
        assert_eq!(
            coeffs.len(),
            mesh.interior_count(),
            "one coefficient per interior node"
        );
        Self {
            mesh: Arc::clone(mesh),
            coeffs,
        }
    }

    /// Nodal interpolant of `f`; boundary values of `f` are ignored.
    pub fn interpolate(mesh: &Arc<Mesh>, f: impl Fn(f64) -> f64) -> Self {
        let n = mesh.node_count();
        let coeffs = mesh.nodes()[1..n - 1].iter().map(|&t| f(t)).collect();
        Self::from_coeffs(mesh, coeffs)
    }

    /// Hat function of the given height at an interior node.
    pub fn hat(mesh: &Arc<Mesh>, node: usize, height: f64) -> Self {
        assert!(
            mesh.is_interior(node),
            "hat functions live on interior nodes"
        );
        let mut u = Self::zeros(mesh);
        u.coeffs[node - 1] = height;
        u
    }

    pub fn mesh(&self) -> &Arc<Mesh> {
        &self.mesh
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [f64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<f64> {
        self.coeffs
    }

    pub fn same_mesh(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.mesh, &other.mesh) || self.mesh == other.mesh
    }

    /// Value at node `k`, zero at the two boundary nodes.
    pub fn nodal(&self, k: usize) -> f64 {
        if self.mesh.is_interior(k) {
            self.coeffs[k - 1]
        } else {
            0.0
        }
    }

    pub fn nodal_values(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(self.coeffs.len() + 2);
        v.push(0.0);
        v.extend_from_slice(&self.coeffs);
        v.push(0.0);
        v
    }

    /// Piecewise-linear evaluation; `t` is clamped to `[0, T]`.
    pub fn eval(&self, t: f64) -> f64 {
        let nodes = self.mesh.nodes();
        let t = t.clamp(0.0, self.mesh.horizon());
        let e = self.mesh.locate(t);
        let (a, b) = (nodes[e], nodes[e + 1]);
        let w = (t - a) / (b - a);
        (1.0 - w) * self.nodal(e) + w * self.nodal(e + 1)
    }

    /// Derivative on each element.
    pub fn slopes(&self) -> Vec<f64> {
        (0..self.mesh.element_count())
            .map(|e| (self.nodal(e + 1) - self.nodal(e)) / self.mesh.element_len(e))
            .collect()
    }

    pub fn scaled(&self, a: f64) -> Self {
        Self {
            mesh: Arc::clone(&self.mesh),
            coeffs: self.coeffs.iter().map(|c| a * c).collect(),
        }
    }

    /// `self + a * other`.
    pub fn add_scaled(&self, a: f64, other: &Self) -> Self {
        debug_assert!(self.same_mesh(other));
        Self {
            mesh: Arc::clone(&self.mesh),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(x, y)| x + a * y)
                .collect(),
        }
    }

    /// Linear interpolation onto another mesh of the same interval.
    pub fn transfer_to(&self, mesh: &Arc<Mesh>) -> Self {
        Self::interpolate(mesh, |t| self.eval(t))
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }
}

/// `int_0^T u' v'`, exact for piecewise-linear functions.
pub fn h1_inner(u: &DiscreteFunction, v: &DiscreteFunction) -> Result<f64> {
    if !u.same_mesh(v) {
        return Err(Error::MeshMismatch);
    }
    let mesh = &u.mesh;
    Ok((0..mesh.element_count())
        .map(|e| {
            let h = mesh.element_len(e);
            (u.nodal(e + 1) - u.nodal(e)) * (v.nodal(e + 1) - v.nodal(e)) / h
        })
        .sum())
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct Norms {
    pub h1: f64,
    pub l2: f64,
    pub sup: f64,
}

pub fn norms(u: &DiscreteFunction) -> Norms {
    let mesh = &u.mesh;
    let h1 = h1_inner(u, u).expect("same mesh").sqrt();
    let l2sq: f64 = (0..mesh.element_count())
        .map(|e| {
            let (a, b) = (u.nodal(e), u.nodal(e + 1));
            mesh.element_len(e) * (a * a + a * b + b * b) / 3.0
        })
        .sum();
    Norms {
        h1,
        l2: l2sq.sqrt(),
        sup: u.max_abs(),
    }
}

/// `int_a^b f` by per-element Gauss–Legendre, where `a` and `b` are nodes.
pub fn integrate(
    mesh: &Mesh,
    a: f64,
    b: f64,
    f: impl FnMut(f64) -> f64,
    rule: &QuadratureRule,
) -> Result<f64> {
    let (Some(i), Some(j)) = (mesh.node_at(a), mesh.node_at(b)) else {
        return Err(Error::NotAligned { a, b });
    };
    if j < i {
        return Err(Error::NotAligned { a, b });
    }
    Ok(integrate_elements(mesh, i..j, f, rule))
}

fn integrate_elements(
    mesh: &Mesh,
    elements: std::ops::Range<usize>,
    mut f: impl FnMut(f64) -> f64,
    rule: &QuadratureRule,
) -> f64 {
    let nodes = mesh.nodes();
    elements
        .map(|e| rule.integrate_interval(nodes[e], nodes[e + 1], &mut f))
        .sum()
}
