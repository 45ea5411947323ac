//! Piecewise-linear discretization of `H^1_0(0, T)` on meshes aligned to the
//! impulse partition.

mod eigen;
mod function;
mod mesh;
mod quadrature;
mod tridiag;

pub use eigen::{
    exact_first_eigenvalue, first_eigenvalue, first_eigenvalue_with, FirstEigen, EIGEN_MAX_ITERS,
    EIGEN_TOL,
};
pub use function::{h1_inner, integrate, norms, DiscreteFunction, Norms};
pub use mesh::{MacroInterval, Mesh, Segment};
pub use quadrature::{QuadratureRule, DEFAULT_ORDER};
pub use tridiag::SymTridiagonal;
