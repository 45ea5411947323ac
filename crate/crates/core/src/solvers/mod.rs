//! Critical-point solvers for the discrete energy.

mod descent;
mod mountain_pass;
mod newton;
mod options;
mod probe;

pub use descent::gradient_descent;
pub use mountain_pass::{
    deform_path, find_uphill_endpoint, mountain_pass_solve, MountainPassState,
};
pub use newton::{morse_index, newton_solve};
pub use options::{SolveOptions, SolveResult, TracePoint};
pub use probe::{max_interval_offset, sphere_probe, ProbeReport};
