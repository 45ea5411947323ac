//! The energy functional, its first two derivatives, and the constants and
//! hypotheses that govern its mountain-pass geometry.

mod constants;
mod functional;
mod hypotheses;

pub use constants::{constants_report, embedding_constant, ConstantsReport};
pub(crate) use functional::check_mesh;
pub use functional::{energy, gradient, hessian};
pub use hypotheses::{
    check_hypotheses, BoundCheck, HypothesisCheck, HypothesisReport, SamplingGrid, Status,
};
