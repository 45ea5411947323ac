use std::fmt;

use thiserror::Error;

/// Category of a single problem-validation failure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViolationKind {
    Ordering,
    LengthMismatch,
    OutOfRange,
}

/// One invariant violation, addressed by a field path such as `impulses[0].t`.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct Violation {
    pub path: String,
    pub kind: ViolationKind,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid problem: {}", join(.0))]
    Invalid(Vec<Violation>),

    #[error("derivative of order {order} does not exist at x = {x}")]
    UndefinedDerivative { order: u8, x: f64 },

    #[error("derivative order {0} is not supported (expected 0, 1 or 2)")]
    BadOrder(u8),

    #[error("t = {t} lies outside [0, {horizon}]")]
    OutOfDomain { t: f64, horizon: f64 },

    #[error("functions live on different meshes")]
    MeshMismatch,

    #[error("mesh was not built from this problem's partition")]
    ProblemMismatch,

    #[error("interval ({a}, {b}) is not a union of mesh elements")]
    NotAligned { a: f64, b: f64 },

    #[error("quadrature order must be at least 1")]
    BadQuadratureOrder,

    #[error("eigenvalue iteration did not converge after {0} iterations")]
    EigenNoConvergence(usize),

    #[error("mesh needs at least {needed} interior nodes, found {found}")]
    TooFewNodes { needed: usize, found: usize },

    #[error(
        "linear oracle requires every nonlinearity to be the zero family (interval {0} is not)"
    )]
    NonlinearPresent(usize),

    #[error("linear oracle supports constant perturbations only")]
    UnsupportedPerturbation,

    #[error("no uphill endpoint: energy stayed positive up to xi = {xi:e}")]
    NoUphillEndpoint { xi: f64 },

    #[error("direction has zero norm")]
    ZeroDirection,

    #[error("invalid solver option: {0}")]
    BadOption(String),

    #[error("solve did not converge: {0}")]
    NoConvergence(String),
}

fn join(v: &[Violation]) -> String {
    v.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
