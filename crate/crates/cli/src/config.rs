use std::fmt;
use std::path::{Path, PathBuf};

use impulse_varsolve::error::{Error as CoreError, Violation};
use impulse_varsolve::problem::{
    validate_problem, Impulse, ImpulseSlopes, Nonlinearity, Partition, Perturbation, PowerTerm,
    ProblemSpec, ValidatedProblem,
};
use impulse_varsolve::solvers::SolveOptions;
use impulse_varsolve::verify::SolverKind;
use serde::Deserialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum SolverChoice {
    Newton,
    Mpa,
    Descent,
}

impl From<SolverChoice> for SolverKind {
    fn from(s: SolverChoice) -> Self {
        match s {
            SolverChoice::Newton => SolverKind::Newton,
            SolverChoice::Mpa => SolverKind::Mpa,
            SolverChoice::Descent => SolverKind::Descent,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    #[serde(rename = "T")]
    horizon: f64,
    #[serde(default)]
    impulses: Vec<RawImpulse>,
    alphas: Vec<f64>,
    nonlinearities: Vec<RawNonlinearity>,
    #[serde(default)]
    perturbation: Option<RawPerturbation>,
    #[serde(default)]
    run: RunSection,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawImpulse {
    t: f64,
    s: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTerm {
    c: f64,
    mu: f64,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
enum RawNonlinearity {
    Power { c: f64, mu: f64 },
    ScaledPowerSum { terms: Vec<RawTerm> },
    Zero,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
enum RawPerturbation {
    Constant { value: f64 },
    Sine { amplitude: f64, frequency: u32 },
    Samples { ts: Vec<f64>, values: Vec<f64> },
}

#[derive(Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct RunSection {
    refinement: usize,
    quad_order: usize,
    solver: SolverChoice,
    grad_tol: f64,
    seed: u64,
    max_newton_iters: usize,
    max_descent_iters: usize,
    path_points: usize,
    descent_step: f64,
    reparam_every: usize,
}

impl Default for RunSection {
    fn default() -> Self {
        let o = SolveOptions::default();
        Self {
            refinement: 64,
            quad_order: 5,
            solver: SolverChoice::Mpa,
            grad_tol: o.grad_tol,
            seed: o.seed,
            max_newton_iters: o.max_newton_iters,
            max_descent_iters: o.max_descent_iters,
            path_points: o.path_points,
            descent_step: o.descent_step,
            reparam_every: o.reparam_every,
        }
    }
}

/// A validated problem plus the discretization and solver settings.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub problem: ValidatedProblem,
    pub refinement: usize,
    pub quad_order: usize,
    pub solver: SolverChoice,
    pub options: SolveOptions,
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{0}")]
    Syntax(String),
    #[error("unknown field `{field}` at {path}{}", Suggestion(suggestion))]
    UnknownField {
        path: String,
        field: String,
        suggestion: Option<String>,
    },
    #[error("{path}: {message}")]
    Field { path: String, message: String },
    #[error("invalid problem:{}", ViolationList(.0))]
    Invalid(Vec<Violation>),
    #[error("{path}: {message}")]
    Run { path: String, message: String },
}

struct Suggestion<'a>(&'a Option<String>);

impl fmt::Display for Suggestion<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Some(s) => write!(f, " (did you mean `{s}`?)"),
            None => Ok(()),
        }
    }
}

struct ViolationList<'a>(&'a [Violation]);

impl fmt::Display for ViolationList<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in self.0 {
            write!(f, "\n  {}: {}", v.path, v.message)?;
        }
        Ok(())
    }
}

pub fn load_config(path: &Path) -> Result<RunConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.to_owned(),
        source,
    })?;
    parse_config(&text)
}

pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let de = toml::Deserializer::parse(text).map_err(|e| ConfigError::Syntax(e.to_string()))?;
    let raw: RawConfig = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let message = e.inner().message().to_string();
        match unknown_field(&message) {
            Some((field, expected)) => ConfigError::UnknownField {
                suggestion: closest(&field, &expected),
                path,
                field,
            },
            None => ConfigError::Field { path, message },
        }
    })?;
    raw.into_run_config()
}

/// Splits serde's "unknown field `x`, expected one of `a`, `b`" message.
fn unknown_field(message: &str) -> Option<(String, Vec<String>)> {
    let rest = message.strip_prefix("unknown field `")?;
    let mut parts = rest.split('`');
    let field = parts.next()?.to_string();
    let expected = parts.skip(1).step_by(2).map(str::to_string).collect();
    Some((field, expected))
}

fn closest(field: &str, expected: &[String]) -> Option<String> {
    expected
        .iter()
        .map(|e| (strsim::levenshtein(field, e), e))
        .filter(|(d, e)| *d <= 2.max(e.len() / 3))
        .min_by_key(|(d, _)| *d)
        .map(|(_, e)| e.clone())
}

impl RawConfig {
    fn into_run_config(self) -> Result<RunConfig, ConfigError> {
        let spec = ProblemSpec {
            partition: Partition::new(
                self.horizon,
                self.impulses
                    .iter()
                    .map(|p| Impulse {
                        start: p.t,
                        end: p.s,
                    })
                    .collect(),
            ),
            slopes: ImpulseSlopes(self.alphas),
            nonlinearities: self
                .nonlinearities
                .into_iter()
                .map(|f| match f {
                    RawNonlinearity::Power { c, mu } => Nonlinearity::power(c, mu),
                    RawNonlinearity::ScaledPowerSum { terms } => Nonlinearity::ScaledPowerSum(
                        terms.iter().map(|t| PowerTerm::new(t.c, t.mu)).collect(),
                    ),
                    RawNonlinearity::Zero => Nonlinearity::Zero,
                })
                .collect(),
            perturbation: match self.perturbation {
                None => Perturbation::zero(),
                Some(RawPerturbation::Constant { value }) => Perturbation::Constant(value),
                Some(RawPerturbation::Sine {
                    amplitude,
                    frequency,
                }) => Perturbation::Sine {
                    amplitude,
                    frequency,
                },
                Some(RawPerturbation::Samples { ts, values }) => {
                    Perturbation::Samples { ts, values }
                }
            },
        };
        let problem = validate_problem(spec).map_err(|e| match e {
            CoreError::Invalid(v) => ConfigError::Invalid(v),
            other => ConfigError::Syntax(other.to_string()),
        })?;

        let run = self.run;
        if run.refinement == 0 {
            return Err(run_error("run.refinement", "must be positive"));
        }
        if run.quad_order == 0 {
            return Err(run_error("run.quad_order", "must be positive"));
        }
        let options = SolveOptions {
            grad_tol: run.grad_tol,
            max_newton_iters: run.max_newton_iters,
            max_descent_iters: run.max_descent_iters,
            path_points: run.path_points,
            descent_step: run.descent_step,
            reparam_every: run.reparam_every,
            seed: run.seed,
            ..SolveOptions::default()
        };
        options
            .validate()
            .map_err(|e| run_error("run", &e.to_string()))?;
        Ok(RunConfig {
            problem,
            refinement: run.refinement,
            quad_order: run.quad_order,
            solver: run.solver,
            options,
        })
    }
}

fn run_error(path: &str, message: &str) -> ConfigError {
    ConfigError::Run {
        path: path.to_string(),
        message: message.to_string(),
    }
}
