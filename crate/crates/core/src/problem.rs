//! Problem instances: the impulse partition of `[0, T]`, the slopes held on
//! the impulse intervals, one nonlinearity per ODE interval and the
//! perturbation load.
//!
//! The ODE intervals are `(s_i, t_{i+1}]` for `i = 0..=N` with `s_0 = 0` and
//! `t_{N+1} = T`; the impulse intervals are `(t_i, s_i]` for `i = 1..=N`.

use std::f64::consts::PI;

use crate::error::{Error, Result, Violation, ViolationKind};

/// One non-instantaneous impulse: the derivative is held fixed on `(start, end]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Impulse {
    /// `t_i`, where the impulse begins.
    pub start: f64,
    /// `s_i`, where it ends.
    pub end: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    pub horizon: f64,
    pub impulses: Vec<Impulse>,
}

impl Partition {
    pub fn new(horizon: f64, impulses: Vec<Impulse>) -> Self {
        Self { horizon, impulses }
    }

    pub fn without_impulses(horizon: f64) -> Self {
        Self::new(horizon, Vec::new())
    }

    /// Number of impulses, `N`.
    pub fn len(&self) -> usize {
        self.impulses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.impulses.is_empty()
    }

    /// Endpoints `(s_i, t_{i+1})` of ODE interval `i`, `0 <= i <= N`.
    pub fn ode_interval(&self, i: usize) -> (f64, f64) {
        let a = if i == 0 {
            0.0
        } else {
            self.impulses[i - 1].end
        };
        let b = if i == self.impulses.len() {
            self.horizon
        } else {
            self.impulses[i].start
        };
        (a, b)
    }

    /// Endpoints `(t_i, s_i)` of impulse interval `i`, `1 <= i <= N`.
    pub fn impulse_interval(&self, i: usize) -> (f64, f64) {
        let imp = self.impulses[i - 1];
        (imp.start, imp.end)
    }

    /// All breakpoints `0, t_1, s_1, ..., t_N, s_N, T` in order.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut pts = Vec::with_capacity(2 * self.impulses.len() + 2);
        pts.push(0.0);
        for imp in &self.impulses {
            pts.push(imp.start);
            pts.push(imp.end);
        }
        pts.push(self.horizon);
        pts
    }
}

/// Slopes `alpha_0 ..= alpha_N`.
#[derive(Debug, Clone, PartialEq)]
pub struct ImpulseSlopes(pub Vec<f64>);

impl ImpulseSlopes {
    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    /// `alpha_{i-1} - alpha_i`, the point load at `t_i` (`1 <= i <= N`).
    pub fn jump(&self, i: usize) -> f64 {
        self.0[i - 1] - self.0[i]
    }

    /// `sum_i |alpha_{i-1} - alpha_i|`.
    pub fn jump_sum(&self) -> f64 {
        self.0.windows(2).fold(0.0, |s, w| s + (w[0] - w[1]).abs())
    }
}

/// A single term `c |x|^mu`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerTerm {
    pub coeff: f64,
    pub exponent: f64,
}

impl PowerTerm {
    pub fn new(coeff: f64, exponent: f64) -> Self {
        Self { coeff, exponent }
    }

    fn eval(&self, x: f64, order: u8) -> Result<f64> {
        let (c, mu) = (self.coeff, self.exponent);
        let ax = x.abs();
        match order {
            0 => Ok(c * ax.powf(mu)),
            1 => {
                // |x|^(mu-2) x, taken as its limit 0 at the origin
                if x == 0.0 {
                    Ok(0.0)
                } else {
                    Ok(mu * c * ax.powf(mu - 1.0) * x.signum())
                }
            }
            2 => {
                if x == 0.0 {
                    if mu > 2.0 {
                        Ok(0.0)
                    } else if mu == 2.0 {
                        Ok(2.0 * c)
                    } else {
                        Err(Error::UndefinedDerivative { order: 2, x })
                    }
                } else {
                    Ok(mu * (mu - 1.0) * c * ax.powf(mu - 2.0))
                }
            }
            o => Err(Error::BadOrder(o)),
        }
    }
}

/// Closed-form nonlinearities `F_i(t, x)`. None of the built-in kinds depend
/// on `t`, but every evaluation still takes it.
#[derive(Debug, Clone, PartialEq)]
pub enum Nonlinearity {
    Power(PowerTerm),
    ScaledPowerSum(Vec<PowerTerm>),
    Zero,
}

/// Closed-form majorant `|F|, |D_x F| <= a(|x|) b(t)` for a family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthWitness {
    exponent: f64,
    scale: f64,
    /// Constant value of `b(t)`.
    pub weight: f64,
}

impl GrowthWitness {
    /// `a(r) = max(1, r^mu) max(1, mu)`.
    pub fn majorant(&self, r: f64) -> f64 {
        1f64.max(r.powf(self.exponent)) * self.scale
    }

    pub fn weight(&self, _t: f64) -> f64 {
        self.weight
    }
}

impl Nonlinearity {
    pub fn power(coeff: f64, exponent: f64) -> Self {
        Self::Power(PowerTerm::new(coeff, exponent))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Self::Zero)
    }

    pub fn terms(&self) -> &[PowerTerm] {
        match self {
            Self::Power(t) => std::slice::from_ref(t),
            Self::ScaledPowerSum(ts) => ts,
            Self::Zero => &[],
        }
    }

    /// `F`, `D_x F` or `D_xx F` at `(t, x)`.
    pub fn eval(&self, _t: f64, x: f64, order: u8) -> Result<f64> {
        if order > 2 {
            return Err(Error::BadOrder(order));
        }
        self.terms()
            .iter()
            .try_fold(0.0, |acc, term| Ok(acc + term.eval(x, order)?))
    }

    /// The constant `mu` in the superquadratic condition: the smallest
    /// exponent of the family, or `None` for the zero family.
    pub fn growth_exponent(&self) -> Option<f64> {
        self.terms().iter().map(|t| t.exponent).reduce(f64::min)
    }

    pub fn supports_second_derivative(&self) -> bool {
        self.terms().iter().all(|t| t.exponent >= 2.0)
    }

    pub fn growth_witness(&self) -> GrowthWitness {
        let terms = self.terms();
        let exponent = terms.iter().map(|t| t.exponent).fold(0.0, f64::max);
        let weight = terms.iter().map(|t| t.coeff.abs()).sum();
        GrowthWitness {
            exponent,
            scale: exponent.max(1.0),
            weight,
        }
    }
}

/// Convenience wrapper matching the operation signature.
pub fn eval_nonlinearity(f: &Nonlinearity, t: f64, x: f64, order: u8) -> Result<f64> {
    f.eval(t, x, order)
}

#[derive(Debug, Clone, PartialEq)]
pub enum Perturbation {
    Constant(f64),
    /// `amplitude * sin(frequency * pi * t / T)`.
    Sine {
        amplitude: f64,
        frequency: u32,
    },
    /// Piecewise-linear interpolation of `(ts, values)`.
    Samples {
        ts: Vec<f64>,
        values: Vec<f64>,
    },
}

impl Perturbation {
    pub fn zero() -> Self {
        Self::Constant(0.0)
    }

    pub fn eval(&self, horizon: f64, t: f64) -> Result<f64> {
        if !(0.0..=horizon).contains(&t) {
            return Err(Error::OutOfDomain { t, horizon });
        }
        Ok(self.value_at(horizon, t))
    }

    /// Unchecked evaluation; callers guarantee `0 <= t <= T`.
    pub(crate) fn value_at(&self, horizon: f64, t: f64) -> f64 {
        match self {
            Self::Constant(v) => *v,
            Self::Sine {
                amplitude,
                frequency,
            } => amplitude * (f64::from(*frequency) * PI * t / horizon).sin(),
            Self::Samples { ts, values } => {
                let k = ts.partition_point(|&s| s <= t).clamp(1, ts.len() - 1);
                let (t0, t1) = (ts[k - 1], ts[k]);
                let w = (t - t0) / (t1 - t0);
                values[k - 1] + w * (values[k] - values[k - 1])
            }
        }
    }

    pub fn is_identically_zero(&self) -> bool {
        match self {
            Self::Constant(v) => *v == 0.0,
            Self::Sine { amplitude, .. } => *amplitude == 0.0,
            Self::Samples { values, .. } => values.iter().all(|&v| v == 0.0),
        }
    }

    /// Points inside `(a, b)` where the perturbation is not smooth.
    pub fn kinks_within(&self, a: f64, b: f64) -> Vec<f64> {
        match self {
            Self::Samples { ts, .. } => ts.iter().copied().filter(|&s| s > a && s < b).collect(),
            _ => Vec::new(),
        }
    }
}

pub fn eval_perturbation(p: &Perturbation, horizon: f64, t: f64) -> Result<f64> {
    p.eval(horizon, t)
}

/// A problem instance as supplied by the user, not yet checked.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemSpec {
    pub partition: Partition,
    pub slopes: ImpulseSlopes,
    pub nonlinearities: Vec<Nonlinearity>,
    pub perturbation: Perturbation,
}

/// A problem instance whose invariants have been checked.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidatedProblem {
    spec: ProblemSpec,
    warnings: Vec<String>,
}

impl ValidatedProblem {
    pub fn spec(&self) -> &ProblemSpec {
        &self.spec
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn partition(&self) -> &Partition {
        &self.spec.partition
    }

    pub fn horizon(&self) -> f64 {
        self.spec.partition.horizon
    }

    pub fn impulse_count(&self) -> usize {
        self.spec.partition.len()
    }

    pub fn slopes(&self) -> &ImpulseSlopes {
        &self.spec.slopes
    }

    pub fn nonlinearity(&self, i: usize) -> &Nonlinearity {
        &self.spec.nonlinearities[i]
    }

    pub fn nonlinearities(&self) -> &[Nonlinearity] {
        &self.spec.nonlinearities
    }

    pub fn perturbation(&self) -> &Perturbation {
        &self.spec.perturbation
    }

    pub fn p(&self, t: f64) -> f64 {
        self.spec.perturbation.value_at(self.horizon(), t)
    }

    pub fn into_spec(self) -> ProblemSpec {
        self.spec
    }

    /// Same problem with a different perturbation.
    pub fn with_perturbation(&self, perturbation: Perturbation) -> Result<Self> {
        validate_problem(ProblemSpec {
            perturbation,
            ..self.spec.clone()
        })
    }
}

impl From<ValidatedProblem> for ProblemSpec {
    fn from(v: ValidatedProblem) -> Self {
        v.spec
    }
}

fn violation(
    path: impl Into<String>,
    kind: ViolationKind,
    message: impl Into<String>,
) -> Violation {
    Violation {
        path: path.into(),
        kind,
        message: message.into(),
    }
}

/// Checks every invariant of `raw` and reports all violations at once.
/// Exponents `mu <= 2` are accepted with a warning.
pub fn validate_problem(raw: impl Into<ProblemSpec>) -> Result<ValidatedProblem> {
    let raw = raw.into();
    let mut errs = Vec::new();
    let mut warnings = Vec::new();
    let horizon = raw.partition.horizon;
    let n = raw.partition.len();

    if !(horizon.is_finite() && horizon > 0.0) {
        errs.push(violation(
            "T",
            ViolationKind::OutOfRange,
            format!("horizon must be positive and finite, got {horizon}"),
        ));
    } else {
        let mut prev = 0.0;
        let mut prev_name = "0".to_string();
        for (k, imp) in raw.partition.impulses.iter().enumerate() {
            for (field, v) in [("t", imp.start), ("s", imp.end)] {
                let path = format!("impulses[{k}].{field}");
                if !v.is_finite() || v <= 0.0 || v >= horizon {
                    errs.push(violation(
                        &path,
                        ViolationKind::OutOfRange,
                        format!("{v} must lie strictly inside (0, {horizon})"),
                    ));
                } else if v <= prev {
                    errs.push(violation(
                        &path,
                        ViolationKind::Ordering,
                        format!("{v} must exceed {prev_name} = {prev}"),
                    ));
                }
                if v.is_finite() {
                    prev = prev.max(v);
                    prev_name = path;
                }
            }
        }
    }

    if raw.slopes.0.len() != n + 1 {
        errs.push(violation(
            "alphas",
            ViolationKind::LengthMismatch,
            format!(
                "expected {} slopes for {n} impulses, got {}",
                n + 1,
                raw.slopes.0.len()
            ),
        ));
    }
    for (k, a) in raw.slopes.0.iter().enumerate() {
        if !a.is_finite() {
            errs.push(violation(
                format!("alphas[{k}]"),
                ViolationKind::OutOfRange,
                "slope must be finite",
            ));
        }
    }

    if raw.nonlinearities.len() != n + 1 {
        errs.push(violation(
            "nonlinearities",
            ViolationKind::LengthMismatch,
            format!(
                "expected {} nonlinearities for {n} impulses, got {}",
                n + 1,
                raw.nonlinearities.len()
            ),
        ));
    }
    for (k, f) in raw.nonlinearities.iter().enumerate() {
        if let Nonlinearity::ScaledPowerSum(ts) = f {
            if ts.is_empty() {
                errs.push(violation(
                    format!("nonlinearities[{k}].terms"),
                    ViolationKind::LengthMismatch,
                    "at least one term is required",
                ));
            }
        }
        for (j, term) in f.terms().iter().enumerate() {
            let base = match f {
                Nonlinearity::ScaledPowerSum(_) => format!("nonlinearities[{k}].terms[{j}]"),
                _ => format!("nonlinearities[{k}]"),
            };
            if !(term.coeff.is_finite() && term.coeff > 0.0) {
                errs.push(violation(
                    format!("{base}.c"),
                    ViolationKind::OutOfRange,
                    format!("coefficient must be positive, got {}", term.coeff),
                ));
            }
            if !(term.exponent.is_finite() && term.exponent > 1.0) {
                errs.push(violation(
                    format!("{base}.mu"),
                    ViolationKind::OutOfRange,
                    format!("exponent must exceed 1, got {}", term.exponent),
                ));
            } else if term.exponent <= 2.0 {
                warnings.push(format!(
                    "{base}.mu = {} is not superquadratic; (H2) will fail",
                    term.exponent
                ));
            }
        }
        if f.is_zero() {
            warnings.push(format!(
                "nonlinearities[{k}] is the zero family; (H2) will fail"
            ));
        }
    }

    match &raw.perturbation {
        Perturbation::Constant(v) => {
            if !v.is_finite() {
                errs.push(violation(
                    "perturbation.value",
                    ViolationKind::OutOfRange,
                    "value must be finite",
                ));
            }
        }
        Perturbation::Sine {
            amplitude,
            frequency,
        } => {
            if !amplitude.is_finite() {
                errs.push(violation(
                    "perturbation.amplitude",
                    ViolationKind::OutOfRange,
                    "amplitude must be finite",
                ));
            }
            if *frequency == 0 {
                errs.push(violation(
                    "perturbation.frequency",
                    ViolationKind::OutOfRange,
                    "frequency must be positive",
                ));
            }
        }
        Perturbation::Samples { ts, values } => {
            if ts.len() != values.len() {
                errs.push(violation(
                    "perturbation.values",
                    ViolationKind::LengthMismatch,
                    format!("{} times but {} values", ts.len(), values.len()),
                ));
            }
            if ts.len() < 2 {
                errs.push(violation(
                    "perturbation.ts",
                    ViolationKind::LengthMismatch,
                    "at least two samples are required",
                ));
            }
            if let Some(k) = ts.windows(2).position(|w| !(w[1] > w[0])) {
                errs.push(violation(
                    format!("perturbation.ts[{}]", k + 1),
                    ViolationKind::Ordering,
                    "sample times must be strictly increasing",
                ));
            }
            if ts.first().is_some_and(|&t| t != 0.0) || ts.last().is_some_and(|&t| t != horizon) {
                errs.push(violation(
                    "perturbation.ts",
                    ViolationKind::OutOfRange,
                    format!("sample times must span [0, {horizon}]"),
                ));
            }
            if values.iter().any(|v| !v.is_finite()) {
                errs.push(violation(
                    "perturbation.values",
                    ViolationKind::OutOfRange,
                    "values must be finite",
                ));
            }
        }
    }

    if errs.is_empty() {
        Ok(ValidatedProblem {
            spec: raw,
            warnings,
        })
    } else {
        Err(Error::Invalid(errs))
    }
}
