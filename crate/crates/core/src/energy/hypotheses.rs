use serde::Serialize;

use super::constants::{constants_report, unit_extremes};
use crate::fem::QuadratureRule;
use crate::problem::ValidatedProblem;

/// Relative slack for inequalities that hold with equality for the built-in
/// families and would otherwise fail on the last bit.
const ROUNDING: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Holds,
    Fails,
    NotApplicable,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HypothesisCheck {
    pub status: Status,
    pub evidence: String,
}

impl HypothesisCheck {
    fn new(ok: bool, evidence: String) -> Self {
        Self {
            status: if ok { Status::Holds } else { Status::Fails },
            evidence,
        }
    }

    pub fn holds(&self) -> bool {
        self.status == Status::Holds
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundCheck {
    pub ok: bool,
    /// Smallest `bound - value` over the samples (negative means violated).
    pub worst_margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HypothesisReport {
    pub h1: HypothesisCheck,
    pub h2: HypothesisCheck,
    pub h3: HypothesisCheck,
    /// `M_constant - p_weighted_sum`; (H3) holds iff this is positive.
    pub h3_margin: f64,
    pub lemma2_upper: BoundCheck,
    pub lemma2_lower: BoundCheck,
    pub flags: Vec<String>,
}

impl HypothesisReport {
    pub fn all_hold(&self) -> bool {
        self.h1.holds() && self.h2.holds() && self.h3.holds()
    }
}

/// Sample points for the pointwise hypothesis checks.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplingGrid {
    pub t_per_interval: usize,
    /// Nonzero `x` samples.
    pub xs: Vec<f64>,
}

impl Default for SamplingGrid {
    /// 64 `t` per interval, `x = ±logspace(1e-3, 10, 40)`.
    fn default() -> Self {
        let (lo, hi, n) = (1e-3f64.log10(), 10f64.log10(), 40);
        let pos: Vec<f64> = (0..n)
            .map(|k| 10f64.powf(lo + (hi - lo) * k as f64 / (n - 1) as f64))
            .collect();
        let mut xs: Vec<f64> = pos.iter().rev().map(|x| -x).collect();
        xs.extend(pos);
        Self {
            t_per_interval: 64,
            xs,
        }
    }
}

impl SamplingGrid {
    fn ts(&self, a: f64, b: f64) -> impl Iterator<Item = f64> {
        let n = self.t_per_interval.max(1);
        (0..n).map(move |k| a + (b - a) * (k as f64 + 0.5) / n as f64)
    }
}

fn tol(scale: f64) -> f64 {
    ROUNDING * scale.abs().max(f64::MIN_POSITIVE)
}

pub fn check_hypotheses(
    prob: &ValidatedProblem,
    grid: &SamplingGrid,
    rule: &QuadratureRule,
) -> HypothesisReport {
    let consts = constants_report(prob, rule);
    let part = prob.partition();
    let mut flags = Vec::new();

    let mut h1_ok = true;
    let mut h1_notes = Vec::new();
    let mut h2_ok = true;
    let mut h2_notes = Vec::new();
    let mut worst_h2 = f64::INFINITY;
    let mut upper = BoundCheck {
        ok: true,
        worst_margin: f64::INFINITY,
    };
    let mut lower = upper;

    for i in 0..=prob.impulse_count() {
        let (a, b) = part.ode_interval(i);
        let f = prob.nonlinearity(i);
        let witness = f.growth_witness();
        let mu = f.growth_exponent();
        if f.is_zero() && !flags.iter().any(|s| s == "zero-family-present") {
            flags.push("zero-family-present".to_string());
        }
        match mu {
            None => {
                h2_ok = false;
                h2_notes.push(format!(
                    "interval {i}: F vanishes identically, so 0 < mu F fails"
                ));
            }
            Some(m) if m <= 2.0 => {
                h2_ok = false;
                h2_notes.push(format!("interval {i}: exponent {m} is not greater than 2"));
            }
            _ => {}
        }

        for t in grid.ts(a, b) {
            if f.eval(t, 0.0, 0).unwrap_or(f64::NAN) != 0.0 {
                h1_ok = false;
                h1_notes.push(format!("interval {i}: F(t, 0) != 0 at t = {t}"));
            }
            let (m_up, m_lo) = unit_extremes(f, t);
            for &x in &grid.xs {
                let fx = f.eval(t, x, 0).expect("order 0");
                let dfx = f.eval(t, x, 1).expect("order 1");
                let bound = witness.majorant(x.abs()) * witness.weight(t);
                if fx.abs() > bound + tol(bound) || dfx.abs() > bound + tol(bound) {
                    h1_ok = false;
                    h1_notes.push(format!(
                        "interval {i}: growth bound violated at (t, x) = ({t}, {x})"
                    ));
                }

                if let Some(mu) = mu.filter(|&m| m > 2.0) {
                    let lhs = mu * fx;
                    let rhs = x * dfx;
                    let slack = rhs - lhs;
                    worst_h2 = worst_h2.min(slack);
                    if !(lhs > 0.0) || slack < -tol(rhs) {
                        h2_ok = false;
                        h2_notes.push(format!(
                            "interval {i}: 0 < mu F <= x F_x fails at (t, x) = ({t}, {x})"
                        ));
                    }
                }

                if let Some(mu) = mu {
                    let pow = x.abs().powf(mu);
                    if x.abs() <= 1.0 {
                        let margin = m_up * pow - fx;
                        upper.worst_margin = upper.worst_margin.min(margin);
                        if margin < -tol(fx) {
                            upper.ok = false;
                        }
                    }
                    // b_i := m_i
                    let margin = fx - (m_lo * pow - m_lo);
                    lower.worst_margin = lower.worst_margin.min(margin);
                    if margin < -tol(fx) {
                        lower.ok = false;
                    }
                }
            }
        }
    }
    if !upper.worst_margin.is_finite() {
        upper.worst_margin = 0.0;
    }
    if !lower.worst_margin.is_finite() {
        lower.worst_margin = 0.0;
    }

    h1_notes.dedup();
    h2_notes.dedup();
    let h1 = HypothesisCheck::new(
        h1_ok,
        if h1_ok {
            "closed-form growth witness bounds F and F_x on the grid; F(t, 0) = 0".into()
        } else {
            h1_notes.join("; ")
        },
    );
    let h2 = HypothesisCheck::new(
        h2_ok,
        if h2_ok {
            format!("0 < mu F <= x F_x on every grid point; smallest slack {worst_h2:e}")
        } else {
            h2_notes.join("; ")
        },
    );
    let h3_margin = consts.m_constant - consts.p_weighted_sum;
    let h3_ok = consts.p_weighted_sum < consts.m_constant;
    let h3 = HypothesisCheck::new(
        h3_ok,
        format!(
            "weighted perturbation norm {} {} M = {}",
            consts.p_weighted_sum,
            if h3_ok { "<" } else { ">=" },
            consts.m_constant
        ),
    );
    HypothesisReport {
        h1,
        h2,
        h3,
        h3_margin,
        lemma2_upper: upper,
        lemma2_lower: lower,
        flags,
    }
}
