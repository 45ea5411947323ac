use std::sync::Arc;

use nalgebra::DMatrix;

use crate::energy::{self, ConstantsReport, HypothesisReport, SamplingGrid};
use crate::error::Result;
use crate::fem::{DiscreteFunction, Mesh, QuadratureRule, SymTridiagonal};
use crate::problem::ValidatedProblem;

/// A validated problem together with its aligned mesh and quadrature rule.
#[derive(Debug, Clone)]
pub struct DiscreteProblem {
    problem: ValidatedProblem,
    mesh: Arc<Mesh>,
    rule: QuadratureRule,
    stiffness: SymTridiagonal,
}

impl DiscreteProblem {
    pub fn new(problem: ValidatedProblem, refinement: usize, quad_order: usize) -> Result<Self> {
        let mesh = Arc::new(Mesh::build(problem.partition(), refinement)?);
        let rule = QuadratureRule::gauss_legendre(quad_order)?;
        Ok(Self::from_parts(problem, mesh, rule))
    }

    pub fn from_parts(problem: ValidatedProblem, mesh: Arc<Mesh>, rule: QuadratureRule) -> Self {
        let stiffness = SymTridiagonal::stiffness(&mesh);
        Self {
            problem,
            mesh,
            rule,
            stiffness,
        }
    }

    /// Same problem on a different refinement.
    pub fn refined(&self, refinement: usize) -> Result<Self> {
        let mesh = Arc::new(Mesh::build(self.problem.partition(), refinement)?);
        Ok(Self::from_parts(
            self.problem.clone(),
            mesh,
            self.rule.clone(),
        ))
    }

    pub fn problem(&self) -> &ValidatedProblem {
        &self.problem
    }

    pub fn mesh(&self) -> &Arc<Mesh> {
        &self.mesh
    }

    pub fn rule(&self) -> &QuadratureRule {
        &self.rule
    }

    pub fn stiffness(&self) -> &SymTridiagonal {
        &self.stiffness
    }

    pub fn zeros(&self) -> DiscreteFunction {
        DiscreteFunction::zeros(&self.mesh)
    }

    pub fn energy(&self, u: &DiscreteFunction) -> Result<f64> {
        energy::energy(u, &self.problem, &self.rule)
    }

    pub fn gradient(&self, u: &DiscreteFunction) -> Result<DiscreteFunction> {
        energy::gradient(u, &self.problem, &self.rule)
    }

    pub fn hessian(&self, u: &DiscreteFunction) -> Result<DMatrix<f64>> {
        energy::hessian(u, &self.problem, &self.rule)
    }

    pub fn constants(&self) -> ConstantsReport {
        energy::constants_report(&self.problem, &self.rule)
    }

    pub fn hypotheses(&self) -> HypothesisReport {
        energy::check_hypotheses(&self.problem, &SamplingGrid::default(), &self.rule)
    }

    /// `K^{-1} g`: the Riesz representative of a dual vector in the
    /// `H^1_0` inner product.
    pub fn riesz(&self, g: &[f64]) -> Vec<f64> {
        self.stiffness.solve(g)
    }

    pub fn h1_norm_sq(&self, coeffs: &[f64]) -> f64 {
        self.stiffness.quad_form(coeffs)
    }
}
