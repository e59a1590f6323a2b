//! Certified semi-infinite quadrature: Laplace integrals of kernels and the
//! exponentially damped oscillatory integrals built on `θ(x) = 2 log(1-e^{-x})`.

mod laplace;
mod oscillatory;
pub mod tanh_sinh;

use serde::Serialize;

use crate::hpreal::{sum_bounds, HPReal};

pub use laplace::{laplace_integral, ConstantKernel, FnKernel, LaplaceKernel, SumKernel};
pub use oscillatory::{
    legendre_closed_form, legendre_formula_check, log_moment, log_moment_closed_form,
    log_moment_stated_form, osc_log_moment, osc_sine_moment, theta, IdentityCheck,
};

/// Outcome of a quadrature run.
#[derive(Debug, Clone)]
pub struct QuadratureResult {
    pub value: HPReal,
    pub nodes_used: u64,
    pub refinement_levels: u32,
    pub converged: bool,
    /// `|S_L - S_{L-1}|` for each refinement level after the first.
    pub differences: Vec<f64>,
}

impl QuadratureResult {
    /// Adds another result over an adjacent range.
    pub fn combine(self, other: QuadratureResult) -> QuadratureResult {
        let len = self.differences.len().max(other.differences.len());
        let differences = (0..len)
            .map(|i| self.differences.get(i).unwrap_or(&0.0) + other.differences.get(i).unwrap_or(&0.0))
            .collect();
        QuadratureResult {
            value: &self.value + &other.value,
            nodes_used: self.nodes_used + other.nodes_used,
            refinement_levels: self.refinement_levels.max(other.refinement_levels),
            converged: self.converged && other.converged,
            differences,
        }
    }

    pub(crate) fn widen(mut self, extra: f64) -> Self {
        let (v, e) = self.value.into_parts();
        self.value = HPReal::new(v, sum_bounds(&[e, extra]));
        self
    }

    pub(crate) fn scale(mut self, factor: &rug::Float) -> Self {
        self.value = self.value.scale(factor);
        self
    }
}

/// Serializable summary used in reports.
#[derive(Debug, Clone, Serialize)]
pub struct QuadratureSummary {
    pub value: String,
    pub err_bound: f64,
    pub nodes_used: u64,
    pub refinement_levels: u32,
    pub converged: bool,
}

impl From<&QuadratureResult> for QuadratureSummary {
    fn from(r: &QuadratureResult) -> Self {
        QuadratureSummary {
            value: r.value.to_string_digits(30),
            err_bound: r.value.err_bound(),
            nodes_used: r.nodes_used,
            refinement_levels: r.refinement_levels,
            converged: r.converged,
        }
    }
}
