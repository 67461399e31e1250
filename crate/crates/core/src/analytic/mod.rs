//! Exact stationary mean AoI for buffers of one, two and three cells.
//!
//! The three-cell value is assembled from the embedded chain `K_n`, the
//! number of occupied cells just after the n-th successful departure:
//!
//! ```text
//! E α = (E⁰[α(0) S₁] + ½ E⁰[S₁²]) / E⁰[S₁]
//! E⁰[α(0) S₁] = Σ_ℓ E⁰[α(0) | K₀=ℓ] · E⁰[S₁ | K₀=ℓ] · π_ℓ
//! ```
//!
//! where `E⁰` is the expectation with a successful departure at time 0.
//! Everything is a scalar function of `λ`, `Ĝ(λ)`, `Ĝ′(λ)`, `Ĝ″(λ)` and the
//! first two service moments.

mod chain;
mod closed_form;
mod solvers;
mod step1;
mod table;

use std::fmt;

use serde::Serialize;

use crate::distributions::ServiceDistribution;
use crate::error::{AoiError, Result};

pub use chain::{solve_stationary, stationary_distribution, transition_matrix, ChainModel};
pub use closed_form::{cycle_moments, mean_aoi_m1, mean_aoi_m2, mean_aoi_m3, palm_m3, CycleMoments, PalmBreakdown};
pub use solvers::{MeanAoiSolver, SingleCell, SolverRegistry, ThreeCellPalm, TwoCell};
pub use step1::{step1_table, Step1Table};
pub use table::{aoi_given_k0, backward_weights, conditional_aoi_table, Cell, ConditionalAoiTable};

/// Arrival rate, buffer size and service law.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemParams {
    pub lambda: f64,
    pub m: usize,
    pub service: ServiceDistribution,
}

impl SystemParams {
    pub fn new(lambda: f64, m: usize, service: ServiceDistribution) -> Result<Self> {
        let p = Self { lambda, m, service };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda.is_finite() && self.lambda > 0.0) {
            return Err(AoiError::InvalidParameter(format!("lambda must be positive and finite, got {}", self.lambda)));
        }
        if self.m == 0 {
            return Err(AoiError::InvalidParameter("buffer size m must be >= 1".into()));
        }
        Ok(())
    }

    pub(crate) fn require_m(&self, m: usize) -> Result<()> {
        self.validate()?;
        if self.m != m {
            return Err(AoiError::Unsupported(format!("this computation needs m = {m}, got m = {}", self.m)));
        }
        Ok(())
    }

    /// Transform values at `s = λ`.
    pub(crate) fn at_rate(&self) -> RateTransform {
        let law = self.service.law();
        let s = self.lambda;
        RateTransform {
            lambda: s,
            g: law.lst(s),
            g1: law.lst_d1(s),
            g2: law.lst_d2(s),
            mean: law.mean(),
            second_moment: law.second_moment(),
        }
    }
}

impl fmt::Display for SystemParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "m={} lambda={} service={}", self.m, self.lambda, self.service)
    }
}

/// `Ĝ`, `Ĝ′`, `Ĝ″` at `λ` plus the service moments.
#[derive(Debug, Clone, Copy)]
pub(crate) struct RateTransform {
    pub lambda: f64,
    pub g: f64,
    pub g1: f64,
    pub g2: f64,
    pub mean: f64,
    pub second_moment: f64,
}

impl RateTransform {
    /// ℙ(τ₁ + τ₂ ≤ σ): at least two arrivals during one service.
    pub fn two_or_more(&self) -> f64 {
        1.0 - self.g + self.lambda * self.g1
    }

    /// ℙ(τ₁ ≤ σ < τ₁ + τ₂): exactly one arrival during one service.
    pub fn exactly_one(&self) -> f64 {
        -self.lambda * self.g1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EstimateMethod {
    Analytic,
    Simulated,
}

impl fmt::Display for EstimateMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EstimateMethod::Analytic => "analytic",
            EstimateMethod::Simulated => "simulated",
        })
    }
}

/// A mean-AoI value and where it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct AoiEstimate {
    pub mean_aoi: f64,
    pub method: EstimateMethod,
    /// Zero for analytic values.
    pub ci_halfwidth: f64,
    pub params: SystemParams,
}

impl AoiEstimate {
    pub fn analytic(mean_aoi: f64, params: SystemParams) -> Self {
        Self { mean_aoi, method: EstimateMethod::Analytic, ci_halfwidth: 0.0, params }
    }

    pub fn contains(&self, value: f64) -> bool {
        (value - self.mean_aoi).abs() <= self.ci_halfwidth
    }
}

pub(crate) fn checked_ratio(num: f64, den: f64, what: &str) -> Result<f64> {
    if !(den.abs() >= 1e-300) || !num.is_finite() {
        return Err(AoiError::Degenerate(format!("{what}: denominator {den:e} too small to evaluate")));
    }
    Ok(num / den)
}
