use super::{checked_ratio, RateTransform, SystemParams};
use crate::error::{AoiError, Result};

/// Conditional moments of one service time `σ` against the first two
/// Poisson(λ) interarrival gaps `τ₁`, `τ₂` that start with it.
///
/// "between" is the event `τ₁ ≤ σ < τ₁ + τ₂` (exactly one arrival during
/// the service); "two_le" is `τ₁ + τ₂ ≤ σ` (at least two).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Step1Table {
    /// E(σ | τ > σ)
    pub e_sigma_tau_gt: f64,
    /// E(σ | τ ≤ σ)
    pub e_sigma_tau_le: f64,
    /// E(σ | τ₁ + τ₂ ≤ σ)
    pub e_sigma_two_le: f64,
    /// E(σ | τ₁ ≤ σ < τ₁ + τ₂)
    pub e_sigma_between: f64,
    /// E(τ₁ | τ₁ + τ₂ ≤ σ)
    pub e_tau_two_le: f64,
    /// E(τ₁ | τ₁ ≤ σ < τ₁ + τ₂)
    pub e_tau_between: f64,
    /// E(τ | τ ≤ σ)
    pub e_tau_le: f64,
    /// ℙ(τ₁ + τ₂ > σ | τ₁ ≤ σ)
    pub q: f64,
}

/// Smallest `1 − Ĝ(λ)` for which the conditional ratios are evaluated.
pub const MIN_BUSY_PROBABILITY: f64 = 1e-12;

pub(crate) fn table_from(t: &RateTransform) -> Result<Step1Table> {
    let busy = 1.0 - t.g;
    if busy < MIN_BUSY_PROBABILITY {
        return Err(AoiError::Degenerate(format!(
            "1 - Ĝ(λ) = {busy:e} at λ = {}; conditional means are 0/0 limits here",
            t.lambda
        )));
    }
    let lam = t.lambda;
    let two = t.two_or_more();
    Ok(Step1Table {
        e_sigma_tau_gt: checked_ratio(-t.g1, t.g, "E(σ|τ>σ)")?,
        e_sigma_tau_le: checked_ratio(t.mean + t.g1, busy, "E(σ|τ≤σ)")?,
        e_sigma_two_le: checked_ratio(t.mean + t.g1 - lam * t.g2, two, "E(σ|τ₁+τ₂≤σ)")?,
        e_sigma_between: checked_ratio(t.g2, -t.g1, "E(σ|between)")?,
        e_tau_two_le: checked_ratio((1.0 - t.g) / lam + t.g1 - 0.5 * lam * t.g2, two, "E(τ₁|τ₁+τ₂≤σ)")?,
        e_tau_between: checked_ratio(t.g2, -2.0 * t.g1, "E(τ₁|between)")?,
        e_tau_le: checked_ratio(two, lam * busy, "E(τ|τ≤σ)")?,
        q: checked_ratio(-lam * t.g1, busy, "q")?,
    })
}

pub fn step1_table(params: &SystemParams) -> Result<Step1Table> {
    params.validate()?;
    table_from(&params.at_rate())
}
