use super::chain::{closed_form_pi, matrix_from};
use super::step1::table_from;
use super::table::{condition_on_k0, table_from_step1};
use super::{AoiEstimate, ChainModel, ConditionalAoiTable, RateTransform, Step1Table, SystemParams};
use crate::error::{AoiError, Result};

/// Moments of the departure-to-departure cycle `S₁` under the Palm law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CycleMoments {
    /// `E⁰(S₁ | K₀ = ℓ)`
    pub given_k0: [f64; 3],
    pub mean: f64,
    pub second_moment: f64,
}

fn moments_from(t: &RateTransform, pi: &[f64; 3]) -> CycleMoments {
    // S₁ = τ·1{K₀=0} + σ
    let idle = 1.0 / t.lambda;
    CycleMoments {
        given_k0: [idle + t.mean, t.mean, t.mean],
        mean: pi[0] * idle + t.mean,
        second_moment: t.second_moment + pi[0] * 2.0 * (t.mean + idle) * idle,
    }
}

pub fn cycle_moments(params: &SystemParams, pi: &[f64; 3]) -> Result<CycleMoments> {
    params.require_m(3)?;
    let total: f64 = pi.iter().sum();
    if pi.iter().any(|x| !(0.0..=1.0).contains(x)) || (total - 1.0).abs() > 1e-9 {
        return Err(AoiError::InvalidParameter(format!("{pi:?} is not a probability vector")));
    }
    Ok(moments_from(&params.at_rate(), pi))
}

/// Every intermediate of the three-cell computation.
#[derive(Debug, Clone, PartialEq)]
pub struct PalmBreakdown {
    pub chain: ChainModel,
    pub step1: Step1Table,
    pub table: ConditionalAoiTable,
    pub aoi_given_k0: [f64; 3],
    pub cycle: CycleMoments,
    /// `E⁰[α(0) S₁]`
    pub aoi_cycle_product: f64,
    pub mean_aoi: f64,
}

pub fn palm_m3(params: &SystemParams) -> Result<PalmBreakdown> {
    params.require_m(3)?;
    let t = params.at_rate();
    let chain = ChainModel { p: matrix_from(&t), pi: closed_form_pi(&t)? };
    let step1 = table_from(&t)?;
    let table = table_from_step1(&step1, t.exactly_one());
    let aoi_given_k0 = condition_on_k0(&chain, &table)?;
    let cycle = moments_from(&t, &chain.pi);

    // α(0) and S₁ are conditionally independent given K₀.
    let aoi_cycle_product: f64 = (0..3).map(|l| aoi_given_k0[l] * cycle.given_k0[l] * chain.pi[l]).sum();
    let mean_aoi = (aoi_cycle_product + 0.5 * cycle.second_moment) / cycle.mean;
    if !mean_aoi.is_finite() {
        return Err(AoiError::Degenerate(format!("mean AoI evaluated to {mean_aoi}")));
    }
    Ok(PalmBreakdown { chain, step1, table, aoi_given_k0, cycle, aoi_cycle_product, mean_aoi })
}

/// Mean AoI of the three-cell buffer by Palm inversion over departures.
pub fn mean_aoi_m3(params: &SystemParams) -> Result<AoiEstimate> {
    let b = palm_m3(params)?;
    Ok(AoiEstimate::analytic(b.mean_aoi, params.clone()))
}

/// `1 / (λ Ĝ(λ))`
pub fn mean_aoi_m1(params: &SystemParams) -> Result<AoiEstimate> {
    params.require_m(1)?;
    let t = params.at_rate();
    let v = 1.0 / (t.lambda * t.g);
    if !v.is_finite() {
        return Err(AoiError::Degenerate(format!("Ĝ(λ) = {:e} underflows", t.g)));
    }
    Ok(AoiEstimate::analytic(v, params.clone()))
}

/// `1/μ + (1−Ĝ+λĜ′)/λ + (Ĝ − λĜ′ + ½λ²E σ²) / (λ(λ/μ + Ĝ))`, transforms at λ.
pub fn mean_aoi_m2(params: &SystemParams) -> Result<AoiEstimate> {
    params.require_m(2)?;
    let t = params.at_rate();
    let lam = t.lambda;
    let tail = (t.g - lam * t.g1 + 0.5 * lam * lam * t.second_moment) / (lam * t.mean + t.g);
    let v = t.mean + t.two_or_more() / lam + tail / lam;
    Ok(AoiEstimate::analytic(v, params.clone()))
}
