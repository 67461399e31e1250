use rand::RngCore;
use rand_distr::{Distribution, Exp, Gamma};

use super::ServiceLaw;
use crate::error::{AoiError, Result};

fn positive(name: &str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(AoiError::InvalidParameter(format!("{name} must be finite and > 0, got {value}")))
    }
}

/// Point mass at `d`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Deterministic {
    d: f64,
}

impl Deterministic {
    pub fn new(d: f64) -> Result<Self> {
        Ok(Self { d: positive("deterministic duration", d)? })
    }
}

impl ServiceLaw for Deterministic {
    fn name(&self) -> &'static str {
        "det"
    }

    fn spec(&self) -> String {
        format!("det:{}", self.d)
    }

    fn mean(&self) -> f64 {
        self.d
    }

    fn second_moment(&self) -> f64 {
        self.d * self.d
    }

    fn lst(&self, s: f64) -> f64 {
        (-s * self.d).exp()
    }

    fn lst_d1(&self, s: f64) -> f64 {
        -self.d * (-s * self.d).exp()
    }

    fn lst_d2(&self, s: f64) -> f64 {
        self.d * self.d * (-s * self.d).exp()
    }

    fn sample(&self, _rng: &mut dyn RngCore) -> f64 {
        self.d
    }
}

/// Exponential with rate `μ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Exponential {
    rate: f64,
    sampler: Exp<f64>,
}

impl Exponential {
    pub fn new(rate: f64) -> Result<Self> {
        let rate = positive("exponential rate", rate)?;
        let sampler = Exp::new(rate).map_err(|e| AoiError::InvalidParameter(e.to_string()))?;
        Ok(Self { rate, sampler })
    }
}

impl ServiceLaw for Exponential {
    fn name(&self) -> &'static str {
        "exp"
    }

    fn spec(&self) -> String {
        format!("exp:{}", self.rate)
    }

    fn mean(&self) -> f64 {
        1.0 / self.rate
    }

    fn second_moment(&self) -> f64 {
        2.0 / (self.rate * self.rate)
    }

    fn lst(&self, s: f64) -> f64 {
        self.rate / (s + self.rate)
    }

    fn lst_d1(&self, s: f64) -> f64 {
        let a = s + self.rate;
        -self.rate / (a * a)
    }

    fn lst_d2(&self, s: f64) -> f64 {
        let a = s + self.rate;
        2.0 * self.rate / (a * a * a)
    }

    fn sample(&self, rng: &mut dyn RngCore) -> f64 {
        self.sampler.sample(rng)
    }
}

/// Sum of `k` independent exponentials with rate `ν`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Erlang {
    shape: u32,
    rate: f64,
    stage: Exp<f64>,
}

impl Erlang {
    pub fn new(shape: u32, rate: f64) -> Result<Self> {
        if shape == 0 {
            return Err(AoiError::InvalidParameter("erlang shape must be >= 1".into()));
        }
        let rate = positive("erlang rate", rate)?;
        let stage = Exp::new(rate).map_err(|e| AoiError::InvalidParameter(e.to_string()))?;
        Ok(Self { shape, rate, stage })
    }
}

impl ServiceLaw for Erlang {
    fn name(&self) -> &'static str {
        "erlang"
    }

    fn spec(&self) -> String {
        format!("erlang:{}:{}", self.shape, self.rate)
    }

    fn mean(&self) -> f64 {
        gamma_mean(self.shape as f64, self.rate)
    }

    fn second_moment(&self) -> f64 {
        gamma_second_moment(self.shape as f64, self.rate)
    }

    fn lst(&self, s: f64) -> f64 {
        gamma_lst(self.shape as f64, self.rate, s)
    }

    fn lst_d1(&self, s: f64) -> f64 {
        gamma_lst_d1(self.shape as f64, self.rate, s)
    }

    fn lst_d2(&self, s: f64) -> f64 {
        gamma_lst_d2(self.shape as f64, self.rate, s)
    }

    fn sample(&self, rng: &mut dyn RngCore) -> f64 {
        (0..self.shape).map(|_| self.stage.sample(rng)).sum()
    }
}

/// Gamma with shape `α` and rate `ν`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaLaw {
    shape: f64,
    rate: f64,
    sampler: Gamma<f64>,
}

impl GammaLaw {
    pub fn new(shape: f64, rate: f64) -> Result<Self> {
        let shape = positive("gamma shape", shape)?;
        let rate = positive("gamma rate", rate)?;
        // rand_distr parameterises by scale
        let sampler = Gamma::new(shape, 1.0 / rate).map_err(|e| AoiError::InvalidParameter(e.to_string()))?;
        Ok(Self { shape, rate, sampler })
    }
}

impl ServiceLaw for GammaLaw {
    fn name(&self) -> &'static str {
        "gamma"
    }

    fn spec(&self) -> String {
        format!("gamma:{}:{}", self.shape, self.rate)
    }

    fn mean(&self) -> f64 {
        gamma_mean(self.shape, self.rate)
    }

    fn second_moment(&self) -> f64 {
        gamma_second_moment(self.shape, self.rate)
    }

    fn lst(&self, s: f64) -> f64 {
        gamma_lst(self.shape, self.rate, s)
    }

    fn lst_d1(&self, s: f64) -> f64 {
        gamma_lst_d1(self.shape, self.rate, s)
    }

    fn lst_d2(&self, s: f64) -> f64 {
        gamma_lst_d2(self.shape, self.rate, s)
    }

    fn sample(&self, rng: &mut dyn RngCore) -> f64 {
        self.sampler.sample(rng)
    }
}

fn gamma_mean(shape: f64, rate: f64) -> f64 {
    shape / rate
}

fn gamma_second_moment(shape: f64, rate: f64) -> f64 {
    shape * (shape + 1.0) / (rate * rate)
}

// (ν/(s+ν))^α and its derivatives: Ĝ′ = −α/(s+ν)·Ĝ, Ĝ″ = α(α+1)/(s+ν)²·Ĝ
fn gamma_lst(shape: f64, rate: f64, s: f64) -> f64 {
    (rate / (s + rate)).powf(shape)
}

fn gamma_lst_d1(shape: f64, rate: f64, s: f64) -> f64 {
    -shape / (s + rate) * gamma_lst(shape, rate, s)
}

fn gamma_lst_d2(shape: f64, rate: f64, s: f64) -> f64 {
    let a = s + rate;
    shape * (shape + 1.0) / (a * a) * gamma_lst(shape, rate, s)
}
