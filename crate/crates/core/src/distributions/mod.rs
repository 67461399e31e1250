//! Service-time laws.
//!
//! Every law exposes its Laplace–Stieltjes transform `Ĝ(s) = E e^{-sσ}` and
//! the first two derivatives in closed form, so nothing downstream ever
//! differentiates numerically. Laws are registered by name in a
//! [`DistributionRegistry`] and parsed from the colon-separated grammar
//! used on the command line.

mod laws;
mod registry;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::RngCore;

use crate::error::{AoiError, Result};
use crate::stats::Moments;

pub use laws::{Deterministic, Erlang, Exponential, GammaLaw};
pub use registry::{DistributionRegistry, LawParser};

/// A service (or interarrival) time law.
///
/// `lst*` methods are evaluated for `s >= 0` only; range checking happens in
/// [`ServiceDistribution`].
pub trait ServiceLaw: fmt::Debug + Send + Sync {
    /// Registry name, e.g. `"exp"`.
    fn name(&self) -> &'static str;
    /// Canonical text form that parses back into the same law.
    fn spec(&self) -> String;
    fn mean(&self) -> f64;
    fn second_moment(&self) -> f64;
    fn lst(&self, s: f64) -> f64;
    fn lst_d1(&self, s: f64) -> f64;
    fn lst_d2(&self, s: f64) -> f64;
    fn sample(&self, rng: &mut dyn RngCore) -> f64;
}

/// Shared handle to a registered [`ServiceLaw`].
#[derive(Clone)]
pub struct ServiceDistribution(Arc<dyn ServiceLaw>);

impl ServiceDistribution {
    pub fn from_law<L: ServiceLaw + 'static>(law: L) -> Self {
        Self(Arc::new(law))
    }

    pub fn deterministic(d: f64) -> Result<Self> {
        Deterministic::new(d).map(Self::from_law)
    }

    pub fn exponential(rate: f64) -> Result<Self> {
        Exponential::new(rate).map(Self::from_law)
    }

    pub fn erlang(shape: u32, rate: f64) -> Result<Self> {
        Erlang::new(shape, rate).map(Self::from_law)
    }

    pub fn gamma(shape: f64, rate: f64) -> Result<Self> {
        GammaLaw::new(shape, rate).map(Self::from_law)
    }

    /// Parse with the built-in registry.
    pub fn parse(spec: &str) -> Result<Self> {
        DistributionRegistry::builtin().parse(spec)
    }

    pub fn law(&self) -> &dyn ServiceLaw {
        self.0.as_ref()
    }

    pub fn name(&self) -> &'static str {
        self.0.name()
    }

    pub fn spec(&self) -> String {
        self.0.spec()
    }

    /// `E σ`, i.e. `1/μ`.
    pub fn mean(&self) -> f64 {
        self.0.mean()
    }

    /// `E σ²`.
    pub fn second_moment(&self) -> f64 {
        self.0.second_moment()
    }

    /// `Ĝ(s)`.
    pub fn laplace(&self, s: f64) -> Result<f64> {
        check_arg(s)?;
        Ok(self.0.lst(s))
    }

    /// `Ĝ′(s) = −E[σ e^{−sσ}]`.
    pub fn laplace_d1(&self, s: f64) -> Result<f64> {
        check_arg(s)?;
        Ok(self.0.lst_d1(s))
    }

    /// `Ĝ″(s) = E[σ² e^{−sσ}]`.
    pub fn laplace_d2(&self, s: f64) -> Result<f64> {
        check_arg(s)?;
        Ok(self.0.lst_d2(s))
    }

    pub fn sample(&self, rng: &mut dyn RngCore) -> f64 {
        self.0.sample(rng)
    }
}

fn check_arg(s: f64) -> Result<()> {
    if s.is_nan() || s < 0.0 {
        return Err(AoiError::Domain(format!("Laplace transform argument must be >= 0, got {s}")));
    }
    Ok(())
}

impl fmt::Debug for ServiceDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(&self.0, f)
    }
}

impl fmt::Display for ServiceDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.spec())
    }
}

impl FromStr for ServiceDistribution {
    type Err = AoiError;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

impl PartialEq for ServiceDistribution {
    fn eq(&self, other: &Self) -> bool {
        self.spec() == other.spec()
    }
}

/// One grid point of a [`transform_checks`] run.
#[derive(Debug, Clone, PartialEq)]
pub struct TransformPoint {
    pub s: f64,
    pub exact: [f64; 3],
    pub estimate: [f64; 3],
    pub rel_error: [f64; 3],
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransformReport {
    pub samples: usize,
    pub points: Vec<TransformPoint>,
    pub max_rel_error: f64,
}

/// Compare `Ĝ`, `Ĝ′`, `Ĝ″` against Monte-Carlo averages of `e^{−sσ}`,
/// `−σe^{−sσ}` and `σ²e^{−sσ}` built from `samples` draws.
///
/// The same draws are reused for every `s` in the grid.
pub fn transform_checks(
    dist: &ServiceDistribution,
    s_grid: &[f64],
    samples: usize,
    rng: &mut dyn RngCore,
) -> Result<TransformReport> {
    if samples == 0 {
        return Err(AoiError::InvalidParameter("samples must be positive".into()));
    }
    for &s in s_grid {
        check_arg(s)?;
        if !s.is_finite() {
            return Err(AoiError::Domain(format!("grid point {s} is not finite")));
        }
    }
    let draws: Vec<f64> = (0..samples).map(|_| dist.sample(rng)).collect();
    let mut points = Vec::with_capacity(s_grid.len());
    let mut max_rel_error = 0.0f64;
    for &s in s_grid {
        let mut acc = [Moments::new(), Moments::new(), Moments::new()];
        for &x in &draws {
            let e = (-s * x).exp();
            acc[0].push(e);
            acc[1].push(-x * e);
            acc[2].push(x * x * e);
        }
        let exact = [dist.law().lst(s), dist.law().lst_d1(s), dist.law().lst_d2(s)];
        let estimate = [acc[0].mean(), acc[1].mean(), acc[2].mean()];
        let mut rel_error = [0.0; 3];
        for k in 0..3 {
            rel_error[k] = relative_error(estimate[k], exact[k]);
            max_rel_error = max_rel_error.max(rel_error[k]);
        }
        points.push(TransformPoint { s, exact, estimate, rel_error });
    }
    Ok(TransformReport { samples, points, max_rel_error })
}

fn relative_error(estimate: f64, exact: f64) -> f64 {
    let diff = (estimate - exact).abs();
    if exact == 0.0 {
        diff
    } else {
        diff / exact.abs()
    }
}
