use std::cmp::Ordering;

use anyhow::{bail, Result};
use aoi_core::analytic::SolverRegistry;
use aoi_core::simulator::{self, SimConfig};
use aoi_core::{EstimateMethod, ServiceDistribution, SystemParams};
use rayon::prelude::*;

use crate::args::SweepMethod;

/// Simulation knobs shared by every simulated cell.
#[derive(Debug, Clone, PartialEq)]
pub struct SimSettings {
    pub horizon: f64,
    pub warmup: Option<f64>,
    pub seed: u64,
    pub replications: usize,
}

impl Default for SimSettings {
    fn default() -> Self {
        Self {
            horizon: simulator::DEFAULT_HORIZON,
            warmup: None,
            seed: simulator::DEFAULT_SEED,
            replications: simulator::DEFAULT_REPLICATIONS,
        }
    }
}

impl SimSettings {
    pub fn config(&self, params: SystemParams) -> SimConfig {
        let mut c =
            SimConfig::new(params).with_horizon(self.horizon).with_seed(self.seed).with_replications(self.replications);
        if let Some(w) = self.warmup {
            c = c.with_warmup(w);
        }
        c
    }

    pub fn resolved_warmup(&self) -> f64 {
        self.warmup.unwrap_or(simulator::DEFAULT_WARMUP_FRACTION * self.horizon)
    }
}

#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub lambdas: Vec<f64>,
    pub ms: Vec<usize>,
    pub service: ServiceDistribution,
    pub method: SweepMethod,
    pub sim: SimSettings,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub lambda: f64,
    pub m: usize,
    pub method: EstimateMethod,
    pub mean_aoi: f64,
    pub ci_halfwidth: f64,
}

pub const CSV_HEADER: &str = "lambda,m,method,mean_aoi,ci_halfwidth";

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.ms.is_empty() {
            bail!("no buffer sizes given");
        }
        if self.lambdas.is_empty() {
            bail!("no arrival rates given");
        }
        if let Some(l) = self.lambdas.iter().find(|&&l| !(l > 0.0 && l.is_finite())) {
            bail!("lambda must be positive, got {l}");
        }
        if self.method != SweepMethod::Simulated {
            let registry = SolverRegistry::builtin();
            if let Some(&m) = self.ms.iter().find(|&&m| registry.for_buffer(m).is_err()) {
                bail!("no closed form for m = {m}; use `--method simulated` for m >= 4");
            }
        }
        Ok(())
    }

    fn methods(&self) -> Vec<EstimateMethod> {
        match self.method {
            SweepMethod::Analytic => vec![EstimateMethod::Analytic],
            SweepMethod::Simulated => vec![EstimateMethod::Simulated],
            SweepMethod::Both => vec![EstimateMethod::Analytic, EstimateMethod::Simulated],
        }
    }
}

/// Evaluate every (λ, m, method) cell in parallel; rows come back sorted
/// by λ, then m, then method.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    let mut cells = Vec::new();
    for &lambda in &spec.lambdas {
        for &m in &spec.ms {
            for method in spec.methods() {
                cells.push((lambda, m, method));
            }
        }
    }
    let mut rows = cells
        .into_par_iter()
        .map(|(lambda, m, method)| -> Result<SweepRow> {
            let params = SystemParams::new(lambda, m, spec.service.clone())?;
            let est = match method {
                EstimateMethod::Analytic => SolverRegistry::builtin().solve(&params)?,
                EstimateMethod::Simulated => simulator::run(&spec.sim.config(params))?.estimate,
            };
            Ok(SweepRow { lambda, m, method, mean_aoi: est.mean_aoi, ci_halfwidth: est.ci_halfwidth })
        })
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by(|a, b| {
        a.lambda.partial_cmp(&b.lambda).unwrap_or(Ordering::Equal).then(a.m.cmp(&b.m)).then(a.method.cmp(&b.method))
    });
    Ok(rows)
}

pub fn csv_row(r: &SweepRow) -> String {
    format!("{},{},{},{},{}", r.lambda, r.m, r.method, r.mean_aoi, r.ci_halfwidth)
}

pub fn to_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&csv_row(r));
        out.push('\n');
    }
    out
}
