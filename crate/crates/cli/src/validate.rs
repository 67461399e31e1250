use anyhow::Result;
use aoi_core::analytic::SolverRegistry;
use aoi_core::simulator::{self, ReplicationSummary};
use aoi_core::stats::sigma_coverage;
use aoi_core::{ServiceDistribution, SystemParams};
use rayon::prelude::*;

use crate::format::{header, sig10};
use crate::sweep::SimSettings;

/// Relative CI half-width above which a case is flagged as under-resolved.
pub const WIDE_RELATIVE_HALFWIDTH: f64 = 0.01;

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationCase {
    pub m: usize,
    pub lambda: f64,
    pub service: ServiceDistribution,
}

impl ValidationCase {
    pub fn new(m: usize, lambda: f64, service: &str) -> Result<Self> {
        Ok(Self { m, lambda, service: ServiceDistribution::parse(service)? })
    }
}

/// 12 three-cell cases over four service laws, plus 6 each for one and two
/// cells over deterministic and exponential service.
pub fn default_grid() -> Vec<ValidationCase> {
    let lambdas = [0.5, 1.0, 4.0];
    let mut cases = Vec::new();
    for (m, services) in [
        (1, &["det:1", "exp:1"][..]),
        (2, &["det:1", "exp:1"][..]),
        (3, &["det:1", "exp:1", "erlang:3:3", "gamma:0.5:0.5"][..]),
    ] {
        for s in services {
            for &l in &lambdas {
                cases.push(ValidationCase::new(m, l, s).expect("built-in spec"));
            }
        }
    }
    cases
}

#[derive(Debug, Clone)]
pub struct ValidationSettings {
    pub sim: SimSettings,
    /// Normal-equivalent width of the interval, e.g. 3 for "3σ".
    pub sigma: f64,
}

impl ValidationSettings {
    pub fn coverage(&self) -> f64 {
        sigma_coverage(self.sigma)
    }
}

#[derive(Debug, Clone)]
pub struct CaseResult {
    pub case: ValidationCase,
    pub analytic: f64,
    pub simulated: ReplicationSummary,
    pub halfwidth: f64,
    pub pass: bool,
    pub wide: bool,
}

pub fn run_case(case: &ValidationCase, settings: &ValidationSettings) -> Result<CaseResult> {
    let params = SystemParams::new(case.lambda, case.m, case.service.clone())?;
    let analytic = SolverRegistry::builtin().solve(&params)?.mean_aoi;
    let report = simulator::run(&settings.sim.config(params))?;
    let halfwidth = report.summary.ci_halfwidth(settings.coverage());
    Ok(CaseResult {
        case: case.clone(),
        analytic,
        simulated: report.summary,
        halfwidth,
        pass: (analytic - report.summary.mean).abs() <= halfwidth,
        wide: halfwidth > WIDE_RELATIVE_HALFWIDTH * analytic.abs(),
    })
}

pub fn run_validation(cases: &[ValidationCase], settings: &ValidationSettings) -> Result<Vec<CaseResult>> {
    cases.par_iter().map(|c| run_case(c, settings)).collect()
}

fn report_header(results: &[CaseResult], settings: &ValidationSettings) -> String {
    header(
        "validate",
        &[
            ("cases", results.len().to_string()),
            ("horizon", settings.sim.horizon.to_string()),
            ("warmup", settings.sim.resolved_warmup().to_string()),
            ("seed", settings.sim.seed.to_string()),
            ("replications", settings.sim.replications.to_string()),
            ("sigma", settings.sigma.to_string()),
            ("coverage", settings.coverage().to_string()),
        ],
    )
}

pub fn render_report(results: &[CaseResult], settings: &ValidationSettings) -> String {
    let mut out = report_header(results, settings);
    for r in results {
        let z = (r.simulated.mean - r.analytic) / r.simulated.std_error;
        out.push_str(&format!(
            "{} m={} lambda={} service={} analytic={} simulated={} +/- {} z={:.2}{}\n",
            if r.pass { "PASS" } else { "FAIL" },
            r.case.m,
            r.case.lambda,
            r.case.service,
            sig10(r.analytic),
            sig10(r.simulated.mean),
            sig10(r.halfwidth),
            z,
            if r.wide { " (wide CI: increase --horizon)" } else { "" },
        ));
    }
    let passed = results.iter().filter(|r| r.pass).count();
    out.push_str(&format!("{passed}/{} cases passed\n", results.len()));
    out
}

pub fn render_csv(results: &[CaseResult], settings: &ValidationSettings) -> String {
    let mut out = report_header(results, settings);
    out.push_str("m,lambda,service,analytic,simulated,ci_halfwidth,pass\n");
    for r in results {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.case.m,
            r.case.lambda,
            r.case.service,
            sig10(r.analytic),
            sig10(r.simulated.mean),
            sig10(r.halfwidth),
            r.pass
        ));
    }
    out
}
