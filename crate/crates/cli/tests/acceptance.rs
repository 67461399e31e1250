//! Acceptance run. Prints one `[PASS]`/`[FAIL]` line per criterion and exits
//! non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use aoi_cli::args::SweepMethod;
use aoi_cli::sweep::{run_sweep, SimSettings, SweepSpec};
use aoi_cli::validate::{default_grid, run_validation, ValidationSettings};
use aoi_core::analytic::{
    cycle_moments, solve_stationary, stationary_distribution, step1_table, transition_matrix, SolverRegistry,
};
use aoi_core::simulator::{self, CycleDiagnostics, EmpiricalChain, ReplicationSummary, SimConfig};
use aoi_core::stats::{sigma_coverage, Moments};
use aoi_core::{EstimateMethod, ServiceDistribution, SystemParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp};

type Outcome = Result<String, String>;

struct Criterion {
    id: &'static str,
    title: &'static str,
    budget: Option<Duration>,
    check: fn() -> Outcome,
}

fn params(lambda: f64, m: usize, spec: &str) -> SystemParams {
    SystemParams::new(lambda, m, ServiceDistribution::parse(spec).expect("spec")).expect("params")
}

fn analytic(lambda: f64, m: usize, spec: &str) -> f64 {
    SolverRegistry::builtin().solve(&params(lambda, m, spec)).expect("closed form").mean_aoi
}

fn random_service(rng: &mut ChaCha8Rng) -> ServiceDistribution {
    let mean = rng.random_range(0.2..5.0);
    match rng.random_range(0..4) {
        0 => ServiceDistribution::deterministic(mean),
        1 => ServiceDistribution::exponential(1.0 / mean),
        2 => {
            let k = rng.random_range(1..8);
            ServiceDistribution::erlang(k, f64::from(k) / mean)
        }
        _ => {
            let shape = rng.random_range(0.2..6.0);
            ServiceDistribution::gamma(shape, shape / mean)
        }
    }
    .expect("positive parameters")
}

fn chain_correctness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2021);
    let (mut worst_solve, mut worst_balance, mut worst_row) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..200 {
        let lambda = 10f64.powf(rng.random_range(-1.5..1.5));
        let pr = SystemParams::new(lambda, 3, random_service(&mut rng)).map_err(|e| e.to_string())?;
        let p = transition_matrix(&pr).map_err(|e| e.to_string())?;
        let pi = stationary_distribution(&pr).map_err(|e| format!("λ={lambda} {}: {e}", pr.service))?;
        let solved = solve_stationary(&p).map_err(|e| e.to_string())?;
        for j in 0..3 {
            worst_solve = worst_solve.max((pi[j] - solved[j]).abs());
            let balance: f64 = (0..3).map(|i| pi[i] * p[i][j]).sum();
            worst_balance = worst_balance.max((balance - pi[j]).abs());
            worst_row = worst_row.max((p[j].iter().sum::<f64>() - 1.0).abs());
        }
    }
    let detail =
        format!("max |π−solve| {worst_solve:.1e}, max |πP−π| {worst_balance:.1e}, max |row−1| {worst_row:.1e}");
    if worst_solve <= 1e-10 && worst_balance <= 1e-12 && worst_row <= 1e-12 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn step1_oracle() -> Outcome {
    const SAMPLES: usize = 10_000_000;
    let mut worst = 0.0f64;
    let mut failures = Vec::new();
    for spec in ["det:1", "exp:1", "erlang:3:3"] {
        for lambda in [0.5, 1.0, 4.0] {
            let pr = params(lambda, 3, spec);
            let t = step1_table(&pr).map_err(|e| e.to_string())?;
            let tau = Exp::new(lambda).expect("rate");
            let mut rng = ChaCha8Rng::seed_from_u64(0xACCE_5701);
            // σ|τ>σ, σ|τ≤σ, σ|τ₁+τ₂≤σ, σ|τ₁≤σ<τ₁+τ₂, τ₁|τ₁+τ₂≤σ, τ₁|τ₁≤σ<τ₁+τ₂, q, τ|τ≤σ
            let mut acc: [Moments; 8] = Default::default();
            for _ in 0..SAMPLES {
                let s = pr.service.sample(&mut rng);
                let t1 = tau.sample(&mut rng);
                let t2 = tau.sample(&mut rng);
                if t1 > s {
                    acc[0].push(s);
                    continue;
                }
                acc[1].push(s);
                acc[7].push(t1);
                if t1 + t2 <= s {
                    acc[2].push(s);
                    acc[4].push(t1);
                    acc[6].push(0.0);
                } else {
                    acc[3].push(s);
                    acc[5].push(t1);
                    acc[6].push(1.0);
                }
            }
            let exact = [
                t.e_sigma_tau_gt,
                t.e_sigma_tau_le,
                t.e_sigma_two_le,
                t.e_sigma_between,
                t.e_tau_two_le,
                t.e_tau_between,
                t.q,
                t.e_tau_le,
            ];
            for (k, (mc, ex)) in acc.iter().zip(exact).enumerate() {
                let se = mc.std_error();
                // a degenerate conditional law (det service) has zero spread
                let z = if se > 0.0 { (mc.mean() - ex).abs() / se } else { 0.0 };
                let ok = if se > 0.0 { z <= 3.0 } else { (mc.mean() - ex).abs() <= 1e-12 * ex.abs() };
                worst = worst.max(z);
                if !ok {
                    failures.push(format!("{spec} λ={lambda} quantity {k}: mc {} vs {ex}", mc.mean()));
                }
            }
        }
    }
    if failures.is_empty() {
        Ok(format!("9 cases × 8 quantities, largest |z| = {worst:.2}"))
    } else {
        Err(failures.join("; "))
    }
}

fn validate_grid() -> Outcome {
    let settings = ValidationSettings {
        sim: SimSettings { horizon: 1e7, warmup: None, seed: simulator::DEFAULT_SEED, replications: 8 },
        sigma: 3.0,
    };
    let grid = default_grid();
    let results = run_validation(&grid, &settings).map_err(|e| e.to_string())?;
    let failed: Vec<String> = results
        .iter()
        .filter(|r| !r.pass)
        .map(|r| {
            format!(
                "m={} λ={} {}: {} vs {} ± {}",
                r.case.m, r.case.lambda, r.case.service, r.analytic, r.simulated.mean, r.halfwidth
            )
        })
        .collect();
    let counts = [1, 2, 3].map(|m| grid.iter().filter(|c| c.m == m).count());
    let detail = format!(
        "{}/{} passed (m=1: {}, m=2: {}, m=3: {})",
        results.len() - failed.len(),
        results.len(),
        counts[0],
        counts[1],
        counts[2]
    );
    if failed.is_empty() {
        Ok(detail)
    } else {
        Err(format!("{detail}; {}", failed.join("; ")))
    }
}

fn analytic_sweep(spec: &str, lambdas: Vec<f64>) -> Result<Vec<[f64; 3]>, String> {
    let sweep = SweepSpec {
        lambdas: lambdas.clone(),
        ms: vec![1, 2, 3],
        service: ServiceDistribution::parse(spec).map_err(|e| e.to_string())?,
        method: SweepMethod::Analytic,
        sim: SimSettings::default(),
    };
    let rows = run_sweep(&sweep).map_err(|e| e.to_string())?;
    Ok(rows
        .chunks(3)
        .map(|c| {
            assert!(c.iter().all(|r| r.method == EstimateMethod::Analytic));
            [c[0].mean_aoi, c[1].mean_aoi, c[2].mean_aoi]
        })
        .collect())
}

fn ordering(spec: &str, lambdas: Vec<f64>, holds: fn(&[f64; 3]) -> bool) -> Outcome {
    let values = analytic_sweep(spec, lambdas.clone())?;
    let bad: Vec<String> =
        lambdas.iter().zip(&values).filter(|(_, v)| !holds(v)).map(|(l, v)| format!("λ={l}: {v:?}")).collect();
    if bad.is_empty() {
        Ok(format!("{} grid points", lambdas.len()))
    } else {
        Err(bad.join("; "))
    }
}

fn deterministic_ordering() -> Outcome {
    let grid = (0..=30).map(|k| 0.5 + 0.25 * f64::from(k)).collect();
    ordering("det:1", grid, |[a1, a2, a3]| a2 < a3 && a3 < a1)
}

fn exponential_ordering() -> Outcome {
    let mut grid: Vec<f64> = [1e-3, 1e-2, 0.025].to_vec();
    grid.extend((1..=160).map(|k| 0.05 * f64::from(k)));
    ordering("exp:1", grid, |[a1, a2, a3]| a1 < a2 && a2 < a3)
}

fn saturation() -> Outcome {
    let mut detail = Vec::new();
    for spec in ["exp:1", "det:1"] {
        let gaps: Vec<f64> =
            [4.0, 8.0, 16.0, 32.0].iter().map(|&l| (analytic(l, 3, spec) - analytic(l, 2, spec)).abs()).collect();
        let decreasing = gaps.windows(2).all(|w| w[1] < w[0]);
        let line = format!("{spec} gaps {:.3e} {:.3e} {:.3e} {:.3e}", gaps[0], gaps[1], gaps[2], gaps[3]);
        if !decreasing || gaps[3] >= 0.01 {
            return Err(line);
        }
        detail.push(line);
    }
    Ok(detail.join("; "))
}

fn simulated(m: usize, spec: &str, horizon: f64, replications: usize) -> Result<ReplicationSummary, String> {
    let cfg = SimConfig::new(params(1.0, m, spec)).with_horizon(horizon).with_replications(replications);
    simulator::run(&cfg).map(|r| r.summary).map_err(|e| e.to_string())
}

fn larger_buffers_by_simulation() -> Outcome {
    let coverage = sigma_coverage(3.0);
    let mut detail = Vec::new();
    for (spec, ms) in [("det:1", &[2usize, 3, 4][..]), ("exp:1", &[1usize, 2, 3, 4][..])] {
        let runs = ms.iter().map(|&m| simulated(m, spec, 1e7, 16)).collect::<Result<Vec<_>, _>>()?;
        let mut line = spec.to_string();
        for (&m, r) in ms.iter().zip(&runs) {
            line.push_str(&format!(" α{m}={:.5}±{:.5}", r.mean, r.ci_halfwidth(coverage)));
        }
        let separated =
            runs.windows(2).all(|w| w[0].mean + w[0].ci_halfwidth(coverage) < w[1].mean - w[1].ci_halfwidth(coverage));
        if !separated {
            return Err(line);
        }
        detail.push(line);
    }
    Ok(detail.join("; "))
}

fn cycle_moments_check() -> Outcome {
    let pr = params(1.0, 3, "exp:1");
    let cfg = SimConfig::new(pr.clone()).with_horizon(2e6).with_replications(8).with_seed(88);
    let paths = simulator::run(&cfg).map_err(|e| e.to_string())?.paths;
    let diag = CycleDiagnostics::from_paths(&paths).map_err(|e| e.to_string())?;
    let chain = EmpiricalChain::from_paths(&paths).map_err(|e| e.to_string())?;
    let pi = stationary_distribution(&pr).map_err(|e| e.to_string())?;
    let exact = cycle_moments(&pr, &pi).map_err(|e| e.to_string())?;
    let z1 = (diag.mean_gap.mean - 4.0 / 3.0) / diag.mean_gap.std_error;
    let z2 = (diag.second_moment_gap.mean - 10.0 / 3.0) / diag.second_moment_gap.std_error;
    let pi_err = chain.pi.iter().map(|p| (p - 1.0 / 3.0).abs()).fold(0.0, f64::max);
    let detail = format!(
        "E⁰S₁ {:.5} (z {z1:.2}), E⁰S₁² {:.5} (z {z2:.2}), max |π̂−1/3| {pi_err:.1e}",
        diag.mean_gap.mean, diag.second_moment_gap.mean
    );
    let closed_form_agrees = (exact.mean - 4.0 / 3.0).abs() < 1e-12 && (exact.second_moment - 10.0 / 3.0).abs() < 1e-12;
    if z1.abs() <= 3.0 && z2.abs() <= 3.0 && pi_err <= 0.01 && closed_form_agrees {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn stale_departures() -> Outcome {
    let count = |m: usize| -> Result<(u64, u64), String> {
        let cfg = SimConfig::new(params(1.0, m, "exp:1")).with_horizon(1e6).with_replications(4).with_seed(9);
        let report = simulator::run(&cfg).map_err(|e| e.to_string())?;
        Ok((report.paths.iter().map(|p| p.stale_departures).sum(), report.departures()))
    };
    let (stale3, dep3) = count(3)?;
    let (stale2, dep2) = count(2)?;
    let detail = format!("m=3: {stale3}/{dep3} stale, m=2: {stale2}/{dep2} stale");
    if stale3 > 0 && stale2 == 0 && dep2 >= 1_000_000 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn main() -> ExitCode {
    let criteria = [
        Criterion {
            id: "AC1",
            title: "embedded chain",
            budget: Some(Duration::from_secs(1)),
            check: chain_correctness,
        },
        Criterion { id: "AC2", title: "step-1 oracle", budget: Some(Duration::from_secs(60)), check: step1_oracle },
        Criterion { id: "AC3", title: "validate grid", budget: Some(Duration::from_secs(600)), check: validate_grid },
        Criterion {
            id: "AC4",
            title: "deterministic α2 < α3 < α1",
            budget: Some(Duration::from_secs(1)),
            check: deterministic_ordering,
        },
        Criterion {
            id: "AC5",
            title: "exponential α1 < α2 < α3",
            budget: Some(Duration::from_secs(1)),
            check: exponential_ordering,
        },
        Criterion { id: "AC6", title: "saturation limit", budget: None, check: saturation },
        Criterion {
            id: "AC7",
            title: "larger buffers by simulation",
            budget: Some(Duration::from_secs(900)),
            check: larger_buffers_by_simulation,
        },
        Criterion { id: "AC8", title: "cycle moments", budget: None, check: cycle_moments_check },
        Criterion { id: "AC9", title: "stale departures", budget: None, check: stale_departures },
    ];
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = (c.check)();
        let elapsed = start.elapsed();
        let (pass, mut detail) = match outcome {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        let over_budget = c.budget.is_some_and(|b| elapsed > b);
        if over_budget {
            detail.push_str(&format!("; over the {:?} budget", c.budget.unwrap()));
        }
        let pass = pass && !over_budget;
        failed += usize::from(!pass);
        println!(
            "[{}] {} {}: {detail} ({:.2} s)",
            if pass { "PASS" } else { "FAIL" },
            c.id,
            c.title,
            elapsed.as_secs_f64()
        );
    }
    println!("{}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
