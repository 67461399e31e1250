use std::fs;
use std::io::{BufWriter, Write};

use anyhow::{bail, Context, Result};
use aoi_core::analytic::SolverRegistry;
use aoi_core::simulator::{self, SimConfig};
use aoi_core::{ServiceDistribution, SystemParams};

use crate::args::{AnalyticArgs, Cli, Command, OutputArgs, OutputFormat, SimulateArgs, SweepArgs, ValidateArgs};
use crate::format::{header, sig10};
use crate::grid::{parse_lambda_grid, parse_m_list};
use crate::plot::render_svg;
use crate::sweep::{csv_row, run_sweep, to_csv, SimSettings, SweepRow, SweepSpec, CSV_HEADER};
use crate::validate::{default_grid, render_csv, render_report, run_validation, ValidationCase, ValidationSettings};

/// Whether the command's own check succeeded (only `validate` can fail
/// without an error).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Outcome {
    pub success: bool,
}

pub fn execute(cli: &Cli, stdout: &mut dyn Write) -> Result<Outcome> {
    match &cli.command {
        Command::Analytic(a) => cmd_analytic(a, stdout),
        Command::Simulate(a) => cmd_simulate(a, stdout),
        Command::Sweep(a) => cmd_sweep(a, stdout),
        Command::Validate(a) => cmd_validate(a, stdout),
    }
}

fn emit(output: &OutputArgs, text: &str, stdout: &mut dyn Write) -> Result<()> {
    match &output.out {
        Some(path) => fs::write(path, text).with_context(|| format!("cannot write {}", path.display())),
        None => stdout.write_all(text.as_bytes()).context("cannot write to stdout"),
    }
}

fn single_row_csv(row: &SweepRow) -> String {
    format!("{CSV_HEADER}\n{}\n", csv_row(row))
}

pub fn cmd_analytic(args: &AnalyticArgs, stdout: &mut dyn Write) -> Result<Outcome> {
    let service = ServiceDistribution::parse(&args.service)?;
    let params = SystemParams::new(args.lambda, args.m, service)?;
    let registry = SolverRegistry::builtin();
    let solver = match &args.solver {
        Some(name) => registry.get(name)?,
        None => registry.for_buffer(args.m)?,
    };
    if solver.buffer_size() != args.m {
        bail!("solver `{}` handles m = {}, not m = {}", solver.name(), solver.buffer_size(), args.m);
    }
    let est = solver.solve(&params)?;

    let mut text = header(
        "analytic",
        &[
            ("m", args.m.to_string()),
            ("lambda", args.lambda.to_string()),
            ("service", params.service.spec()),
            ("solver", solver.name().to_string()),
        ],
    );
    let row =
        SweepRow { lambda: args.lambda, m: args.m, method: est.method, mean_aoi: est.mean_aoi, ci_halfwidth: 0.0 };
    match args.output.format {
        OutputFormat::Text => text.push_str(&format!("mean_aoi = {}\n", sig10(est.mean_aoi))),
        OutputFormat::Csv => text.push_str(&single_row_csv(&row)),
    }
    emit(&args.output, &text, stdout)?;
    Ok(Outcome { success: true })
}

pub fn cmd_simulate(args: &SimulateArgs, stdout: &mut dyn Write) -> Result<Outcome> {
    let service = ServiceDistribution::parse(&args.service)?;
    let params = SystemParams::new(args.lambda, args.m, service)?;
    let settings = SimSettings {
        horizon: args.sim.horizon,
        warmup: args.sim.warmup,
        seed: args.sim.seed,
        replications: args.sim.replications,
    };
    let mut config: SimConfig = settings.config(params);
    if let Some(spec) = &args.arrivals {
        config = config.with_interarrival(ServiceDistribution::parse(spec)?);
    }
    config.validate()?;
    let report = simulator::run(&config)?;
    if let Some(path) = &args.event_log {
        let file = fs::File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
        let mut w = BufWriter::new(file);
        simulator::run_replication(&config, 0, Some(&mut w))?;
        w.flush()?;
    }

    let arrivals = config.interarrival_law()?.spec();
    let mut fields = vec![
        ("m", args.m.to_string()),
        ("lambda", args.lambda.to_string()),
        ("service", config.params.service.spec()),
        ("arrivals", arrivals),
        ("horizon", config.horizon.to_string()),
        ("warmup", config.warmup.to_string()),
        ("seed", config.seed.to_string()),
        ("replications", config.replications.to_string()),
        ("coverage", simulator::DEFAULT_COVERAGE.to_string()),
    ];
    if !config.is_poisson() {
        fields.push(("note", "non-Poisson arrivals: closed forms do not apply".to_string()));
    }
    let mut text = header("simulate", &fields);
    let est = &report.estimate;
    match args.output.format {
        OutputFormat::Text => {
            text.push_str(&format!("mean_aoi = {}\n", sig10(est.mean_aoi)));
            text.push_str(&format!("ci_halfwidth = {}\n", sig10(est.ci_halfwidth)));
            text.push_str(&format!("std_error = {}\n", sig10(report.summary.std_error)));
            text.push_str(&format!("departures = {}\n", report.departures()));
            text.push_str(&format!("drop_fraction = {}\n", sig10(report.drop_fraction())));
            text.push_str(&format!("stale_departures = {}\n", report.stale_departures()));
        }
        OutputFormat::Csv => {
            let row = SweepRow {
                lambda: args.lambda,
                m: args.m,
                method: est.method,
                mean_aoi: est.mean_aoi,
                ci_halfwidth: est.ci_halfwidth,
            };
            text.push_str(&single_row_csv(&row));
        }
    }
    emit(&args.output, &text, stdout)?;
    Ok(Outcome { success: true })
}

pub fn cmd_sweep(args: &SweepArgs, stdout: &mut dyn Write) -> Result<Outcome> {
    let spec = SweepSpec {
        lambdas: parse_lambda_grid(&args.lambda)?,
        ms: parse_m_list(&args.m)?,
        service: ServiceDistribution::parse(&args.service)?,
        method: args.method,
        sim: SimSettings {
            horizon: args.sim.horizon,
            warmup: args.sim.warmup,
            seed: args.sim.seed,
            replications: args.sim.replications,
        },
    };
    let rows = run_sweep(&spec)?;

    let ms: Vec<String> = spec.ms.iter().map(usize::to_string).collect();
    let mut fields = vec![
        ("lambda", args.lambda.clone()),
        ("m", ms.join(",")),
        ("service", spec.service.spec()),
        ("method", format!("{:?}", args.method).to_lowercase()),
    ];
    if args.method != crate::args::SweepMethod::Analytic {
        fields.extend([
            ("horizon", spec.sim.horizon.to_string()),
            ("warmup", spec.sim.resolved_warmup().to_string()),
            ("seed", spec.sim.seed.to_string()),
            ("replications", spec.sim.replications.to_string()),
            ("coverage", simulator::DEFAULT_COVERAGE.to_string()),
        ]);
    }
    let mut text = header("sweep", &fields);
    match args.output.format {
        OutputFormat::Csv => text.push_str(&to_csv(&rows)),
        OutputFormat::Text => {
            for r in &rows {
                text.push_str(&format!(
                    "lambda={} m={} {} mean_aoi={} ci_halfwidth={}\n",
                    r.lambda,
                    r.m,
                    r.method,
                    sig10(r.mean_aoi),
                    sig10(r.ci_halfwidth)
                ));
            }
        }
    }
    emit(&args.output, &text, stdout)?;
    if let Some(path) = &args.plot {
        let title = format!("Mean AoI, service {}", spec.service);
        fs::write(path, render_svg(&rows, &title)).with_context(|| format!("cannot write {}", path.display()))?;
    }
    Ok(Outcome { success: true })
}

fn validation_cases(args: &ValidateArgs) -> Result<Vec<ValidationCase>> {
    let mut cases = match (&args.lambda, &args.service) {
        (None, None) => default_grid(),
        (lambda, service) => {
            let lambdas = match lambda {
                Some(l) => parse_lambda_grid(l)?,
                None => vec![0.5, 1.0, 4.0],
            };
            let services = service.as_deref().unwrap_or("det:1,exp:1");
            let ms = match &args.m {
                Some(m) => parse_m_list(m)?,
                None => vec![1, 2, 3],
            };
            let mut cases = Vec::new();
            for &m in &ms {
                for s in services.split(',').filter(|s| !s.trim().is_empty()) {
                    for &l in &lambdas {
                        cases.push(ValidationCase::new(m, l, s)?);
                    }
                }
            }
            cases
        }
    };
    if let Some(m) = &args.m {
        let keep = parse_m_list(m)?;
        cases.retain(|c| keep.contains(&c.m));
    }
    if cases.is_empty() {
        bail!("validation grid is empty");
    }
    if let Some(c) = cases.iter().find(|c| SolverRegistry::builtin().for_buffer(c.m).is_err()) {
        bail!("no closed form to validate for m = {}", c.m);
    }
    Ok(cases)
}

pub fn cmd_validate(args: &ValidateArgs, stdout: &mut dyn Write) -> Result<Outcome> {
    let cases = validation_cases(args)?;
    let settings = ValidationSettings {
        sim: SimSettings {
            horizon: args.horizon,
            warmup: args.warmup,
            seed: args.seed,
            replications: args.replications,
        },
        sigma: args.sigma,
    };
    let results = run_validation(&cases, &settings)?;
    let text = match args.output.format {
        OutputFormat::Text => render_report(&results, &settings),
        OutputFormat::Csv => render_csv(&results, &settings),
    };
    emit(&args.output, &text, stdout)?;
    Ok(Outcome { success: results.iter().all(|r| r.pass) })
}
