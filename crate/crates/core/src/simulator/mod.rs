//! Event-driven simulation of the `m`-cell LIFO pushout buffer.
//!
//! With one cell, an arrival to a busy server replaces the message in
//! service by default ([`SingleCellPolicy::Preempt`]); this is the system
//! whose mean AoI is `1/(λĜ(λ))`. [`SingleCellPolicy::Discard`] gives the
//! blocking variant instead. Larger buffers never interrupt service.
//!
//! There is only ever one pending arrival (renewal streams are generated one
//! step ahead) and at most one pending service completion, so the event
//! list is two numbers. On an exact tie the departure is handled first.
//!
//! AoI at time `t` is `t − F(t)` where `F(t)` is the latest arrival time
//! among messages whose service has completed by `t`. `F` only moves at
//! departures, so `∫α` is accumulated exactly, one trapezoid per
//! inter-departure segment.
//!
//! Replication `r` draws from `ChaCha8Rng::seed_from_u64(seed)` switched to
//! stream `r`, so replications are independent of each other and of the
//! order (or thread) in which they run.

mod buffer;
mod diagnostics;
mod path;

use std::io::Write;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::analytic::{AoiEstimate, EstimateMethod, SystemParams};
use crate::distributions::ServiceDistribution;
use crate::error::{AoiError, Result};
use crate::stats::{t_multiplier, Moments};

pub use buffer::{BufferState, Event, InService, Message, SingleCellPolicy, Transition};
pub use diagnostics::{cycle_diagnostics, empirical_chain, CycleDiagnostics, EmpiricalChain};
pub use path::{CycleStats, DepartureRecord, SamplePath, MAX_TRIPLE_BUFFER};

pub const DEFAULT_SEED: u64 = 0x5EED_A01D;
pub const DEFAULT_HORIZON: f64 = 1e6;
pub const DEFAULT_REPLICATIONS: usize = 8;
pub const DEFAULT_WARMUP_FRACTION: f64 = 0.05;
/// Coverage of the interval reported in simulated [`AoiEstimate`]s.
pub const DEFAULT_COVERAGE: f64 = 0.95;

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub params: SystemParams,
    /// `None` means Poisson arrivals at `params.lambda`.
    pub interarrival: Option<ServiceDistribution>,
    pub horizon: f64,
    pub warmup: f64,
    pub seed: u64,
    pub replications: usize,
    /// Only consulted when `m = 1`.
    pub single_cell: SingleCellPolicy,
}

impl SimConfig {
    pub fn new(params: SystemParams) -> Self {
        Self {
            params,
            interarrival: None,
            horizon: DEFAULT_HORIZON,
            warmup: DEFAULT_WARMUP_FRACTION * DEFAULT_HORIZON,
            seed: DEFAULT_SEED,
            replications: DEFAULT_REPLICATIONS,
            single_cell: SingleCellPolicy::default(),
        }
    }

    /// Sets the horizon and resets warmup to its default share of it.
    pub fn with_horizon(mut self, horizon: f64) -> Self {
        self.horizon = horizon;
        self.warmup = DEFAULT_WARMUP_FRACTION * horizon;
        self
    }

    pub fn with_warmup(mut self, warmup: f64) -> Self {
        self.warmup = warmup;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_replications(mut self, replications: usize) -> Self {
        self.replications = replications;
        self
    }

    pub fn with_single_cell_policy(mut self, policy: SingleCellPolicy) -> Self {
        self.single_cell = policy;
        self
    }

    pub fn with_interarrival(mut self, law: ServiceDistribution) -> Self {
        self.interarrival = Some(law);
        self
    }

    /// True unless a non-default interarrival law was configured. An
    /// explicit `exp:<λ>` still counts as Poisson.
    pub fn is_poisson(&self) -> bool {
        match &self.interarrival {
            None => true,
            Some(d) => d.name() == "exp" && (1.0 / d.mean() - self.params.lambda).abs() <= 1e-12 * self.params.lambda,
        }
    }

    pub fn interarrival_law(&self) -> Result<ServiceDistribution> {
        match &self.interarrival {
            Some(d) => Ok(d.clone()),
            None => ServiceDistribution::exponential(self.params.lambda),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        if !(self.horizon.is_finite() && self.horizon > 0.0) {
            return Err(AoiError::InvalidParameter(format!("horizon must be positive, got {}", self.horizon)));
        }
        if !(self.warmup >= 0.0 && self.warmup < self.horizon) {
            return Err(AoiError::InvalidParameter(format!(
                "warmup {} must lie in [0, horizon = {})",
                self.warmup, self.horizon
            )));
        }
        if self.replications == 0 {
            return Err(AoiError::InvalidParameter("replications must be >= 1".into()));
        }
        Ok(())
    }

    pub fn replication_rng(&self, replication: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(replication as u64);
        rng
    }
}

/// Run one replication, optionally writing one JSON line per measured
/// departure to `log`.
pub fn run_replication(config: &SimConfig, replication: usize, mut log: Option<&mut dyn Write>) -> Result<SamplePath> {
    config.validate()?;
    let m = config.params.m;
    let service = &config.params.service;
    let arrivals = config.interarrival_law()?;
    let mut rng = config.replication_rng(replication);

    let mut state = BufferState::with_policy(m, config.single_cell)?;
    let mut next_arrival = arrivals.sample(&mut rng);
    let mut next_id = 0u64;
    let mut freshest = f64::NEG_INFINITY;

    let mut cycles = CycleStats::new(m);
    let mut path = SamplePath {
        integrated_aoi: 0.0,
        measured_time: 0.0,
        measure_start: f64::NAN,
        departures: 0,
        arrivals: 0,
        dropped: 0,
        stale_departures: 0,
        freshest_served_arrival: f64::NEG_INFINITY,
        cycles: CycleStats::new(0),
    };
    let mut measuring = false;
    let mut last_epoch = 0.0;
    // (time, K) of the previous measured departure, and K before that
    let mut prev: Option<(f64, usize)> = None;
    let mut prev2: Option<usize> = None;

    loop {
        let departure = state.next_completion().filter(|&d| d <= next_arrival);
        let t = departure.unwrap_or(next_arrival);
        if t > config.horizon {
            break;
        }

        if departure.is_some() {
            let Transition::Departed { message, .. } = state.apply(Event::Departure(t))? else {
                return Err(AoiError::Protocol("departure did not complete a service".into()));
            };
            if measuring {
                path.integrated_aoi += path::sawtooth_area(last_epoch, t, freshest);
                last_epoch = t;
            }
            let stale = message.arrival < freshest;
            freshest = freshest.max(message.arrival);
            if !measuring && t >= config.warmup {
                measuring = true;
                path.measure_start = t;
                last_epoch = t;
            }
            if measuring {
                let k = state.occupancy();
                let aoi = t - freshest;
                path.departures += 1;
                path.stale_departures += u64::from(stale);
                cycles.occupancy[k] += 1;
                cycles.aoi_given_k[k].push(aoi);
                if let Some((t_prev, k_prev)) = prev {
                    let gap = t - t_prev;
                    cycles.transitions[k_prev * m + k] += 1;
                    cycles.gap_given_k[k_prev].push(gap);
                    cycles.gap_sq_given_k[k_prev].push(gap * gap);
                    if let (Some(k2), true) = (prev2, m <= MAX_TRIPLE_BUFFER) {
                        cycles.aoi_given_triple[(k2 * m + k_prev) * m + k].push(aoi);
                    }
                    prev2 = Some(k_prev);
                }
                prev = Some((t, k));
                if let Some(w) = log.as_deref_mut() {
                    let rec = DepartureRecord { time: t, served_arrival: message.arrival, k_after: k, aoi };
                    serde_json::to_writer(&mut *w, &rec).map_err(std::io::Error::from)?;
                    w.write_all(b"\n")?;
                }
            }
        } else {
            let msg = Message { id: next_id, arrival: t, service: service.sample(&mut rng) };
            next_id += 1;
            next_arrival = t + arrivals.sample(&mut rng);
            let outcome = state.apply(Event::Arrival(msg))?;
            if measuring {
                path.arrivals += 1;
                if matches!(outcome, Transition::PushedOut(_) | Transition::Discarded(_) | Transition::Preempted(_)) {
                    path.dropped += 1;
                }
            }
        }
        debug_assert!(state.check_invariants().is_ok());
    }

    if !measuring {
        return Err(AoiError::NoData(format!(
            "no departure in [warmup = {}, horizon = {}]; increase the horizon",
            config.warmup, config.horizon
        )));
    }
    path.integrated_aoi += path::sawtooth_area(last_epoch, config.horizon, freshest);
    path.measured_time = config.horizon - path.measure_start;
    if !(path.measured_time > 0.0) {
        return Err(AoiError::NoData("measurement window has zero length".into()));
    }
    path.freshest_served_arrival = freshest;
    path.cycles = cycles;
    Ok(path)
}

/// Mean and standard error of independent replication values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReplicationSummary {
    pub mean: f64,
    pub std_error: f64,
    pub replications: usize,
}

impl ReplicationSummary {
    /// Summation runs over the sorted values, so the result does not depend
    /// on replication order.
    pub fn from_values(values: &[f64]) -> Self {
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let m: Moments = sorted.iter().copied().collect();
        let std_error = if sorted.len() < 2 { f64::INFINITY } else { m.std_error() };
        Self { mean: m.mean(), std_error, replications: sorted.len() }
    }

    /// Student-t half-width at the given two-sided coverage.
    pub fn ci_halfwidth(&self, coverage: f64) -> f64 {
        if self.replications < 2 {
            return f64::INFINITY;
        }
        t_multiplier(coverage, self.replications - 1) * self.std_error
    }

    pub fn contains(&self, value: f64, coverage: f64) -> bool {
        (value - self.mean).abs() <= self.ci_halfwidth(coverage)
    }
}

#[derive(Debug, Clone)]
pub struct SimReport {
    pub config: SimConfig,
    pub paths: Vec<SamplePath>,
    pub summary: ReplicationSummary,
    pub estimate: AoiEstimate,
}

impl SimReport {
    pub fn departures(&self) -> u64 {
        self.paths.iter().map(|p| p.departures).sum()
    }

    pub fn drop_fraction(&self) -> f64 {
        let arrivals: u64 = self.paths.iter().map(|p| p.arrivals).sum();
        let dropped: u64 = self.paths.iter().map(|p| p.dropped).sum();
        if arrivals == 0 {
            0.0
        } else {
            dropped as f64 / arrivals as f64
        }
    }

    pub fn stale_departures(&self) -> u64 {
        self.paths.iter().map(|p| p.stale_departures).sum()
    }
}

/// Pool replication paths into a mean-AoI estimate.
pub fn pool(config: &SimConfig, paths: Vec<SamplePath>) -> SimReport {
    let means: Vec<f64> = paths.iter().map(SamplePath::mean_aoi).collect();
    let summary = ReplicationSummary::from_values(&means);
    let estimate = AoiEstimate {
        mean_aoi: summary.mean,
        method: EstimateMethod::Simulated,
        ci_halfwidth: summary.ci_halfwidth(DEFAULT_COVERAGE),
        params: config.params.clone(),
    };
    SimReport { config: config.clone(), paths, summary, estimate }
}

/// Run every replication (in parallel) and pool them.
pub fn run(config: &SimConfig) -> Result<SimReport> {
    config.validate()?;
    let paths = (0..config.replications)
        .into_par_iter()
        .map(|r| run_replication(config, r, None))
        .collect::<Result<Vec<_>>>()?;
    Ok(pool(config, paths))
}
