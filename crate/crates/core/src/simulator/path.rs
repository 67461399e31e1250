use serde::Serialize;

use crate::stats::Moments;

/// Largest buffer for which per-triple `(K₋₂, K₋₁, K₀)` AoI statistics are
/// kept (`m³` accumulators).
pub const MAX_TRIPLE_BUFFER: usize = 4;

/// Statistics of the embedded departure chain over the measurement window.
#[derive(Debug, Clone, PartialEq)]
pub struct CycleStats {
    m: usize,
    /// Visits of `K = k` at departures.
    pub occupancy: Vec<u64>,
    /// `transitions[i * m + j]` counts consecutive departures with `K: i → j`.
    pub transitions: Vec<u64>,
    /// Gap to the next departure, keyed by `K` at the earlier one.
    pub gap_given_k: Vec<Moments>,
    /// Squared gap, same keying.
    pub gap_sq_given_k: Vec<Moments>,
    /// AoI just after a departure, keyed by `K` after it.
    pub aoi_given_k: Vec<Moments>,
    /// AoI just after a departure, keyed by the last three `K` values
    /// (`[i * m² + j * m + l]`); empty when `m > MAX_TRIPLE_BUFFER`.
    pub aoi_given_triple: Vec<Moments>,
}

impl CycleStats {
    pub fn new(m: usize) -> Self {
        let triples = if m <= MAX_TRIPLE_BUFFER { m * m * m } else { 0 };
        Self {
            m,
            occupancy: vec![0; m],
            transitions: vec![0; m * m],
            gap_given_k: vec![Moments::new(); m],
            gap_sq_given_k: vec![Moments::new(); m],
            aoi_given_k: vec![Moments::new(); m],
            aoi_given_triple: vec![Moments::new(); triples],
        }
    }

    pub fn states(&self) -> usize {
        self.m
    }

    pub fn transition_count(&self, i: usize, j: usize) -> u64 {
        self.transitions[i * self.m + j]
    }

    pub fn triple(&self, i: usize, j: usize, l: usize) -> Option<&Moments> {
        self.aoi_given_triple.get((i * self.m + j) * self.m + l)
    }

    /// Overall gap moments `(E gap, E gap²)` over every recorded cycle.
    pub fn gap_moments(&self) -> (f64, f64) {
        let n: u64 = self.gap_given_k.iter().map(Moments::count).sum();
        if n == 0 {
            return (f64::NAN, f64::NAN);
        }
        let s1: f64 = self.gap_given_k.iter().map(|m| m.mean() * m.count() as f64).sum();
        let s2: f64 = self.gap_sq_given_k.iter().map(|m| m.mean() * m.count() as f64).sum();
        (s1 / n as f64, s2 / n as f64)
    }
}

/// One replication's measurements.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplePath {
    /// `∫ α(t) dt` over the measurement window.
    pub integrated_aoi: f64,
    pub measured_time: f64,
    pub measure_start: f64,
    /// Successful departures inside the window.
    pub departures: u64,
    pub arrivals: u64,
    /// Messages lost to pushout, preemption or a busy single cell, inside
    /// the window.
    pub dropped: u64,
    /// Departures whose message is older than the freshest one already served.
    pub stale_departures: u64,
    /// Arrival time of the freshest served message at the end of the run.
    pub freshest_served_arrival: f64,
    pub cycles: CycleStats,
}

impl SamplePath {
    pub fn mean_aoi(&self) -> f64 {
        self.integrated_aoi / self.measured_time
    }

    pub fn drop_fraction(&self) -> f64 {
        if self.arrivals == 0 {
            0.0
        } else {
            self.dropped as f64 / self.arrivals as f64
        }
    }

    pub fn stale_fraction(&self) -> f64 {
        if self.departures == 0 {
            0.0
        } else {
            self.stale_departures as f64 / self.departures as f64
        }
    }
}

/// One line of the optional departure log.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DepartureRecord {
    pub time: f64,
    pub served_arrival: f64,
    pub k_after: usize,
    pub aoi: f64,
}

/// `∫_{t1}^{t2} (t − f) dt`
pub(crate) fn sawtooth_area(t1: f64, t2: f64, f: f64) -> f64 {
    0.5 * (t2 - t1) * ((t1 - f) + (t2 - f))
}
