use super::{run, ReplicationSummary, SamplePath, SimConfig};
use crate::error::{AoiError, Result};

/// Fewest pooled departures accepted for chain and cycle estimates.
pub const MIN_DEPARTURES: u64 = 10_000;

/// Transition and occupation frequencies of `K` at departures.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalChain {
    pub p: Vec<Vec<f64>>,
    pub pi: Vec<f64>,
    pub departures: u64,
}

impl EmpiricalChain {
    pub fn from_paths(paths: &[SamplePath]) -> Result<Self> {
        let m = paths.first().map(|p| p.cycles.states()).unwrap_or(0);
        let departures: u64 = paths.iter().map(|p| p.departures).sum();
        if m == 0 || departures < MIN_DEPARTURES {
            return Err(AoiError::NoData(format!("{departures} departures recorded, need at least {MIN_DEPARTURES}")));
        }
        let mut counts = vec![0u64; m * m];
        let mut visits = vec![0u64; m];
        for p in paths {
            for (c, x) in counts.iter_mut().zip(&p.cycles.transitions) {
                *c += x;
            }
            for (v, x) in visits.iter_mut().zip(&p.cycles.occupancy) {
                *v += x;
            }
        }
        let p = (0..m)
            .map(|i| {
                let row = &counts[i * m..(i + 1) * m];
                let total: u64 = row.iter().sum();
                row.iter().map(|&c| if total == 0 { 0.0 } else { c as f64 / total as f64 }).collect()
            })
            .collect();
        let total: u64 = visits.iter().sum();
        let pi = visits.iter().map(|&v| v as f64 / total as f64).collect();
        Ok(Self { p, pi, departures })
    }
}

/// Simulate and tabulate the embedded chain of `config`'s buffer.
pub fn empirical_chain(config: &SimConfig) -> Result<EmpiricalChain> {
    EmpiricalChain::from_paths(&run(config)?.paths)
}

/// Inter-departure moments and post-departure AoI, each summarised across
/// replications so the standard errors account for serial correlation
/// within a run.
#[derive(Debug, Clone, PartialEq)]
pub struct CycleDiagnostics {
    pub mean_gap: ReplicationSummary,
    pub second_moment_gap: ReplicationSummary,
    /// `E(gap | K at its start = k)`
    pub mean_gap_given_k: Vec<ReplicationSummary>,
    /// `E(AoI just after a departure | K after it = k)`
    pub aoi_given_k: Vec<ReplicationSummary>,
    /// Same, keyed by the last three `K` values; empty for large buffers.
    pub aoi_given_triple: Vec<ReplicationSummary>,
    pub departures: u64,
}

impl CycleDiagnostics {
    pub fn from_paths(paths: &[SamplePath]) -> Result<Self> {
        let departures: u64 = paths.iter().map(|p| p.departures).sum();
        if paths.is_empty() || departures < MIN_DEPARTURES {
            return Err(AoiError::NoData(format!("{departures} departures recorded, need at least {MIN_DEPARTURES}")));
        }
        let m = paths[0].cycles.states();
        let summarise = |values: Vec<f64>| {
            let v: Vec<f64> = values.into_iter().filter(|x| x.is_finite()).collect();
            ReplicationSummary::from_values(&v)
        };
        let per_state = |pick: &dyn Fn(&SamplePath, usize) -> (u64, f64), n: usize| {
            (0..n)
                .map(|k| {
                    summarise(
                        paths
                            .iter()
                            .map(|p| pick(p, k))
                            .map(|(c, mean)| if c == 0 { f64::NAN } else { mean })
                            .collect(),
                    )
                })
                .collect::<Vec<_>>()
        };
        let triples = paths[0].cycles.aoi_given_triple.len();
        Ok(Self {
            mean_gap: summarise(paths.iter().map(|p| p.cycles.gap_moments().0).collect()),
            second_moment_gap: summarise(paths.iter().map(|p| p.cycles.gap_moments().1).collect()),
            mean_gap_given_k: per_state(&|p, k| (p.cycles.gap_given_k[k].count(), p.cycles.gap_given_k[k].mean()), m),
            aoi_given_k: per_state(&|p, k| (p.cycles.aoi_given_k[k].count(), p.cycles.aoi_given_k[k].mean()), m),
            aoi_given_triple: per_state(
                &|p, k| {
                    let s = &p.cycles.aoi_given_triple[k];
                    (s.count(), s.mean())
                },
                triples,
            ),
            departures,
        })
    }

    pub fn triple(&self, m: usize, i: usize, j: usize, l: usize) -> Option<&ReplicationSummary> {
        self.aoi_given_triple.get((i * m + j) * m + l)
    }
}

pub fn cycle_diagnostics(config: &SimConfig) -> Result<CycleDiagnostics> {
    CycleDiagnostics::from_paths(&run(config)?.paths)
}
