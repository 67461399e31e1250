use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};

use super::{mean_aoi_m1, mean_aoi_m2, mean_aoi_m3, AoiEstimate, SystemParams};
use crate::error::{AoiError, Result};

/// An exact mean-AoI method for one buffer size.
pub trait MeanAoiSolver: Send + Sync {
    fn name(&self) -> &'static str;
    fn buffer_size(&self) -> usize;
    fn solve(&self, params: &SystemParams) -> Result<AoiEstimate>;
}

/// `1/(λĜ(λ))`
#[derive(Debug, Clone, Copy, Default)]
pub struct SingleCell;

impl MeanAoiSolver for SingleCell {
    fn name(&self) -> &'static str {
        "single-cell"
    }
    fn buffer_size(&self) -> usize {
        1
    }
    fn solve(&self, params: &SystemParams) -> Result<AoiEstimate> {
        mean_aoi_m1(params)
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct TwoCell;

impl MeanAoiSolver for TwoCell {
    fn name(&self) -> &'static str {
        "two-cell"
    }
    fn buffer_size(&self) -> usize {
        2
    }
    fn solve(&self, params: &SystemParams) -> Result<AoiEstimate> {
        mean_aoi_m2(params)
    }
}

/// Palm inversion over the departure chain.
#[derive(Debug, Clone, Copy, Default)]
pub struct ThreeCellPalm;

impl MeanAoiSolver for ThreeCellPalm {
    fn name(&self) -> &'static str {
        "three-cell-palm"
    }
    fn buffer_size(&self) -> usize {
        3
    }
    fn solve(&self, params: &SystemParams) -> Result<AoiEstimate> {
        mean_aoi_m3(params)
    }
}

/// Named analytic solvers, one default per buffer size.
#[derive(Clone, Default)]
pub struct SolverRegistry {
    by_name: BTreeMap<&'static str, Arc<dyn MeanAoiSolver>>,
    by_size: BTreeMap<usize, &'static str>,
}

impl SolverRegistry {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn builtin() -> &'static SolverRegistry {
        static BUILTIN: OnceLock<SolverRegistry> = OnceLock::new();
        BUILTIN.get_or_init(|| {
            let mut r = SolverRegistry::empty();
            r.register(Arc::new(SingleCell));
            r.register(Arc::new(TwoCell));
            r.register(Arc::new(ThreeCellPalm));
            r
        })
    }

    /// Adds `solver` and makes it the default for its buffer size.
    pub fn register(&mut self, solver: Arc<dyn MeanAoiSolver>) {
        self.by_size.insert(solver.buffer_size(), solver.name());
        self.by_name.insert(solver.name(), solver);
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.by_name.keys().copied()
    }

    pub fn supported_sizes(&self) -> impl Iterator<Item = usize> + '_ {
        self.by_size.keys().copied()
    }

    pub fn get(&self, name: &str) -> Result<&dyn MeanAoiSolver> {
        self.by_name.get(name).map(|s| s.as_ref()).ok_or_else(|| {
            let known: Vec<_> = self.names().collect();
            AoiError::InvalidParameter(format!("unknown solver `{name}` (known: {})", known.join(", ")))
        })
    }

    pub fn for_buffer(&self, m: usize) -> Result<&dyn MeanAoiSolver> {
        match self.by_size.get(&m) {
            Some(name) => self.get(name),
            None => Err(AoiError::Unsupported(format!(
                "no closed form for m = {m}; use the simulator (`simulate`) instead"
            ))),
        }
    }

    pub fn solve(&self, params: &SystemParams) -> Result<AoiEstimate> {
        self.for_buffer(params.m)?.solve(params)
    }
}
