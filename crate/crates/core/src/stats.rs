//! Small statistics helpers shared by the simulator and the test oracles.

use statrs::distribution::{ContinuousCDF, Normal, StudentsT};

/// Two-sided coverage of a normal ±`k`σ interval, e.g. 0.9973 for k = 3.
pub fn sigma_coverage(k: f64) -> f64 {
    let n = Normal::new(0.0, 1.0).expect("standard normal");
    2.0 * n.cdf(k) - 1.0
}

/// Multiplier `t` such that `mean ± t·se` has two-sided `coverage` under a
/// Student-t law with `dof` degrees of freedom.
pub fn t_multiplier(coverage: f64, dof: usize) -> f64 {
    assert!(coverage > 0.0 && coverage < 1.0, "coverage must be in (0,1)");
    assert!(dof >= 1, "need at least one degree of freedom");
    let t = StudentsT::new(0.0, 1.0, dof as f64).expect("valid student-t");
    t.inverse_cdf(0.5 + coverage / 2.0)
}

/// Running mean/variance (Welford).
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Moments {
    n: u64,
    mean: f64,
    m2: f64,
}

impl Moments {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }

    pub fn count(&self) -> u64 {
        self.n
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Unbiased sample variance; zero for fewer than two observations.
    pub fn variance(&self) -> f64 {
        if self.n < 2 {
            0.0
        } else {
            self.m2 / (self.n - 1) as f64
        }
    }

    pub fn std_error(&self) -> f64 {
        if self.n == 0 {
            return f64::INFINITY;
        }
        (self.variance() / self.n as f64).sqrt()
    }
}

impl FromIterator<f64> for Moments {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut m = Moments::new();
        for x in iter {
            m.push(x);
        }
        m
    }
}
