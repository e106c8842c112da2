//! Streaming sample statistics with the biased (divisor `n`) variance.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::risk::RiskTolerance;

/// Running count, mean and sum of squared deviations of a reward stream.
///
/// Updates use Welford's recurrence. The variance reported by
/// [`SampleStats::variance`] divides by the count, not `count - 1`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct SampleStats {
    count: u64,
    mean: f64,
    m2: f64,
}

impl SampleStats {
    pub fn new() -> Self {
        Self::default()
    }

    /// Batch construction; equivalent to pushing every value in order.
    pub fn from_slice(values: &[f64]) -> Self {
        let mut stats = Self::new();
        for &x in values {
            stats.push(x);
        }
        stats
    }

    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
        // rounding can leave a tiny negative residue when all samples agree
        if self.m2 < 0.0 {
            self.m2 = 0.0;
        }
    }

    /// Combines two disjoint sample sets (Chan et al. pairwise update).
    pub fn merge(&mut self, other: &SampleStats) {
        if other.count == 0 {
            return;
        }
        if self.count == 0 {
            *self = *other;
            return;
        }
        let n_a = self.count as f64;
        let n_b = other.count as f64;
        let n = n_a + n_b;
        let delta = other.mean - self.mean;
        self.mean += delta * n_b / n;
        self.m2 += other.m2 + delta * delta * n_a * n_b / n;
        self.count += other.count;
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    /// Sample mean; zero when empty.
    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn m2(&self) -> f64 {
        self.m2
    }

    /// Biased sample variance `m2 / count`; zero when empty.
    pub fn variance(&self) -> f64 {
        if self.count == 0 {
            0.0
        } else {
            self.m2 / self.count as f64
        }
    }

    /// Sample mean-variance `σ̄² − λ μ̄`.
    pub fn sample_mv(&self, risk: RiskTolerance) -> Result<f64> {
        if self.count == 0 {
            return Err(Error::NoData);
        }
        Ok(self.variance() - risk.lambda() * self.mean)
    }
}
