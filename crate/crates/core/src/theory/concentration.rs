use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::risk::{ArmDistribution, RiskTolerance};
use crate::rng::keyed_rng;
use crate::stats::SampleStats;

/// Tail bound `2 exp(−α t δ² / (2 + λ)²)` on the sample mean-variance of
/// `t` i.i.d. observations.
pub fn concentration_bound(t: u64, delta: f64, alpha: f64, risk: RiskTolerance) -> Result<f64> {
    let scale = 2.0 + risk.lambda();
    if t == 0 {
        return Err(Error::InvalidParameter(
            "sample size must be positive".into(),
        ));
    }
    if !(delta > 0.0 && delta <= scale) {
        return Err(Error::InvalidParameter(format!(
            "deviation must lie in (0, {scale}], got {delta}"
        )));
    }
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "alpha must be positive, got {alpha}"
        )));
    }
    Ok(2.0 * (-alpha * t as f64 * delta * delta / (scale * scale)).exp())
}

/// Empirical frequencies of `M̄V_t − MV > δ` and `M̄V_t − MV < −δ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TailEstimate {
    pub upper_freq: f64,
    pub lower_freq: f64,
    pub upper_sem: f64,
    pub lower_sem: f64,
}

impl TailEstimate {
    /// The larger of the two binomial standard errors.
    pub fn sem(&self) -> f64 {
        self.upper_sem.max(self.lower_sem)
    }
}

pub fn empirical_tail(
    dist: &ArmDistribution,
    risk: RiskTolerance,
    t: u64,
    delta: f64,
    runs: usize,
    seed: u64,
) -> Result<TailEstimate> {
    if dist.support().is_none() {
        return Err(Error::UnsupportedFamily(dist.family()));
    }
    if t == 0 || runs == 0 {
        return Err(Error::InvalidParameter(
            "need t >= 1 and at least one run".into(),
        ));
    }
    let truth = dist.mv(risk);
    let (upper, lower) = (0..runs)
        .into_par_iter()
        .map(|i| {
            let mut rng = keyed_rng(seed, 0, i as u64);
            let mut stats = SampleStats::new();
            for _ in 0..t {
                stats.push(dist.sample(&mut rng));
            }
            let dev = stats.sample_mv(risk).expect("t >= 1 samples") - truth;
            (u64::from(dev > delta), u64::from(dev < -delta))
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    let m = runs as f64;
    let upper_freq = upper as f64 / m;
    let lower_freq = lower as f64 / m;
    Ok(TailEstimate {
        upper_freq,
        lower_freq,
        upper_sem: (upper_freq * (1.0 - upper_freq) / m).sqrt(),
        lower_sem: (lower_freq * (1.0 - lower_freq) / m).sqrt(),
    })
}
