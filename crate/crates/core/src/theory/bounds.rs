//! Closed-form regret upper bounds of MV-LCB, CB-AE and MV-FL.
//!
//! Logs are natural except where a base-2 log is explicit. Each `∧ T` clamp
//! applies to the whole count factor it closes.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::policy::{DEFAULT_BIG_C, DEFAULT_C, DEFAULT_GAMMAHAT0};
use crate::risk::{Environment, GapProfile, RiskTolerance};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundInputs {
    pub gaps: GapProfile,
    pub horizon: u64,
    pub risk: RiskTolerance,
    /// Sub-Gaussian rate `α` of the mean-variance tail bound.
    pub alpha: f64,
    /// MV-LCB exploration constant.
    pub c: f64,
    /// CB-AE step-length constant.
    pub big_c: f64,
    pub gammahat0: f64,
}

/// A bound value, and whether the supplied constants satisfy the hypotheses
/// under which it is proven.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundValue {
    pub value: f64,
    pub theorem_grade: bool,
}

impl BoundInputs {
    pub fn new(gaps: GapProfile, horizon: u64, risk: RiskTolerance, alpha: f64) -> Self {
        Self {
            gaps,
            horizon,
            risk,
            alpha,
            c: DEFAULT_C,
            big_c: DEFAULT_BIG_C,
            gammahat0: DEFAULT_GAMMAHAT0,
        }
    }

    pub fn from_env(env: &Environment, horizon: u64, alpha: f64) -> Self {
        Self::new(env.gaps(), horizon, env.risk(), alpha)
    }

    pub fn with_c(mut self, c: f64) -> Self {
        self.c = c;
        self
    }

    pub fn with_big_c(mut self, big_c: f64) -> Self {
        self.big_c = big_c;
        self
    }

    pub fn with_gammahat0(mut self, gammahat0: f64) -> Self {
        self.gammahat0 = gammahat0;
        self
    }

    pub fn num_arms(&self) -> usize {
        self.gaps.num_arms()
    }

    /// `min{n : Γ̂₀ 2^(−n) ≤ Γ_k}`.
    pub fn n_k(&self, arm: usize) -> u32 {
        let target = self.gaps.gamma[arm];
        let mut n = 0u32;
        let mut g = self.gammahat0;
        while g > target && n < 2048 {
            n += 1;
            g *= 0.5;
        }
        n
    }

    /// `⌊log₂ T⌋`.
    pub fn n_max(&self) -> u32 {
        if self.horizon == 0 {
            0
        } else {
            63 - self.horizon.leading_zeros()
        }
    }

    pub fn delta_max(&self) -> f64 {
        self.gaps.delta_max
    }

    /// `3 (2 + λ)² / α`, the smallest MV-LCB constant covered by the theorem.
    pub fn mvlcb_threshold(&self) -> f64 {
        let s = 2.0 + self.risk.lambda();
        3.0 * s * s / self.alpha
    }

    /// `64 / α`, the smallest CB-AE constant covered by the theorem.
    pub fn cbae_threshold(&self) -> f64 {
        64.0 / self.alpha
    }

    fn suboptimal(&self) -> Result<Vec<usize>> {
        let k_star = self.gaps.k_star;
        let arms: Vec<usize> = (0..self.num_arms()).filter(|&k| k != k_star).collect();
        if let Some(&k) = arms.iter().find(|&&k| self.gaps.gamma[k] <= 0.0) {
            return Err(Error::TheoremInapplicable(format!(
                "arm {k} has zero mean-variance gap"
            )));
        }
        Ok(arms)
    }

    fn check(&self) -> Result<()> {
        if self.horizon == 0 {
            return Err(Error::InvalidParameter("horizon must be positive".into()));
        }
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "alpha must be positive, got {}",
                self.alpha
            )));
        }
        Ok(())
    }
}

/// `Σ_{k≠k*} (4c log T / Γ_k² + 5 ∧ T)(Γ_k + (K−1) Δ_k² / 4)`.
pub fn bound_mvlcb(inputs: &BoundInputs) -> Result<BoundValue> {
    inputs.check()?;
    let arms = inputs.suboptimal()?;
    let t = inputs.horizon as f64;
    let log_t = t.ln();
    let k = inputs.num_arms() as f64;
    let value = arms
        .iter()
        .map(|&a| {
            let g = inputs.gaps.gamma[a];
            let d = inputs.gaps.delta[a];
            let count = (4.0 * inputs.c * log_t / (g * g) + 5.0).min(t);
            count * (g + (k - 1.0) * d * d / 4.0)
        })
        .sum();
    Ok(BoundValue {
        value,
        theorem_grade: inputs.c >= inputs.mvlcb_threshold(),
    })
}

/// The three terms of the CB-AE bound, in order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CbaeBoundTerms {
    pub gap_term: f64,
    pub variance_term: f64,
    pub failure_term: f64,
}

impl CbaeBoundTerms {
    pub fn total(&self) -> f64 {
        self.gap_term + self.variance_term + self.failure_term
    }
}

pub fn bound_cbae_terms(inputs: &BoundInputs) -> Result<CbaeBoundTerms> {
    inputs.check()?;
    let arms = inputs.suboptimal()?;
    let t = inputs.horizon as f64;
    let log_t = t.ln();
    let log2_t = t.log2();
    let k = inputs.num_arms() as f64;
    let big_c = inputs.big_c;
    let dmax2 = inputs.delta_max().powi(2);
    let n_max = i64::from(inputs.n_max());
    let tail = (k * log2_t + 2.0) / t.powi(3);

    let gap_term = arms
        .iter()
        .map(|&a| {
            let g = inputs.gaps.gamma[a];
            let count = (4.0 * big_c / 3.0 * log_t / (g * g) + (1.0 / g).log2() + tail).min(t);
            count * g
        })
        .sum();

    let inner: f64 = arms
        .iter()
        .map(|&a| {
            let g = inputs.gaps.gamma[a];
            let n_k = i64::from(inputs.n_k(a));
            let first = if n_k <= n_max {
                big_c * log_t / (g * g) + 1.0
            } else {
                0.0
            };
            let second = if n_k - 1 <= n_max {
                big_c / 4.0 * log_t / (g * g) + 1.0
            } else {
                0.0
            };
            first + second
        })
        .sum();
    let variance_term = 0.5 * log2_t * dmax2 * inner;

    let failure_term = ((k * log2_t + 2.0) / t.powi(4) + k * log2_t / t)
        * ((k - 1.0) * (k - 1.0) * t * dmax2 / 4.0);

    Ok(CbaeBoundTerms {
        gap_term,
        variance_term,
        failure_term,
    })
}

pub fn bound_cbae(inputs: &BoundInputs) -> Result<BoundValue> {
    let terms = bound_cbae_terms(inputs)?;
    Ok(BoundValue {
        value: terms.total(),
        theorem_grade: inputs.big_c >= inputs.cbae_threshold(),
    })
}

/// `(4 / (α Γ²) (log K + 1) + 1 ∧ T)(Γ + (K−1) Δ_max² / 4)` with `Γ` the
/// smallest positive gap.
pub fn bound_mvfl(inputs: &BoundInputs) -> Result<BoundValue> {
    inputs.check()?;
    let g = inputs
        .gaps
        .gamma_min_positive
        .ok_or_else(|| Error::TheoremInapplicable("every arm is optimal".into()))?;
    let t = inputs.horizon as f64;
    let k = inputs.num_arms() as f64;
    let count = (4.0 / (inputs.alpha * g * g) * (k.ln() + 1.0) + 1.0).min(t);
    Ok(BoundValue {
        value: count * (g + (k - 1.0) * inputs.delta_max().powi(2) / 4.0),
        theorem_grade: true,
    })
}
