//! The two-environment worst-case construction and its coupling sum.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::risk::{ArmDistribution, Environment, RiskTolerance};

/// Smallest horizon for which the coupling-sum lower bound is stated.
pub const MIN_COUPLING_HORIZON: usize = 100;

/// Environments `F = (N(3/2, 3/16 − 4Γ²), B(1/4 + 2Γ))` and
/// `F′ = (N(3/2, 3/16 − 4Γ²), B(1/4 − 2Γ))`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LowerBoundPair {
    pub env_f: Environment,
    pub env_f_prime: Environment,
    pub gamma_param: f64,
    pub risk: RiskTolerance,
    /// `false` when `λ ≥ Γ / (5/4 + 2Γ)`: arm 0 stays optimal under `F′`
    /// and the construction no longer swaps the optimal arm.
    pub flips_optimal_arm: bool,
}

impl LowerBoundPair {
    pub fn p(&self) -> f64 {
        0.25 + 2.0 * self.gamma_param
    }

    pub fn q(&self) -> f64 {
        0.25 - 2.0 * self.gamma_param
    }
}

/// `Γ / (5/4 + 2Γ)`: below this λ the optimal arm differs between `F` and `F′`.
pub fn flip_threshold(gamma_param: f64) -> f64 {
    gamma_param / (1.25 + 2.0 * gamma_param)
}

pub fn lb_env_pair(gamma_param: f64, risk: RiskTolerance) -> Result<LowerBoundPair> {
    if !(gamma_param > 0.0 && gamma_param < 0.125) {
        return Err(Error::InvalidParameter(format!(
            "construction gap must lie in (0, 1/8), got {gamma_param}"
        )));
    }
    let gaussian = ArmDistribution::Gaussian {
        mu: 1.5,
        sigma2: 3.0 / 16.0 - 4.0 * gamma_param * gamma_param,
    };
    let env_f = Environment::new(
        vec![
            gaussian.clone(),
            ArmDistribution::Bernoulli {
                p: 0.25 + 2.0 * gamma_param,
            },
        ],
        risk,
    )?;
    let env_f_prime = Environment::new(
        vec![
            gaussian,
            ArmDistribution::Bernoulli {
                p: 0.25 - 2.0 * gamma_param,
            },
        ],
        risk,
    )?;
    Ok(LowerBoundPair {
        env_f,
        env_f_prime,
        gamma_param,
        risk,
        flips_optimal_arm: risk.lambda() < flip_threshold(gamma_param),
    })
}

/// `√(0.02 e / T)`, the gap at which both coupling cases meet.
pub fn worst_case_gamma(horizon: f64) -> f64 {
    (0.02 * std::f64::consts::E / horizon).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CouplingFloor {
    pub kappa: f64,
    pub gamma: f64,
    pub horizon: usize,
    /// `½ Σ_{t=1}^T exp(−κ t Γ²)`.
    pub sum: f64,
    /// `min{0.01 / Γ², T / (2e)}`.
    pub floor: f64,
    pub holds: bool,
}

pub fn coupling_floor(kappa: f64, gamma: f64, horizon: usize) -> Result<CouplingFloor> {
    if horizon < MIN_COUPLING_HORIZON {
        return Err(Error::InvalidParameter(format!(
            "coupling bound needs T >= {MIN_COUPLING_HORIZON}, got {horizon}"
        )));
    }
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "gap must be positive, got {gamma}"
        )));
    }
    let rate = kappa * gamma * gamma;
    let sum = 0.5 * (1..=horizon).map(|t| (-rate * t as f64).exp()).sum::<f64>();
    let floor = (0.01 / (gamma * gamma)).min(horizon as f64 / (2.0 * std::f64::consts::E));
    Ok(CouplingFloor {
        kappa,
        gamma,
        horizon,
        sum,
        floor,
        holds: sum >= floor,
    })
}
