//! Reward distributions, the mean-variance measure and environment gaps.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Lower clamp applied to sub-Gaussian parameters of degenerate arms.
pub const MIN_SUB_GAUSSIAN: f64 = 1e-12;

const PROB_SUM_TOL: f64 = 1e-12;

/// Weight `λ ≥ 0` placed on the mean in `MV = σ² − λμ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct RiskTolerance(f64);

impl RiskTolerance {
    pub fn new(lambda: f64) -> Result<Self> {
        if lambda.is_finite() && lambda >= 0.0 {
            Ok(Self(lambda))
        } else {
            Err(Error::InvalidParameter(format!(
                "risk tolerance must be finite and nonnegative, got {lambda}"
            )))
        }
    }

    pub fn lambda(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for RiskTolerance {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self> {
        Self::new(value)
    }
}

impl From<RiskTolerance> for f64 {
    fn from(value: RiskTolerance) -> f64 {
        value.0
    }
}

/// Reward distribution of a single arm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum ArmDistribution {
    Gaussian {
        mu: f64,
        sigma2: f64,
    },
    Bernoulli {
        p: f64,
    },
    /// Atoms `mu − σ` and `mu + σ`, each with probability one half.
    #[serde(rename = "twopoint")]
    TwoPoint {
        mu: f64,
        sigma2: f64,
    },
    /// Finite support given as `(value, probability)` pairs.
    #[serde(rename = "discrete")]
    DiscreteFinite {
        atoms: Vec<(f64, f64)>,
    },
}

impl ArmDistribution {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidDistribution(msg));
        match *self {
            Self::Gaussian { mu, sigma2 } | Self::TwoPoint { mu, sigma2 } => {
                if !mu.is_finite() {
                    return bad(format!("mean must be finite, got {mu}"));
                }
                if !(sigma2.is_finite() && sigma2 >= 0.0) {
                    return bad(format!(
                        "variance must be finite and nonnegative, got {sigma2}"
                    ));
                }
            }
            Self::Bernoulli { p } => {
                if !(0.0..=1.0).contains(&p) {
                    return bad(format!("Bernoulli parameter must lie in [0, 1], got {p}"));
                }
            }
            Self::DiscreteFinite { ref atoms } => {
                if atoms.is_empty() {
                    return bad("discrete distribution needs at least one atom".into());
                }
                let mut total = 0.0;
                for &(value, prob) in atoms {
                    if !value.is_finite() {
                        return bad(format!("atom value must be finite, got {value}"));
                    }
                    if !(prob.is_finite() && prob >= 0.0) {
                        return bad(format!("atom probability must be nonnegative, got {prob}"));
                    }
                    total += prob;
                }
                if (total - 1.0).abs() > PROB_SUM_TOL {
                    return bad(format!("atom probabilities sum to {total}, expected 1"));
                }
            }
        }
        Ok(())
    }

    pub fn family(&self) -> &'static str {
        match self {
            Self::Gaussian { .. } => "gaussian",
            Self::Bernoulli { .. } => "bernoulli",
            Self::TwoPoint { .. } => "twopoint",
            Self::DiscreteFinite { .. } => "discrete",
        }
    }

    /// Exact mean and variance.
    pub fn moments(&self) -> (f64, f64) {
        match *self {
            Self::Gaussian { mu, sigma2 } | Self::TwoPoint { mu, sigma2 } => (mu, sigma2),
            Self::Bernoulli { p } => (p, p * (1.0 - p)),
            Self::DiscreteFinite { ref atoms } => {
                let mu: f64 = atoms.iter().map(|&(v, p)| p * v).sum();
                let var: f64 = atoms.iter().map(|&(v, p)| p * (v - mu) * (v - mu)).sum();
                (mu, var)
            }
        }
    }

    /// `σ² − λμ`.
    pub fn mv(&self, risk: RiskTolerance) -> f64 {
        let (mu, sigma2) = self.moments();
        sigma2 - risk.lambda() * mu
    }

    /// Atoms with positive probability, or `None` for continuous families.
    pub fn support(&self) -> Option<Vec<(f64, f64)>> {
        match *self {
            Self::Gaussian { .. } => None,
            Self::Bernoulli { p } => Some(
                [(0.0, 1.0 - p), (1.0, p)]
                    .into_iter()
                    .filter(|&(_, w)| w > 0.0)
                    .collect(),
            ),
            Self::TwoPoint { mu, sigma2 } => {
                if sigma2 == 0.0 {
                    Some(vec![(mu, 1.0)])
                } else {
                    let s = sigma2.sqrt();
                    Some(vec![(mu - s, 0.5), (mu + s, 0.5)])
                }
            }
            Self::DiscreteFinite { ref atoms } => {
                Some(atoms.iter().copied().filter(|&(_, w)| w > 0.0).collect())
            }
        }
    }

    /// One draw.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            Self::Gaussian { mu, sigma2 } => {
                let z: f64 = StandardNormal.sample(rng);
                mu + sigma2.sqrt() * z
            }
            Self::Bernoulli { p } => {
                if rng.random::<f64>() < p {
                    1.0
                } else {
                    0.0
                }
            }
            Self::TwoPoint { mu, sigma2 } => {
                let s = sigma2.sqrt();
                if rng.random::<bool>() {
                    mu + s
                } else {
                    mu - s
                }
            }
            Self::DiscreteFinite { ref atoms } => {
                let u = rng.random::<f64>();
                let mut acc = 0.0;
                for &(value, prob) in atoms {
                    acc += prob;
                    if u < acc {
                        return value;
                    }
                }
                // u landed in the rounding gap above the cumulative sum
                atoms
                    .iter()
                    .rev()
                    .find(|&&(_, p)| p > 0.0)
                    .map(|&(v, _)| v)
                    .unwrap_or(atoms[atoms.len() - 1].0)
            }
        }
    }

    /// Hoeffding-style sub-Gaussian parameters for bounded families.
    ///
    /// `zeta0` is `range(X)² / 4` and `zeta1` is `range((X − μ)²)² / 4`.
    /// Both are clamped below by [`MIN_SUB_GAUSSIAN`].
    pub fn sub_gaussian_params(&self) -> Result<SubGaussianParams> {
        let support = self
            .support()
            .ok_or(Error::UnsupportedFamily(self.family()))?;
        let (mu, _) = self.moments();
        let (lo, hi) = min_max(support.iter().map(|&(v, _)| v));
        let (sq_lo, sq_hi) = min_max(support.iter().map(|&(v, _)| (v - mu) * (v - mu)));
        let zeta0 = ((hi - lo).powi(2) / 4.0).max(MIN_SUB_GAUSSIAN);
        let zeta1 = ((sq_hi - sq_lo).powi(2) / 4.0).max(MIN_SUB_GAUSSIAN);
        Ok(SubGaussianParams::new(zeta0, zeta1))
    }
}

fn min_max(values: impl Iterator<Item = f64>) -> (f64, f64) {
    values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(v), hi.max(v))
    })
}

/// Sub-Gaussian parameters of `X − μ` and `(X − μ)² − σ²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SubGaussianParams {
    pub zeta0: f64,
    pub zeta1: f64,
    pub zeta: f64,
    /// Largest admissible concentration constant, `1 / (2ζ)`.
    pub alpha_max: f64,
}

impl SubGaussianParams {
    pub fn new(zeta0: f64, zeta1: f64) -> Self {
        let zeta = zeta0.max(zeta1);
        Self {
            zeta0,
            zeta1,
            zeta,
            alpha_max: 1.0 / (2.0 * zeta),
        }
    }
}

#[derive(Deserialize)]
struct EnvironmentRepr {
    lambda: RiskTolerance,
    arms: Vec<ArmDistribution>,
}

/// A set of `K ≥ 2` arms together with the risk tolerance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "EnvironmentRepr")]
pub struct Environment {
    lambda: RiskTolerance,
    arms: Vec<ArmDistribution>,
}

impl TryFrom<EnvironmentRepr> for Environment {
    type Error = Error;

    fn try_from(repr: EnvironmentRepr) -> Result<Self> {
        Self::new(repr.arms, repr.lambda)
    }
}

impl Environment {
    pub fn new(arms: Vec<ArmDistribution>, risk: RiskTolerance) -> Result<Self> {
        if arms.len() < 2 {
            return Err(Error::InvalidEnvironment(format!(
                "need at least two arms, got {}",
                arms.len()
            )));
        }
        for (k, arm) in arms.iter().enumerate() {
            arm.validate()
                .map_err(|e| Error::InvalidEnvironment(format!("arm {k}: {e}")))?;
        }
        Ok(Self { lambda: risk, arms })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("environment serialization is infallible")
    }

    pub fn arms(&self) -> &[ArmDistribution] {
        &self.arms
    }

    pub fn num_arms(&self) -> usize {
        self.arms.len()
    }

    pub fn risk(&self) -> RiskTolerance {
        self.lambda
    }

    pub fn mv(&self, arm: usize) -> f64 {
        self.arms[arm].mv(self.lambda)
    }

    pub fn gaps(&self) -> GapProfile {
        GapProfile::from_environment(self)
    }

    /// Smallest `alpha_max` over the arms; fails for unbounded families.
    pub fn alpha_max(&self) -> Result<f64> {
        self.arms.iter().try_fold(f64::INFINITY, |acc, arm| {
            Ok(acc.min(arm.sub_gaussian_params()?.alpha_max))
        })
    }

    /// The four-arm simulation environment: arm 0 is `TwoPoint(1, 1)`, the
    /// other three are `TwoPoint(2, variance)`.
    pub fn canonical(variance: f64, risk: RiskTolerance) -> Result<Self> {
        let mut arms = vec![ArmDistribution::TwoPoint {
            mu: 1.0,
            sigma2: 1.0,
        }];
        arms.extend((0..3).map(|_| ArmDistribution::TwoPoint {
            mu: 2.0,
            sigma2: variance,
        }));
        Self::new(arms, risk)
    }
}

/// Optimal arm and the MV and mean gaps of every arm.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GapProfile {
    pub k_star: usize,
    pub mv: Vec<f64>,
    pub mu: Vec<f64>,
    /// `Γ_k = MV_k − MV_{k*}`.
    pub gamma: Vec<f64>,
    /// `Δ_k = μ_k − μ_{k*}`.
    pub delta: Vec<f64>,
    /// Smallest positive `Γ_k`; `None` when every arm is optimal.
    pub gamma_min_positive: Option<f64>,
    /// `max_{k ≠ k*} |Δ_k|`.
    pub delta_max: f64,
}

impl GapProfile {
    fn from_environment(env: &Environment) -> Self {
        let risk = env.risk();
        let moments: Vec<(f64, f64)> = env.arms().iter().map(|a| a.moments()).collect();
        let mv: Vec<f64> = env.arms().iter().map(|a| a.mv(risk)).collect();
        // lowest index wins ties
        let mut k_star = 0;
        for (k, &value) in mv.iter().enumerate().skip(1) {
            if value < mv[k_star] {
                k_star = k;
            }
        }
        let gamma: Vec<f64> = mv.iter().map(|&m| m - mv[k_star]).collect();
        let delta: Vec<f64> = moments
            .iter()
            .map(|&(mu, _)| mu - moments[k_star].0)
            .collect();
        let gamma_min_positive = gamma
            .iter()
            .copied()
            .filter(|&g| g > 0.0)
            .fold(None, |acc: Option<f64>, g| {
                Some(acc.map_or(g, |a| a.min(g)))
            });
        let delta_max = delta
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != k_star)
            .map(|(_, d)| d.abs())
            .fold(0.0, f64::max);
        Self {
            k_star,
            mu: moments.iter().map(|&(mu, _)| mu).collect(),
            mv,
            gamma,
            delta,
            gamma_min_positive,
            delta_max,
        }
    }

    pub fn num_arms(&self) -> usize {
        self.mv.len()
    }
}
