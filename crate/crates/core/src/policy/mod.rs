//! Learning policies behind a common select/observe contract.
//!
//! Rounds are numbered from 1. During round `t` the driver calls
//! [`Policy::select`] once, draws the rewards, and calls [`Policy::observe`]
//! with the feedback generated by the selected arm.

mod baseline;
mod cbae;
mod mvfl;
mod mvlcb;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::risk::Environment;

pub use baseline::{Oracle, UniformRandom};
pub use cbae::{full_step_len, step_len, CbAe};
pub use mvfl::MvFl;
pub use mvlcb::{lcb_index, MvLcb};

/// Exploration constant `c` used by MV-LCB in the simulation study.
pub const DEFAULT_C: f64 = 1.0;
/// Step-length constant `C` used by CB-AE in the simulation study.
pub const DEFAULT_BIG_C: f64 = 16.0;
/// Initial gap guess `Γ̂₀` of CB-AE.
pub const DEFAULT_GAMMAHAT0: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FeedbackKind {
    /// Only the played arm's reward is revealed.
    Bandit,
    /// Every arm's reward is revealed.
    Full,
}

/// What the learner sees at the end of a round.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Feedback<'a> {
    Bandit { arm: usize, reward: f64 },
    Full { rewards: &'a [f64] },
}

/// Sequential decision maker.
pub trait Policy: Send {
    /// Short label used in reports, e.g. `"cbae-full"`.
    fn name(&self) -> String;

    fn feedback_kind(&self) -> FeedbackKind;

    /// `false` for policies that consume private randomness.
    fn is_deterministic(&self) -> bool {
        true
    }

    /// Prepares the policy for a fresh episode of `horizon` rounds.
    fn reset(&mut self, arms: usize, horizon: usize, seed: u64);

    fn select(&mut self, t: usize) -> usize;

    fn observe(&mut self, t: usize, feedback: &Feedback<'_>);

    fn clone_box(&self) -> Box<dyn Policy>;
}

impl Clone for Box<dyn Policy> {
    fn clone(&self) -> Self {
        self.clone_box()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PolicyKind {
    Mvlcb,
    Cbae,
    Mvfl,
    Oracle,
    Uniform,
}

/// JSON-encodable policy description.
///
/// Missing constants fall back to `c = 1`, `C = 16`, `Γ̂₀ = 1`. Missing
/// feedback defaults to bandit, except for MV-FL which is full-information
/// only. `arm` pins the oracle to a fixed arm instead of the true optimum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolicyConfig {
    pub policy: PolicyKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(rename = "C", default, skip_serializing_if = "Option::is_none")]
    pub big_c: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gammahat0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub feedback: Option<FeedbackKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arm: Option<usize>,
}

impl PolicyConfig {
    pub fn new(policy: PolicyKind) -> Self {
        Self {
            policy,
            c: None,
            big_c: None,
            gammahat0: None,
            feedback: None,
            arm: None,
        }
    }

    pub fn mvlcb() -> Self {
        Self::new(PolicyKind::Mvlcb)
    }

    pub fn mvfl() -> Self {
        Self::new(PolicyKind::Mvfl)
    }

    pub fn cbae(feedback: FeedbackKind) -> Self {
        Self::new(PolicyKind::Cbae).with_feedback(feedback)
    }

    pub fn oracle() -> Self {
        Self::new(PolicyKind::Oracle)
    }

    pub fn uniform() -> Self {
        Self::new(PolicyKind::Uniform)
    }

    pub fn with_feedback(mut self, feedback: FeedbackKind) -> Self {
        self.feedback = Some(feedback);
        self
    }

    pub fn with_c(mut self, c: f64) -> Self {
        self.c = Some(c);
        self
    }

    pub fn with_big_c(mut self, big_c: f64) -> Self {
        self.big_c = Some(big_c);
        self
    }

    pub fn with_gammahat0(mut self, gammahat0: f64) -> Self {
        self.gammahat0 = Some(gammahat0);
        self
    }

    pub fn with_arm(mut self, arm: usize) -> Self {
        self.arm = Some(arm);
        self
    }

    pub fn feedback_kind(&self) -> FeedbackKind {
        match (self.policy, self.feedback) {
            (_, Some(kind)) => kind,
            (PolicyKind::Mvfl, None) => FeedbackKind::Full,
            (_, None) => FeedbackKind::Bandit,
        }
    }

    /// Report label, e.g. `mvlcb`, `cbae-bandit`, `oracle-full`.
    pub fn label(&self) -> String {
        let kind = self.feedback_kind();
        let suffix = match kind {
            FeedbackKind::Bandit => "bandit",
            FeedbackKind::Full => "full",
        };
        match self.policy {
            PolicyKind::Mvlcb => "mvlcb".into(),
            PolicyKind::Mvfl => "mvfl".into(),
            PolicyKind::Cbae => format!("cbae-{suffix}"),
            PolicyKind::Oracle => match self.arm {
                Some(arm) => format!("fixed{arm}-{suffix}"),
                None => format!("oracle-{suffix}"),
            },
            PolicyKind::Uniform => format!("uniform-{suffix}"),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: Option<f64>| match v {
            Some(x) if !(x.is_finite() && x > 0.0) => Err(Error::PolicyConfig(format!(
                "{name} must be finite and positive, got {x}"
            ))),
            _ => Ok(()),
        };
        positive("c", self.c)?;
        positive("C", self.big_c)?;
        positive("gammahat0", self.gammahat0)?;
        match (self.policy, self.feedback_kind()) {
            (PolicyKind::Mvlcb, FeedbackKind::Full) => {
                Err(Error::PolicyConfig("mvlcb is a bandit policy".into()))
            }
            (PolicyKind::Mvfl, FeedbackKind::Bandit) => Err(Error::PolicyConfig(
                "mvfl requires full-information feedback".into(),
            )),
            _ => Ok(()),
        }
    }

    /// Instantiates the policy for `env`.
    pub fn build(&self, env: &Environment) -> Result<Box<dyn Policy>> {
        self.validate()?;
        let risk = env.risk();
        let kind = self.feedback_kind();
        let policy: Box<dyn Policy> = match self.policy {
            PolicyKind::Mvlcb => Box::new(MvLcb::new(self.c.unwrap_or(DEFAULT_C), risk)),
            PolicyKind::Mvfl => Box::new(MvFl::new(risk)),
            PolicyKind::Cbae => Box::new(CbAe::new(
                self.big_c.unwrap_or(DEFAULT_BIG_C),
                self.gammahat0.unwrap_or(DEFAULT_GAMMAHAT0),
                risk,
                kind,
            )),
            PolicyKind::Oracle => {
                let arm = self.arm.unwrap_or_else(|| env.gaps().k_star);
                if arm >= env.num_arms() {
                    return Err(Error::PolicyConfig(format!(
                        "oracle arm {arm} out of range for {} arms",
                        env.num_arms()
                    )));
                }
                Box::new(Oracle::new(arm, kind))
            }
            PolicyKind::Uniform => Box::new(UniformRandom::new(kind)),
        };
        Ok(policy)
    }
}

/// Index of the smallest value, lowest index on ties.
pub(crate) fn argmin(values: impl IntoIterator<Item = f64>) -> usize {
    let mut best = 0;
    let mut best_value = f64::INFINITY;
    for (k, v) in values.into_iter().enumerate() {
        if k == 0 || v < best_value {
            best = k;
            best_value = v;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::risk::{ArmDistribution, RiskTolerance};

    fn env() -> Environment {
        Environment::canonical(2.5, RiskTolerance::new(1.0).unwrap()).unwrap()
    }

    #[test]
    fn config_json() {
        let cfg: PolicyConfig = serde_json::from_str(
            r#"{"policy": "cbae", "C": 64, "gammahat0": 1, "feedback": "full"}"#,
        )
        .unwrap();
        assert_eq!(cfg.policy, PolicyKind::Cbae);
        assert_eq!(cfg.big_c, Some(64.0));
        assert_eq!(cfg.feedback_kind(), FeedbackKind::Full);
        assert_eq!(cfg.label(), "cbae-full");

        let back: PolicyConfig =
            serde_json::from_str(&serde_json::to_string(&cfg).unwrap()).unwrap();
        assert_eq!(back, cfg);

        assert!(serde_json::from_str::<PolicyConfig>(r#"{"policy": "thompson"}"#).is_err());
        assert!(serde_json::from_str::<PolicyConfig>(r#"{"policy": "mvlcb", "k": 1}"#).is_err());
    }

    #[test]
    fn feedback_compatibility() {
        assert!(PolicyConfig::mvlcb()
            .with_feedback(FeedbackKind::Full)
            .build(&env())
            .is_err());
        assert!(PolicyConfig::mvfl()
            .with_feedback(FeedbackKind::Bandit)
            .build(&env())
            .is_err());
        assert_eq!(
            PolicyConfig::mvfl().build(&env()).unwrap().feedback_kind(),
            FeedbackKind::Full
        );
        assert!(PolicyConfig::mvlcb().with_c(-1.0).build(&env()).is_err());
        assert!(PolicyConfig::oracle().with_arm(7).build(&env()).is_err());
    }

    #[test]
    fn argmin_ties_to_lowest() {
        assert_eq!(argmin([1.0, 0.5, 0.5]), 1);
        assert_eq!(argmin([f64::NEG_INFINITY, f64::NEG_INFINITY]), 0);
        assert_eq!(argmin([-0.3, -0.2]), 0);
        assert_eq!(argmin([f64::INFINITY, f64::INFINITY, 3.0]), 2);
    }

    #[test]
    fn oracle_plays_optimum() {
        let env = Environment::new(
            vec![
                ArmDistribution::Bernoulli { p: 0.5 },
                ArmDistribution::Bernoulli { p: 0.01 },
            ],
            RiskTolerance::new(0.0).unwrap(),
        )
        .unwrap();
        let mut p = PolicyConfig::oracle().build(&env).unwrap();
        p.reset(2, 10, 0);
        assert_eq!(p.select(1), 1);
    }
}
