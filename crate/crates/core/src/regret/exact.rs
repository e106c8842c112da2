//! Exhaustive enumeration of small finite-support instances.
//!
//! The outcome tree of a deterministic policy is walked with exact path
//! probabilities. Two regret totals are accumulated independently:
//!
//! - decomposed, from the exact decision probabilities:
//!   `Σ_k E[τ_k] Γ_k + Σ_t E[(Σ_{k≠k*} (1[π_t=k] − P[π_t=k]) Δ_k)²]`;
//! - direct, from the exact mean and variance of the reward collected at
//!   each round: `Σ_t MV(X_{π_t,t}) − T · MV_{k*}`.
//!
//! The two must coincide; any gap larger than rounding points at a bug.

use std::rc::Rc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::policy::{Feedback, FeedbackKind, Policy, PolicyConfig};
use crate::risk::Environment;

pub const DEFAULT_BRANCH_BUDGET: u64 = 1_000_000;

/// Tolerance applied to the decomposed/direct identity.
pub const IDENTITY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Serialize)]
pub struct ExactReport {
    pub policy: String,
    pub horizon: usize,
    /// `prob[t][k] = P[π_{t+1} = k]`.
    pub prob: Vec<Vec<f64>>,
    pub expected_pulls: Vec<f64>,
    pub term1: f64,
    pub term2: f64,
    pub term2_series: Vec<f64>,
    pub decomposed_regret: f64,
    pub direct_regret: f64,
    /// Exact `MV(X_{π_t,t})` for every round.
    pub played_mv: Vec<f64>,
    /// Tree nodes visited.
    pub nodes: u64,
}

impl ExactReport {
    pub fn identity_gap(&self) -> f64 {
        (self.decomposed_regret - self.direct_regret).abs()
    }

    pub fn identity_holds(&self) -> bool {
        self.identity_gap() <= IDENTITY_TOLERANCE
    }
}

struct Walker {
    arms: usize,
    horizon: usize,
    kind: FeedbackKind,
    supports: Vec<Vec<(f64, f64)>>,
    /// Joint outcomes for full information: reward vector and probability.
    joint: Rc<Vec<(Vec<f64>, f64)>>,
    budget: u64,
    nodes: u64,
    prob: Vec<Vec<f64>>,
    /// `E[X_{π_t,t}]` and `E[X_{π_t,t}²]` accumulated over paths.
    first: Vec<f64>,
    second: Vec<f64>,
}

impl Walker {
    fn walk(&mut self, t: usize, mut policy: Box<dyn Policy>, path_prob: f64) -> Result<()> {
        if t > self.horizon {
            return Ok(());
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::BudgetExceeded {
                budget: self.budget,
            });
        }
        let arm = policy.select(t);
        let row = t - 1;
        self.prob[row][arm] += path_prob;

        match self.kind {
            FeedbackKind::Bandit => {
                let outcomes = self.supports[arm].clone();
                let last = outcomes.len() - 1;
                for (i, &(x, p)) in outcomes.iter().enumerate() {
                    let w = path_prob * p;
                    self.first[row] += w * x;
                    self.second[row] += w * x * x;
                    let mut next = if i == last {
                        std::mem::replace(&mut policy, Box::new(Exhausted))
                    } else {
                        policy.clone_box()
                    };
                    next.observe(t, &Feedback::Bandit { arm, reward: x });
                    self.walk(t + 1, next, w)?;
                }
            }
            FeedbackKind::Full => {
                let joint = Rc::clone(&self.joint);
                let last = joint.len() - 1;
                for (i, (rewards, p)) in joint.iter().enumerate() {
                    let w = path_prob * p;
                    let x = rewards[arm];
                    self.first[row] += w * x;
                    self.second[row] += w * x * x;
                    let mut next = if i == last {
                        std::mem::replace(&mut policy, Box::new(Exhausted))
                    } else {
                        policy.clone_box()
                    };
                    next.observe(t, &Feedback::Full { rewards });
                    self.walk(t + 1, next, w)?;
                }
            }
        }
        Ok(())
    }
}

/// Placeholder left behind after the last branch takes ownership of a policy.
struct Exhausted;

impl Policy for Exhausted {
    fn name(&self) -> String {
        "exhausted".into()
    }
    fn feedback_kind(&self) -> FeedbackKind {
        FeedbackKind::Bandit
    }
    fn reset(&mut self, _: usize, _: usize, _: u64) {}
    fn select(&mut self, _: usize) -> usize {
        unreachable!("exhausted policy is never queried")
    }
    fn observe(&mut self, _: usize, _: &Feedback<'_>) {}
    fn clone_box(&self) -> Box<dyn Policy> {
        Box::new(Exhausted)
    }
}

fn joint_outcomes(supports: &[Vec<(f64, f64)>]) -> Vec<(Vec<f64>, f64)> {
    supports
        .iter()
        .fold(vec![(Vec::new(), 1.0)], |acc, support| {
            acc.iter()
                .flat_map(|(prefix, p)| {
                    support.iter().map(move |&(x, q)| {
                        let mut v = prefix.clone();
                        v.push(x);
                        (v, p * q)
                    })
                })
                .collect()
        })
}

/// Exact regret of a deterministic policy on a finite-support environment.
///
/// `budget` caps the number of tree nodes visited.
pub fn enumerate_exact(
    env: &Environment,
    config: &PolicyConfig,
    horizon: usize,
    budget: u64,
) -> Result<ExactReport> {
    let policy = config.build(env)?;
    enumerate_policy(env, policy, horizon, budget)
}

/// Like [`enumerate_exact`] for an already constructed policy.
pub fn enumerate_policy(
    env: &Environment,
    mut policy: Box<dyn Policy>,
    horizon: usize,
    budget: u64,
) -> Result<ExactReport> {
    if !policy.is_deterministic() {
        return Err(Error::StochasticPolicy(policy.name()));
    }
    let supports = env
        .arms()
        .iter()
        .map(|a| a.support().ok_or(Error::UnsupportedFamily(a.family())))
        .collect::<Result<Vec<_>>>()?;
    let kind = policy.feedback_kind();
    let joint = match kind {
        FeedbackKind::Full => {
            let size: f64 = supports.iter().map(|s| s.len() as f64).product();
            if size > budget as f64 {
                return Err(Error::BudgetExceeded { budget });
            }
            joint_outcomes(&supports)
        }
        FeedbackKind::Bandit => Vec::new(),
    };
    let arms = env.num_arms();
    let name = policy.name();
    policy.reset(arms, horizon, 0);

    let mut walker = Walker {
        arms,
        horizon,
        kind,
        supports,
        joint: Rc::new(joint),
        budget,
        nodes: 0,
        prob: vec![vec![0.0; arms]; horizon],
        first: vec![0.0; horizon],
        second: vec![0.0; horizon],
    };
    walker.walk(1, policy, 1.0)?;

    let gaps = env.gaps();
    let lambda = env.risk().lambda();
    let mut expected_pulls = vec![0.0; walker.arms];
    for row in &walker.prob {
        for (acc, p) in expected_pulls.iter_mut().zip(row) {
            *acc += p;
        }
    }
    let term1: f64 = expected_pulls
        .iter()
        .zip(&gaps.gamma)
        .map(|(n, g)| n * g)
        .sum();
    let term2_series: Vec<f64> = walker
        .prob
        .iter()
        .map(|row| {
            let mean: f64 = row.iter().zip(&gaps.delta).map(|(p, d)| p * d).sum();
            row.iter()
                .zip(&gaps.delta)
                .map(|(p, d)| p * (d - mean) * (d - mean))
                .sum()
        })
        .collect();
    let term2: f64 = term2_series.iter().sum();

    let played_mv: Vec<f64> = walker
        .first
        .iter()
        .zip(&walker.second)
        .map(|(&m1, &m2)| (m2 - m1 * m1) - lambda * m1)
        .collect();
    let mv_star = gaps.mv[gaps.k_star];
    let direct_regret = played_mv.iter().sum::<f64>() - horizon as f64 * mv_star;

    Ok(ExactReport {
        policy: name,
        horizon,
        prob: walker.prob,
        expected_pulls,
        term1,
        term2,
        term2_series,
        decomposed_regret: term1 + term2,
        direct_regret,
        played_mv,
        nodes: walker.nodes,
    })
}
