//! Monte-Carlo regret estimation.
//!
//! Two estimators are computed from the same ensemble of episodes:
//!
//! - decomposed: `Σ_k Ê[τ_k] Γ_k + Σ_t V̂ar(Δ_{π_t})`, the cumulative MV gap
//!   of the chosen arms plus the cross-run variance of the chosen arm's mean
//!   gap (plug-in decision probabilities);
//! - direct: `Σ_t (V̂ar_t − λ Êan_t) − T·MV_{k*}` from the cross-run mean and
//!   biased variance of the reward actually collected at each round.
//!
//! Replication `i` uses seed `base_seed + i`. Runs are grouped into at most
//! [`SEM_BATCHES`] contiguous batches; batches run in parallel and are merged
//! in index order, so results do not depend on the thread count. Standard
//! errors come from the spread of the per-batch estimates.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::episode::run_episode_with;
use crate::error::{Error, Result};
use crate::policy::PolicyConfig;
use crate::risk::{Environment, GapProfile};
use crate::stats::SampleStats;

pub const SEM_BATCHES: usize = 20;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub environment: Environment,
    pub policy: PolicyConfig,
    pub horizon: usize,
    pub runs: usize,
    pub base_seed: u64,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.horizon == 0 {
            return Err(Error::InvalidParameter("horizon must be at least 1".into()));
        }
        if self.runs < 2 {
            return Err(Error::TooFewRuns(self.runs));
        }
        self.policy.validate()
    }
}

/// Per-round sufficient statistics of a group of runs.
#[derive(Debug, Clone)]
struct Tally {
    arms: usize,
    runs: usize,
    /// `counts[t * arms + k]`: runs that played `k` at round `t + 1`.
    counts: Vec<u64>,
    played: Vec<SampleStats>,
}

impl Tally {
    fn new(horizon: usize, arms: usize) -> Self {
        Self {
            arms,
            runs: 0,
            counts: vec![0; horizon * arms],
            played: vec![SampleStats::new(); horizon],
        }
    }

    fn horizon(&self) -> usize {
        self.played.len()
    }

    fn merge(&mut self, other: &Tally) {
        self.runs += other.runs;
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        for (a, b) in self.played.iter_mut().zip(&other.played) {
            a.merge(b);
        }
    }

    fn probabilities(&self, t: usize) -> impl Iterator<Item = f64> + '_ {
        let m = self.runs as f64;
        self.counts[t * self.arms..(t + 1) * self.arms]
            .iter()
            .map(move |&c| c as f64 / m)
    }

    /// Per-round increments `(term1_t, term2_t, direct_t)`.
    fn increments(&self, gaps: &GapProfile, lambda: f64) -> Vec<(f64, f64, f64)> {
        let mv_star = gaps.mv[gaps.k_star];
        (0..self.horizon())
            .map(|t| {
                let probs: Vec<f64> = self.probabilities(t).collect();
                let term1: f64 = probs.iter().zip(&gaps.gamma).map(|(p, g)| p * g).sum();
                let mean_gap: f64 = probs.iter().zip(&gaps.delta).map(|(p, d)| p * d).sum();
                let term2: f64 = probs
                    .iter()
                    .zip(&gaps.delta)
                    .map(|(p, d)| p * (d - mean_gap) * (d - mean_gap))
                    .sum();
                let played = &self.played[t];
                let direct = played.variance() - lambda * played.mean() - mv_star;
                (term1, term2, direct)
            })
            .collect()
    }
}

/// Monte-Carlo regret estimates of one policy on one environment.
#[derive(Debug, Clone, Serialize)]
pub struct RegretReport {
    pub policy: String,
    pub horizon: usize,
    pub runs: usize,
    pub base_seed: u64,
    /// `prob_hat[t][k]`: fraction of runs playing `k` at round `t + 1`.
    pub prob_hat: Vec<Vec<f64>>,
    /// Mean number of pulls of each arm over the horizon.
    pub pulls_hat: Vec<f64>,
    /// Per-round contribution `Σ_k P̂[π_t = k] Γ_k`.
    pub term1_series: Vec<f64>,
    /// Per-round decision variance.
    pub term2_series: Vec<f64>,
    /// Per-round direct estimate `V̂ar_t − λ Êan_t − MV_{k*}`.
    pub direct_series: Vec<f64>,
    pub term1: f64,
    pub term2: f64,
    pub decomposed_regret: f64,
    pub direct_regret: f64,
    pub decomposed_sem: f64,
    pub direct_sem: f64,
    #[serde(skip)]
    batch_decomposed: Vec<Vec<f64>>,
    #[serde(skip)]
    batch_direct: Vec<Vec<f64>>,
}

/// Cumulative estimates up to round `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Checkpoint {
    pub t: usize,
    pub term1: f64,
    pub term2: f64,
    pub decomposed: f64,
    pub direct: f64,
    pub decomposed_sem: f64,
    pub direct_sem: f64,
}

fn batch_sem(batch_values: impl Iterator<Item = f64>) -> f64 {
    let stats = batch_values.fold(SampleStats::new(), |mut s, v| {
        s.push(v);
        s
    });
    let b = stats.count() as f64;
    if b < 2.0 {
        return 0.0;
    }
    // unbiased spread of batch estimates, scaled to the pooled estimator
    (stats.m2() / (b - 1.0) / b).sqrt()
}

impl RegretReport {
    /// Cumulative estimates through round `t` (1-based, `t ≤ horizon`).
    pub fn checkpoint(&self, t: usize) -> Checkpoint {
        assert!(
            t >= 1 && t <= self.horizon,
            "checkpoint {t} outside 1..={}",
            self.horizon
        );
        let term1: f64 = self.term1_series[..t].iter().sum();
        let term2: f64 = self.term2_series[..t].iter().sum();
        let direct: f64 = self.direct_series[..t].iter().sum();
        Checkpoint {
            t,
            term1,
            term2,
            decomposed: term1 + term2,
            direct,
            decomposed_sem: batch_sem(self.batch_decomposed.iter().map(|b| b[t - 1])),
            direct_sem: batch_sem(self.batch_direct.iter().map(|b| b[t - 1])),
        }
    }

    /// Number of batches behind the standard errors.
    pub fn batches(&self) -> usize {
        self.batch_direct.len()
    }
}

fn cumulative(values: impl Iterator<Item = f64>) -> Vec<f64> {
    values
        .scan(0.0, |acc, v| {
            *acc += v;
            Some(*acc)
        })
        .collect()
}

pub fn monte_carlo_report(config: &ExperimentConfig) -> Result<RegretReport> {
    config.validate()?;
    let env = &config.environment;
    let arms = env.num_arms();
    let horizon = config.horizon;
    let runs = config.runs;
    config.policy.build(env)?;
    let gaps = env.gaps();
    let lambda = env.risk().lambda();

    let batches = SEM_BATCHES.min(runs);
    let tallies: Vec<Tally> = (0..batches)
        .into_par_iter()
        .map(|b| {
            let start = b * runs / batches;
            let end = (b + 1) * runs / batches;
            let mut tally = Tally::new(horizon, arms);
            let mut policy = config
                .policy
                .build(env)
                .expect("configuration validated above");
            for i in start..end {
                let seed = config.base_seed.wrapping_add(i as u64);
                run_episode_with(env, policy.as_mut(), horizon, seed, |t, arm, reward| {
                    tally.counts[(t - 1) * arms + arm] += 1;
                    tally.played[t - 1].push(reward);
                });
                tally.runs += 1;
            }
            tally
        })
        .collect();

    let mut total = Tally::new(horizon, arms);
    let mut batch_decomposed = Vec::with_capacity(batches);
    let mut batch_direct = Vec::with_capacity(batches);
    for tally in &tallies {
        total.merge(tally);
        let inc = tally.increments(&gaps, lambda);
        batch_decomposed.push(cumulative(inc.iter().map(|&(a, b, _)| a + b)));
        batch_direct.push(cumulative(inc.iter().map(|&(_, _, d)| d)));
    }

    let inc = total.increments(&gaps, lambda);
    let prob_hat: Vec<Vec<f64>> = (0..horizon)
        .map(|t| total.probabilities(t).collect())
        .collect();
    let mut pulls_hat = vec![0.0; arms];
    for row in &prob_hat {
        for (acc, p) in pulls_hat.iter_mut().zip(row) {
            *acc += p;
        }
    }
    let term1: f64 = pulls_hat.iter().zip(&gaps.gamma).map(|(n, g)| n * g).sum();
    let term2_series: Vec<f64> = inc.iter().map(|&(_, b, _)| b).collect();
    let direct_series: Vec<f64> = inc.iter().map(|&(_, _, d)| d).collect();
    let term2: f64 = term2_series.iter().sum();
    let direct_regret: f64 = direct_series.iter().sum();

    let mut report = RegretReport {
        policy: config.policy.label(),
        horizon,
        runs,
        base_seed: config.base_seed,
        prob_hat,
        pulls_hat,
        term1_series: inc.iter().map(|&(a, _, _)| a).collect(),
        term2_series,
        direct_series,
        term1,
        term2,
        decomposed_regret: term1 + term2,
        direct_regret,
        decomposed_sem: 0.0,
        direct_sem: 0.0,
        batch_decomposed,
        batch_direct,
    };
    let last = report.checkpoint(horizon);
    report.decomposed_sem = last.decomposed_sem;
    report.direct_sem = last.direct_sem;
    Ok(report)
}

/// Outcome of comparing the decomposed and direct estimates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Agreement {
    pub decomposed: f64,
    pub direct: f64,
    pub difference: f64,
    pub combined_sem: f64,
    pub agree: bool,
}

/// Checks `|decomposed − direct| ≤ 3 · sqrt(sem_dec² + sem_dir²)`.
///
/// The decomposed estimate is read from `decomposed`, the direct one from
/// `direct`; both must come from the same ensemble of episodes.
pub fn estimator_agreement(decomposed: &RegretReport, direct: &RegretReport) -> Result<Agreement> {
    if decomposed.base_seed != direct.base_seed
        || decomposed.runs != direct.runs
        || decomposed.horizon != direct.horizon
        || decomposed.policy != direct.policy
    {
        return Err(Error::MismatchedEnsembles);
    }
    let dec = decomposed.decomposed_regret;
    let dir = direct.direct_regret;
    let combined_sem = decomposed.decomposed_sem.hypot(direct.direct_sem);
    let difference = dec - dir;
    Ok(Agreement {
        decomposed: dec,
        direct: dir,
        difference,
        combined_sem,
        // tiny absolute floor so exact zero-noise ensembles compare equal
        agree: difference.abs() <= 3.0 * combined_sem + 1e-9,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::policy::FeedbackKind;
    use crate::risk::{ArmDistribution, RiskTolerance};

    fn config(
        env: Environment,
        policy: PolicyConfig,
        horizon: usize,
        runs: usize,
    ) -> ExperimentConfig {
        ExperimentConfig {
            environment: env,
            policy,
            horizon,
            runs,
            base_seed: 11,
        }
    }

    #[test]
    fn rejects_single_run() {
        let env = Environment::canonical(2.5, RiskTolerance::new(1.0).unwrap()).unwrap();
        let cfg = config(env, PolicyConfig::oracle(), 10, 1);
        assert!(matches!(
            monte_carlo_report(&cfg),
            Err(Error::TooFewRuns(1))
        ));
    }

    #[test]
    fn counting_identities() {
        let env = Environment::canonical(2.2, RiskTolerance::new(1.0).unwrap()).unwrap();
        let report = monte_carlo_report(&config(env, PolicyConfig::mvlcb(), 50, 37)).unwrap();
        for row in &report.prob_hat {
            assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
        assert!((report.pulls_hat.iter().sum::<f64>() - 50.0).abs() < 1e-9);
        assert_eq!(report.batches(), 20);
        let cp = report.checkpoint(50);
        assert!((cp.decomposed - report.decomposed_regret).abs() < 1e-9);
        assert!((cp.direct - report.direct_regret).abs() < 1e-9);
    }

    #[test]
    fn identical_arms_have_zero_decomposed_regret() {
        let arm = ArmDistribution::Bernoulli { p: 0.4 };
        let env =
            Environment::new(vec![arm.clone(), arm], RiskTolerance::new(1.0).unwrap()).unwrap();
        let report = monte_carlo_report(&config(env, PolicyConfig::uniform(), 40, 64)).unwrap();
        assert_eq!(report.decomposed_regret, 0.0);
    }

    #[test]
    fn oracle_has_zero_decomposed_regret() {
        let env = Environment::canonical(2.1, RiskTolerance::new(1.0).unwrap()).unwrap();
        let policy = PolicyConfig::oracle().with_feedback(FeedbackKind::Full);
        let report = monte_carlo_report(&config(env, policy, 30, 40)).unwrap();
        assert_eq!(report.term1, 0.0);
        assert_eq!(report.term2, 0.0);
        assert!(report.direct_regret.abs() <= 3.0 * report.direct_sem + 1e-9);
    }

    #[test]
    fn agreement_rejects_different_ensembles() {
        let env = Environment::canonical(2.5, RiskTolerance::new(1.0).unwrap()).unwrap();
        let a = monte_carlo_report(&config(env.clone(), PolicyConfig::oracle(), 10, 4)).unwrap();
        let mut cfg = config(env, PolicyConfig::oracle(), 10, 4);
        cfg.base_seed = 12;
        let b = monte_carlo_report(&cfg).unwrap();
        assert!(matches!(
            estimator_agreement(&a, &b),
            Err(Error::MismatchedEnsembles)
        ));
        assert!(estimator_agreement(&a, &a).unwrap().agree);
    }
}
