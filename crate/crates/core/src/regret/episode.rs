use serde::Serialize;

use crate::policy::{Feedback, FeedbackKind, Policy};
use crate::risk::Environment;
use crate::rng::RewardTable;

/// Actions and realised rewards of one episode.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    pub actions: Vec<usize>,
    pub played_rewards: Vec<f64>,
    pub seed: u64,
}

/// Runs one episode, reporting `(t, action, reward)` for every round.
///
/// In full-information mode all `K` rewards of the round are drawn and
/// delivered; in bandit mode only the played arm's. Either way the reward of
/// arm `k` at round `t` depends on `(seed, k, t)` only.
pub fn run_episode_with<F>(
    env: &Environment,
    policy: &mut dyn Policy,
    horizon: usize,
    seed: u64,
    mut visit: F,
) where
    F: FnMut(usize, usize, f64),
{
    let arms = env.num_arms();
    let table = RewardTable::new(seed);
    policy.reset(arms, horizon, seed);
    let mut rewards = vec![0.0; arms];
    for t in 1..=horizon {
        let arm = policy.select(t);
        debug_assert!(arm < arms, "policy selected arm {arm} of {arms}");
        let reward = match policy.feedback_kind() {
            FeedbackKind::Bandit => {
                let reward = table.reward(env, arm, t);
                policy.observe(t, &Feedback::Bandit { arm, reward });
                reward
            }
            FeedbackKind::Full => {
                for (k, slot) in rewards.iter_mut().enumerate() {
                    *slot = table.reward(env, k, t);
                }
                policy.observe(t, &Feedback::Full { rewards: &rewards });
                rewards[arm]
            }
        };
        visit(t, arm, reward);
    }
}

pub fn run_episode(
    env: &Environment,
    policy: &mut dyn Policy,
    horizon: usize,
    seed: u64,
) -> Trajectory {
    let mut actions = Vec::with_capacity(horizon);
    let mut played_rewards = Vec::with_capacity(horizon);
    run_episode_with(env, policy, horizon, seed, |_, arm, reward| {
        actions.push(arm);
        played_rewards.push(reward);
    });
    Trajectory {
        actions,
        played_rewards,
        seed,
    }
}
