//! Counter-based random streams.
//!
//! Every reward `X_{k,t}` of an episode is drawn from a generator keyed by
//! `(seed, k, t)` alone, so the value does not depend on which arms were
//! pulled before, on the feedback model, or on the policy being evaluated.
//! Two policies run with the same seed therefore face identical reward
//! tables (common random numbers).

use rand::SeedableRng;
use rand_xoshiro::Xoshiro256PlusPlus;

use crate::risk::Environment;

/// Generator type used for every stream in the crate.
pub type RngState = Xoshiro256PlusPlus;

/// Stream id reserved for a policy's private randomness.
const POLICY_STREAM: u64 = u64::MAX;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Mixes `(seed, stream, index)` into a single 64-bit key.
pub fn stream_key(seed: u64, stream: u64, index: u64) -> u64 {
    splitmix64(splitmix64(splitmix64(seed) ^ stream) ^ index)
}

/// Generator for position `index` of stream `stream`.
pub fn keyed_rng(seed: u64, stream: u64, index: u64) -> RngState {
    RngState::seed_from_u64(stream_key(seed, stream, index))
}

/// Private generator handed to stochastic policies.
pub fn policy_rng(seed: u64) -> RngState {
    keyed_rng(seed, POLICY_STREAM, 0)
}

/// The reward table of one episode.
#[derive(Debug, Clone, Copy)]
pub struct RewardTable {
    seed: u64,
}

impl RewardTable {
    pub fn new(seed: u64) -> Self {
        Self { seed }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Reward of `arm` at round `t` (1-based).
    pub fn reward(&self, env: &Environment, arm: usize, t: usize) -> f64 {
        let mut rng = keyed_rng(self.seed, arm as u64, t as u64);
        env.arms()[arm].sample(&mut rng)
    }
}
