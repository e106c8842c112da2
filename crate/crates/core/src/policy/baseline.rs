use rand::Rng;

use super::{Feedback, FeedbackKind, Policy};
use crate::rng::{policy_rng, RngState};

/// Always plays one fixed arm. Built from the true gap profile this is the
/// optimal single-action policy.
#[derive(Debug, Clone)]
pub struct Oracle {
    arm: usize,
    kind: FeedbackKind,
}

impl Oracle {
    pub fn new(arm: usize, kind: FeedbackKind) -> Self {
        Self { arm, kind }
    }
}

impl Policy for Oracle {
    fn name(&self) -> String {
        "oracle".into()
    }

    fn feedback_kind(&self) -> FeedbackKind {
        self.kind
    }

    fn reset(&mut self, _arms: usize, _horizon: usize, _seed: u64) {}

    fn select(&mut self, _t: usize) -> usize {
        self.arm
    }

    fn observe(&mut self, _t: usize, _feedback: &Feedback<'_>) {}

    fn clone_box(&self) -> Box<dyn Policy> {
        Box::new(self.clone())
    }
}

/// Picks an arm uniformly at random from its own seeded stream.
#[derive(Debug, Clone)]
pub struct UniformRandom {
    kind: FeedbackKind,
    arms: usize,
    rng: RngState,
}

impl UniformRandom {
    pub fn new(kind: FeedbackKind) -> Self {
        Self {
            kind,
            arms: 0,
            rng: policy_rng(0),
        }
    }
}

impl Policy for UniformRandom {
    fn name(&self) -> String {
        "uniform".into()
    }

    fn feedback_kind(&self) -> FeedbackKind {
        self.kind
    }

    fn is_deterministic(&self) -> bool {
        false
    }

    fn reset(&mut self, arms: usize, _horizon: usize, seed: u64) {
        self.arms = arms;
        self.rng = policy_rng(seed);
    }

    fn select(&mut self, _t: usize) -> usize {
        self.rng.random_range(0..self.arms)
    }

    fn observe(&mut self, _t: usize, _feedback: &Feedback<'_>) {}

    fn clone_box(&self) -> Box<dyn Policy> {
        Box::new(self.clone())
    }
}
