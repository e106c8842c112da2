//! Confidence-bound action elimination.
//!
//! Play proceeds in steps `n = 0, 1, 2, …` with gap guess
//! `Γ̂_n = Γ̂₀ · 2^(−n)`. In step `n` every active arm is played `u_n` times
//! in an ascending cycle. Under full information `u_n` shrinks by `|K_n|`,
//! but each round updates every arm, so the per-arm sample count matches
//! the bandit step. The step's own samples then decide elimination:
//! arm `k` is dropped when `M̄V_k − Γ̂_n/4 > min_j M̄V_j + Γ̂_n/4`.
//!
//! A step cut short by the horizon never eliminates. Once a single arm
//! survives it is played until the end.

use super::{Feedback, FeedbackKind, Policy};
use crate::risk::RiskTolerance;
use crate::stats::SampleStats;

// keeps the u64 conversion finite for vanishing Γ̂
const MAX_STEP_LEN: f64 = 1e18;

/// Bandit step length `⌈C ln T / Γ̂²⌉`, at least one play.
pub fn step_len(big_c: f64, horizon: f64, gammahat: f64) -> u64 {
    let raw = (big_c * horizon.ln() / (gammahat * gammahat)).ceil();
    raw.clamp(1.0, MAX_STEP_LEN) as u64
}

/// Full-information step length `⌈C ln T / (|K_n| Γ̂²)⌉`, at least one round.
pub fn full_step_len(active: usize, big_c: f64, horizon: f64, gammahat: f64) -> u64 {
    let raw = (big_c * horizon.ln() / (active as f64 * gammahat * gammahat)).ceil();
    raw.clamp(1.0, MAX_STEP_LEN) as u64
}

#[derive(Debug, Clone)]
pub struct CbAe {
    big_c: f64,
    gammahat0: f64,
    risk: RiskTolerance,
    kind: FeedbackKind,
    horizon: usize,
    step: u32,
    active: Vec<usize>,
    step_stats: Vec<SampleStats>,
    /// `u_n` of the current step.
    step_len: u64,
    /// Plays (bandit) or rounds (full) completed in the current step.
    position: u64,
    history: Vec<StepRecord>,
}

/// Summary of a completed step.
#[derive(Debug, Clone, PartialEq)]
pub struct StepRecord {
    pub step: u32,
    pub gammahat: f64,
    pub step_len: u64,
    pub sample_mv: Vec<(usize, f64)>,
    pub eliminated: Vec<usize>,
}

impl CbAe {
    pub fn new(big_c: f64, gammahat0: f64, risk: RiskTolerance, kind: FeedbackKind) -> Self {
        Self {
            big_c,
            gammahat0,
            risk,
            kind,
            horizon: 0,
            step: 0,
            active: Vec::new(),
            step_stats: Vec::new(),
            step_len: 0,
            position: 0,
            history: Vec::new(),
        }
    }

    pub fn step(&self) -> u32 {
        self.step
    }

    /// `Γ̂_n` of the current step.
    pub fn gammahat(&self) -> f64 {
        self.gammahat0 * 0.5_f64.powi(self.step as i32)
    }

    pub fn active(&self) -> &[usize] {
        &self.active
    }

    pub fn current_step_len(&self) -> u64 {
        self.step_len
    }

    pub fn history(&self) -> &[StepRecord] {
        &self.history
    }

    fn compute_step_len(&self) -> u64 {
        let horizon = self.horizon as f64;
        match self.kind {
            FeedbackKind::Bandit => step_len(self.big_c, horizon, self.gammahat()),
            FeedbackKind::Full => {
                full_step_len(self.active.len(), self.big_c, horizon, self.gammahat())
            }
        }
    }

    fn step_complete(&self) -> bool {
        self.position == self.step_len * self.active.len() as u64
    }

    /// Applies the elimination rule to the current step's statistics and
    /// opens the next step.
    fn eliminate(&mut self) {
        let g = self.gammahat();
        let sample_mv: Vec<(usize, f64)> = self
            .active
            .iter()
            .map(|&k| {
                let mv = self.step_stats[k]
                    .sample_mv(self.risk)
                    .expect("completed step has samples for every active arm");
                (k, mv)
            })
            .collect();
        let best = sample_mv
            .iter()
            .map(|&(_, mv)| mv)
            .fold(f64::INFINITY, f64::min);
        let (kept, eliminated): (Vec<_>, Vec<_>) = sample_mv
            .iter()
            .partition(|&&(_, mv)| !(mv - g / 4.0 > best + g / 4.0));
        self.active = kept.into_iter().map(|&(k, _)| k).collect();
        let eliminated = eliminated.into_iter().map(|&(k, _)| k).collect();
        self.history.push(StepRecord {
            step: self.step,
            gammahat: g,
            step_len: self.step_len,
            sample_mv,
            eliminated,
        });

        self.step += 1;
        self.position = 0;
        for s in &mut self.step_stats {
            *s = SampleStats::new();
        }
        self.step_len = self.compute_step_len();
    }
}

impl Policy for CbAe {
    fn name(&self) -> String {
        match self.kind {
            FeedbackKind::Bandit => "cbae-bandit".into(),
            FeedbackKind::Full => "cbae-full".into(),
        }
    }

    fn feedback_kind(&self) -> FeedbackKind {
        self.kind
    }

    fn reset(&mut self, arms: usize, horizon: usize, _seed: u64) {
        self.horizon = horizon;
        self.step = 0;
        self.active = (0..arms).collect();
        self.step_stats = vec![SampleStats::new(); arms];
        self.position = 0;
        self.history.clear();
        self.step_len = self.compute_step_len();
    }

    fn select(&mut self, _t: usize) -> usize {
        let n = self.active.len() as u64;
        self.active[(self.position % n) as usize]
    }

    fn observe(&mut self, _t: usize, feedback: &Feedback<'_>) {
        if self.active.len() == 1 {
            return;
        }
        match (self.kind, *feedback) {
            (FeedbackKind::Bandit, Feedback::Bandit { arm, reward }) => {
                self.step_stats[arm].push(reward);
            }
            (FeedbackKind::Full, Feedback::Full { rewards }) => {
                for &k in &self.active {
                    self.step_stats[k].push(rewards[k]);
                }
            }
            (kind, _) => panic!("cbae configured for {kind:?} feedback received the other kind"),
        }
        self.position += 1;
        if self.step_complete() {
            self.eliminate();
        }
    }

    fn clone_box(&self) -> Box<dyn Policy> {
        Box::new(self.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn risk(lambda: f64) -> RiskTolerance {
        RiskTolerance::new(lambda).unwrap()
    }

    #[test]
    fn step_lengths() {
        assert_eq!(step_len(16.0, 1e4, 0.25), 2358);
        assert_eq!(full_step_len(4, 16.0, 1e4, 0.25), 590);
        assert_eq!(full_step_len(1, 16.0, 1e4, 0.25), step_len(16.0, 1e4, 0.25));
        let e = std::f64::consts::E;
        for k in 1..=5 {
            assert_eq!(
                full_step_len(k, 16.0, e, 1.0),
                (16 + k as u64 - 1) / k as u64
            );
        }
        // ln 1 = 0 would give an empty step
        assert_eq!(step_len(16.0, 1.0, 1.0), 1);
    }

    #[test]
    fn ascending_cycle_within_step() {
        // u_0 = ⌈ln 7⌉ = 2
        let mut p = CbAe::new(1.0, 1.0, risk(1.0), FeedbackKind::Bandit);
        p.reset(3, 7, 0);
        assert_eq!(p.current_step_len(), 2);
        let mut order = Vec::new();
        for t in 1..=6 {
            let arm = p.select(t);
            order.push(arm);
            p.observe(t, &Feedback::Bandit { arm, reward: 0.0 });
        }
        assert_eq!(order, vec![0, 1, 2, 0, 1, 2]);
        assert_eq!(p.step(), 1);
        assert_eq!(p.gammahat(), 0.5);
    }

    fn drive_step(p: &mut CbAe, rewards: &[f64]) {
        let plays = p.current_step_len() * p.active().len() as u64;
        for i in 0..plays {
            let arm = p.select(i as usize + 1);
            p.observe(
                i as usize + 1,
                &Feedback::Bandit {
                    arm,
                    reward: rewards[arm],
                },
            );
        }
    }

    #[test]
    fn eliminates_separated_arm() {
        // constant rewards: step MVs are -λ·reward exactly
        let mut p = CbAe::new(1.0, 1.0, risk(1.0), FeedbackKind::Bandit);
        p.reset(2, 7, 0);
        drive_step(&mut p, &[0.0, -1.0]);
        // step MVs (0, 1): 1 - 0.25 > 0 + 0.25
        assert_eq!(p.active(), &[0]);
        assert_eq!(p.history()[0].eliminated, vec![1]);
        for t in 0..10 {
            assert_eq!(p.select(t), 0);
        }
    }

    #[test]
    fn keeps_close_arms() {
        let mut p = CbAe::new(1.0, 1.0, risk(1.0), FeedbackKind::Bandit);
        p.reset(2, 7, 0);
        drive_step(&mut p, &[0.0, -0.4]);
        // 0.4 - 0.25 > 0.25 fails
        assert_eq!(p.active(), &[0, 1]);

        let mut p = CbAe::new(1.0, 1.0, risk(1.0), FeedbackKind::Bandit);
        p.reset(3, 7, 0);
        drive_step(&mut p, &[2.0, 2.0, 2.0]);
        assert_eq!(p.active(), &[0, 1, 2]);
    }

    #[test]
    fn gammahat_halves_each_step() {
        let mut p = CbAe::new(1.0, 1.0, risk(0.0), FeedbackKind::Bandit);
        p.reset(2, 7, 0);
        for n in 0..4 {
            assert_eq!(p.gammahat(), 0.5_f64.powi(n));
            drive_step(&mut p, &[1.0, 1.0]);
        }
        assert_eq!(p.step(), 4);
    }

    #[test]
    fn full_information_step() {
        let mut p = CbAe::new(16.0, 1.0, risk(1.0), FeedbackKind::Full);
        p.reset(4, 10_000, 0);
        let u0 = full_step_len(4, 16.0, 1e4, 1.0);
        assert_eq!(p.current_step_len(), u0);
        let rewards = [0.0, -5.0, 0.0, 0.0];
        for t in 1..=4 * u0 as usize {
            let arm = p.select(t);
            assert_eq!(arm, (t - 1) % 4);
            p.observe(t, &Feedback::Full { rewards: &rewards });
            if t < 4 * u0 as usize {
                assert_eq!(p.step(), 0);
            }
        }
        assert_eq!(p.step(), 1);
        assert_eq!(p.history()[0].step_len, u0);
        assert_eq!(p.active(), &[0, 2, 3]);
        assert_eq!(p.current_step_len(), full_step_len(3, 16.0, 1e4, 0.5));
    }
}
