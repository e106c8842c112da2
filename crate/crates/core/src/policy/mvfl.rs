use super::{argmin, Feedback, FeedbackKind, Policy};
use crate::risk::RiskTolerance;
use crate::stats::SampleStats;

/// Follow-the-leader on sample mean-variance (full information).
///
/// Plays arm 0 in the first round, then the arm with the smallest sample
/// MV over all rounds observed so far.
#[derive(Debug, Clone)]
pub struct MvFl {
    risk: RiskTolerance,
    stats: Vec<SampleStats>,
}

impl MvFl {
    pub fn new(risk: RiskTolerance) -> Self {
        Self {
            risk,
            stats: Vec::new(),
        }
    }
}

impl Policy for MvFl {
    fn name(&self) -> String {
        "mvfl".into()
    }

    fn feedback_kind(&self) -> FeedbackKind {
        FeedbackKind::Full
    }

    fn reset(&mut self, arms: usize, _horizon: usize, _seed: u64) {
        self.stats = vec![SampleStats::new(); arms];
    }

    fn select(&mut self, _t: usize) -> usize {
        if self.stats[0].count() == 0 {
            return 0;
        }
        argmin(
            self.stats
                .iter()
                .map(|s| s.sample_mv(self.risk).unwrap_or(f64::INFINITY)),
        )
    }

    fn observe(&mut self, _t: usize, feedback: &Feedback<'_>) {
        match *feedback {
            Feedback::Full { rewards } => {
                for (stats, &x) in self.stats.iter_mut().zip(rewards) {
                    stats.push(x);
                }
            }
            Feedback::Bandit { .. } => panic!("mvfl received bandit feedback"),
        }
    }

    fn clone_box(&self) -> Box<dyn Policy> {
        Box::new(self.clone())
    }
}
