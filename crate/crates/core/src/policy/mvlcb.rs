use super::{argmin, Feedback, FeedbackKind, Policy};
use crate::risk::RiskTolerance;
use crate::stats::SampleStats;

/// Lower confidence bound `M̄V − sqrt(c ln t / τ)`; `−∞` for an unplayed arm.
pub fn lcb_index(stats: &SampleStats, t: usize, c: f64, risk: RiskTolerance) -> f64 {
    match stats.sample_mv(risk) {
        Ok(mv) => mv - (c * (t as f64).ln() / stats.count() as f64).sqrt(),
        Err(_) => f64::NEG_INFINITY,
    }
}

/// Mean-variance lower confidence bound policy (bandit feedback).
///
/// Unplayed arms have index `−∞`, so the first `K` rounds visit the arms in
/// order.
#[derive(Debug, Clone)]
pub struct MvLcb {
    c: f64,
    risk: RiskTolerance,
    stats: Vec<SampleStats>,
}

impl MvLcb {
    pub fn new(c: f64, risk: RiskTolerance) -> Self {
        Self {
            c,
            risk,
            stats: Vec::new(),
        }
    }

    pub fn stats(&self) -> &[SampleStats] {
        &self.stats
    }
}

impl Policy for MvLcb {
    fn name(&self) -> String {
        "mvlcb".into()
    }

    fn feedback_kind(&self) -> FeedbackKind {
        FeedbackKind::Bandit
    }

    fn reset(&mut self, arms: usize, _horizon: usize, _seed: u64) {
        self.stats = vec![SampleStats::new(); arms];
    }

    fn select(&mut self, t: usize) -> usize {
        argmin(
            self.stats
                .iter()
                .map(|s| lcb_index(s, t, self.c, self.risk)),
        )
    }

    fn observe(&mut self, _t: usize, feedback: &Feedback<'_>) {
        match *feedback {
            Feedback::Bandit { arm, reward } => self.stats[arm].push(reward),
            Feedback::Full { .. } => panic!("mvlcb received full-information feedback"),
        }
    }

    fn clone_box(&self) -> Box<dyn Policy> {
        Box::new(self.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn risk(lambda: f64) -> RiskTolerance {
        RiskTolerance::new(lambda).unwrap()
    }

    #[test]
    fn index_examples() {
        assert_eq!(
            lcb_index(&SampleStats::new(), 5, 1.0, risk(1.0)),
            f64::NEG_INFINITY
        );

        let single = SampleStats::from_slice(&[0.0]);
        assert_eq!(lcb_index(&single, 1, 1.0, risk(1.0)), 0.0);

        // four observations with sample MV 0.5 at λ = 0: values ±sqrt(0.5)
        let s = 0.5_f64.sqrt();
        let four = SampleStats::from_slice(&[s, -s, s, -s]);
        assert_relative_eq!(
            four.sample_mv(risk(0.0)).unwrap(),
            0.5,
            max_relative = 1e-15
        );
        let t_e = std::f64::consts::E;
        let idx = four.sample_mv(risk(0.0)).unwrap() - (1.0 * t_e.ln() / 4.0).sqrt();
        assert_relative_eq!(idx, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn first_rounds_are_round_robin() {
        let mut p = MvLcb::new(1.0, risk(1.0));
        p.reset(5, 100, 0);
        for t in 1..=5 {
            let arm = p.select(t);
            assert_eq!(arm, t - 1);
            p.observe(
                t,
                &Feedback::Bandit {
                    arm,
                    reward: 10.0 * t as f64,
                },
            );
        }
    }

    #[test]
    fn selects_smallest_index() {
        let mut p = MvLcb::new(1.0, risk(0.0));
        p.reset(2, 10, 0);
        // arm 0 sees a spread sample, arm 1 a constant one
        for (arm, reward) in [(0, 0.0), (1, 3.0), (0, 2.0), (1, 3.0)] {
            p.observe(0, &Feedback::Bandit { arm, reward });
        }
        // MVs: arm 0 variance 1, arm 1 variance 0; identical bonuses
        assert_eq!(p.select(5), 1);
    }
}
