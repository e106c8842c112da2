//! Episode simulation and regret estimation.

mod episode;
mod exact;
mod montecarlo;

pub use episode::{run_episode, run_episode_with, Trajectory};
pub use exact::{
    enumerate_exact, enumerate_policy, ExactReport, DEFAULT_BRANCH_BUDGET, IDENTITY_TOLERANCE,
};
pub use montecarlo::{
    estimator_agreement, monte_carlo_report, Agreement, Checkpoint, ExperimentConfig, RegretReport,
    SEM_BATCHES,
};
