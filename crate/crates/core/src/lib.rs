//! Simulation and verification toolkit for risk-averse online learning
//! under the mean-variance criterion.
//!
//! The crate is organised in four layers:
//!
//! - [`risk`] and [`stats`]: reward distributions, the mean-variance measure
//!   `σ² − λμ`, environment gap profiles and streaming sample statistics.
//! - [`policy`]: MV-LCB, CB-AE (bandit and full-information), MV-FL and two
//!   baselines behind one [`Policy`] contract.
//! - [`regret`]: seeded episode simulation with common random numbers,
//!   Monte-Carlo regret estimation through two independent estimators, and
//!   an exhaustive enumeration oracle for small instances.
//! - [`theory`]: numerical checks of the concentration bound, Bernoulli KL
//!   divergence, the coupling inequality, the worst-case construction and
//!   the closed-form regret upper bounds.
//!
//! Arm indices are zero-based throughout the API.

pub mod error;
pub mod policy;
pub mod regret;
pub mod risk;
pub mod rng;
pub mod stats;
pub mod theory;

pub use error::{Error, Result};
pub use policy::{Feedback, FeedbackKind, Policy, PolicyConfig, PolicyKind};
pub use regret::{
    enumerate_exact, estimator_agreement, monte_carlo_report, run_episode, Agreement, ExactReport,
    ExperimentConfig, RegretReport, Trajectory,
};
pub use risk::{ArmDistribution, Environment, GapProfile, RiskTolerance, SubGaussianParams};
pub use stats::SampleStats;
