//! Numerical checks of the analytical results.

mod bounds;
mod concentration;
mod kl;
mod lower_bound;

pub use bounds::{
    bound_cbae, bound_cbae_terms, bound_mvfl, bound_mvlcb, BoundInputs, BoundValue, CbaeBoundTerms,
};
pub use concentration::{concentration_bound, empirical_tail, TailEstimate};
pub use kl::{bh_error_floor_check, kl_bernoulli, BinaryTest, ErrorFloorVerdict};
pub use lower_bound::{
    coupling_floor, flip_threshold, lb_env_pair, worst_case_gamma, CouplingFloor, LowerBoundPair,
    MIN_COUPLING_HORIZON,
};
