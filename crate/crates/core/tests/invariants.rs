use approx::assert_relative_eq;
use mvbandit::policy::FeedbackKind;
use mvbandit::regret::{enumerate_exact, DEFAULT_BRANCH_BUDGET};
use mvbandit::rng::RewardTable;
use mvbandit::{
    run_episode, ArmDistribution, Environment, PolicyConfig, RiskTolerance, SampleStats,
};
use proptest::prelude::*;

fn values() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1e3..1e3f64, 1..200)
}

fn two_atom() -> impl Strategy<Value = ArmDistribution> {
    (-3.0..3.0f64, -3.0..3.0f64, 0.05..0.95f64).prop_map(|(a, b, p)| {
        ArmDistribution::DiscreteFinite {
            atoms: vec![(a, p), (b, 1.0 - p)],
        }
    })
}

fn deterministic_policies() -> Vec<PolicyConfig> {
    vec![
        PolicyConfig::mvlcb(),
        PolicyConfig::cbae(FeedbackKind::Bandit).with_big_c(0.5),
        PolicyConfig::oracle(),
    ]
}

proptest! {
    #[test]
    fn streaming_matches_batch(xs in values()) {
        let s = SampleStats::from_slice(&xs);
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
        prop_assert!((s.mean() - mean).abs() <= 1e-9 * (1.0 + mean.abs()));
        prop_assert!((s.variance() - var).abs() <= 1e-8 * (1.0 + var));
        prop_assert!(s.variance() >= 0.0);
    }

    #[test]
    fn merge_matches_concatenation(xs in values(), ys in values()) {
        let mut a = SampleStats::from_slice(&xs);
        a.merge(&SampleStats::from_slice(&ys));
        let all: Vec<f64> = xs.iter().chain(&ys).copied().collect();
        let b = SampleStats::from_slice(&all);
        prop_assert_eq!(a.count(), b.count());
        prop_assert!((a.mean() - b.mean()).abs() <= 1e-9 * (1.0 + b.mean().abs()));
        prop_assert!((a.variance() - b.variance()).abs() <= 1e-8 * (1.0 + b.variance()));
    }

    #[test]
    fn sample_mv_is_variance_minus_lambda_mean(xs in values(), lambda in 0.0..5.0f64) {
        let s = SampleStats::from_slice(&xs);
        let risk = RiskTolerance::new(lambda).unwrap();
        prop_assert_eq!(s.sample_mv(risk).unwrap(), s.variance() - lambda * s.mean());
    }

    #[test]
    fn shift_moves_mv_by_lambda(xs in values(), shift in -50.0..50.0f64, lambda in 0.0..5.0f64) {
        let risk = RiskTolerance::new(lambda).unwrap();
        let base = SampleStats::from_slice(&xs).sample_mv(risk).unwrap();
        let shifted: Vec<f64> = xs.iter().map(|x| x + shift).collect();
        let moved = SampleStats::from_slice(&shifted).sample_mv(risk).unwrap();
        prop_assert!((moved - (base - lambda * shift)).abs() <= 1e-7 * (1.0 + base.abs() + shift.abs()));
    }

    #[test]
    fn gaps_are_nonnegative_with_zero_at_optimum(
        arms in prop::collection::vec(two_atom(), 2..6),
        lambda in 0.0..3.0f64,
    ) {
        let env = Environment::new(arms, RiskTolerance::new(lambda).unwrap()).unwrap();
        let g = env.gaps();
        prop_assert_eq!(g.gamma[g.k_star], 0.0);
        prop_assert!(g.gamma.iter().all(|&x| x >= 0.0));
        prop_assert!(g.gamma[..g.k_star].iter().all(|&x| x > 0.0));
    }

    #[test]
    fn episodes_are_reproducible(seed in any::<u64>(), lambda in 0.0..2.0f64) {
        let env = Environment::canonical(2.2, RiskTolerance::new(lambda).unwrap()).unwrap();
        for config in [
            PolicyConfig::mvlcb(),
            PolicyConfig::cbae(FeedbackKind::Bandit),
            PolicyConfig::cbae(FeedbackKind::Full),
            PolicyConfig::mvfl(),
            PolicyConfig::uniform(),
        ] {
            let a = run_episode(&env, config.build(&env).unwrap().as_mut(), 200, seed);
            let b = run_episode(&env, config.build(&env).unwrap().as_mut(), 200, seed);
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn policies_see_common_random_numbers(seed in any::<u64>()) {
        let env = Environment::canonical(2.5, RiskTolerance::new(1.0).unwrap()).unwrap();
        let table = RewardTable::new(seed);
        for config in [PolicyConfig::mvlcb(), PolicyConfig::uniform(), PolicyConfig::oracle()] {
            let tr = run_episode(&env, config.build(&env).unwrap().as_mut(), 100, seed);
            for (i, (&arm, &x)) in tr.actions.iter().zip(&tr.played_rewards).enumerate() {
                prop_assert_eq!(x, table.reward(&env, arm, i + 1));
            }
        }
    }

    #[test]
    fn exact_identity_on_random_instances(
        arms in prop::collection::vec(two_atom(), 2..4),
        lambda in 0.0..2.0f64,
        horizon in 1usize..5,
    ) {
        let env = Environment::new(arms, RiskTolerance::new(lambda).unwrap()).unwrap();
        for config in deterministic_policies() {
            let r = enumerate_exact(&env, &config, horizon, DEFAULT_BRANCH_BUDGET).unwrap();
            prop_assert!(r.identity_holds(), "{} gap {}", r.policy, r.identity_gap());
            prop_assert!(r.term2 >= -1e-12);
            for row in &r.prob {
                prop_assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            }
        }
        for config in [PolicyConfig::mvfl(), PolicyConfig::cbae(FeedbackKind::Full).with_big_c(0.5)] {
            let r = enumerate_exact(&env, &config, horizon.min(3), DEFAULT_BRANCH_BUDGET).unwrap();
            prop_assert!(r.identity_holds(), "{} gap {}", r.policy, r.identity_gap());
        }
    }
}

#[test]
fn mvlcb_explores_in_index_order() {
    let env = Environment::canonical(2.5, RiskTolerance::new(1.0).unwrap()).unwrap();
    for seed in 0..20 {
        let tr = run_episode(
            &env,
            PolicyConfig::mvlcb().build(&env).unwrap().as_mut(),
            4,
            seed,
        );
        assert_eq!(tr.actions, [0, 1, 2, 3]);
    }
}

#[test]
fn cbae_never_eliminates_every_arm() {
    let env = Environment::canonical(2.0, RiskTolerance::new(1.0).unwrap()).unwrap();
    for kind in [FeedbackKind::Bandit, FeedbackKind::Full] {
        let config = PolicyConfig::cbae(kind).with_big_c(0.05);
        for seed in 0..50 {
            let tr = run_episode(&env, config.build(&env).unwrap().as_mut(), 3000, seed);
            assert!(tr.actions.iter().all(|&a| a < 4));
        }
    }
}

#[test]
fn oracle_regret_is_zero_in_expectation() {
    let env = Environment::canonical(2.1, RiskTolerance::new(1.0).unwrap()).unwrap();
    let r = enumerate_exact(&env, &PolicyConfig::oracle(), 5, DEFAULT_BRANCH_BUDGET).unwrap();
    assert_relative_eq!(r.decomposed_regret, 0.0);
    assert!(r.direct_regret.abs() < 1e-12);
}
