use mvbandit::policy::FeedbackKind;
use mvbandit::{
    estimator_agreement, monte_carlo_report, Environment, ExperimentConfig, PolicyConfig,
    RiskTolerance,
};

fn config(policy: PolicyConfig, horizon: usize, runs: usize, seed: u64) -> ExperimentConfig {
    ExperimentConfig {
        environment: Environment::canonical(2.5, RiskTolerance::new(1.0).unwrap()).unwrap(),
        policy,
        horizon,
        runs,
        base_seed: seed,
    }
}

#[test]
fn estimators_agree_and_sem_shrinks_with_runs() {
    for policy in [
        PolicyConfig::mvlcb(),
        PolicyConfig::cbae(FeedbackKind::Full),
        PolicyConfig::mvfl(),
    ] {
        let mut sems = Vec::new();
        for runs in [500, 2000, 8000] {
            let r = monte_carlo_report(&config(policy.clone(), 500, runs, 21)).unwrap();
            let a = estimator_agreement(&r, &r).unwrap();
            assert!(a.agree, "{} M={runs}: {a:?}", r.policy);
            sems.push(r.direct_sem);
        }
        // 16× the runs: SEM ratio near 4, loose for batch-spread noise
        let ratio = sems[0] / sems[2];
        assert!((2.0..8.0).contains(&ratio), "{}: {sems:?}", policy.label());
    }
}

#[test]
fn results_do_not_depend_on_thread_count() {
    let c = config(PolicyConfig::mvlcb(), 300, 64, 4);
    let a = monte_carlo_report(&c).unwrap();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap();
    let b = pool.install(|| monte_carlo_report(&c).unwrap());
    assert_eq!(a.term2_series, b.term2_series);
    assert_eq!(a.direct_series, b.direct_series);
    assert_eq!(a.direct_sem, b.direct_sem);
}

#[test]
fn oracle_has_zero_decomposed_regret() {
    let r = monte_carlo_report(&config(PolicyConfig::oracle(), 200, 50, 0)).unwrap();
    assert_eq!(r.decomposed_regret, 0.0);
    assert_eq!(r.term2, 0.0);
}

#[test]
fn checkpoints_are_prefix_sums() {
    let r = monte_carlo_report(&config(PolicyConfig::mvlcb(), 100, 40, 2)).unwrap();
    let c = r.checkpoint(50);
    let t1: f64 = r.term1_series[..50].iter().sum();
    assert_eq!(c.term1, t1);
    approx::assert_relative_eq!(
        r.checkpoint(100).decomposed,
        r.decomposed_regret,
        max_relative = 1e-12
    );
    assert!(r
        .prob_hat
        .iter()
        .all(|row| (row.iter().sum::<f64>() - 1.0).abs() < 1e-12));
}

#[test]
fn mismatched_ensembles_rejected() {
    let a = monte_carlo_report(&config(PolicyConfig::mvlcb(), 50, 10, 1)).unwrap();
    let b = monte_carlo_report(&config(PolicyConfig::mvlcb(), 50, 10, 2)).unwrap();
    assert!(estimator_agreement(&a, &b).is_err());
}
