use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use mvbandit::policy::FeedbackKind;
use mvbandit::{
    enumerate_exact, monte_carlo_report, run_episode, Environment, ExperimentConfig, PolicyConfig,
    RiskTolerance,
};

fn canonical() -> Environment {
    Environment::canonical(2.5, RiskTolerance::new(1.0).unwrap()).unwrap()
}

fn episodes(c: &mut Criterion) {
    let env = canonical();
    let mut group = c.benchmark_group("episode_t10000");
    for config in [
        PolicyConfig::mvlcb(),
        PolicyConfig::cbae(FeedbackKind::Bandit),
        PolicyConfig::cbae(FeedbackKind::Full),
        PolicyConfig::mvfl(),
    ] {
        group.bench_with_input(
            BenchmarkId::from_parameter(config.label()),
            &config,
            |b, cfg| {
                b.iter(|| {
                    let mut policy = cfg.build(&env).unwrap();
                    black_box(run_episode(&env, policy.as_mut(), 10_000, 7))
                })
            },
        );
    }
    group.finish();
}

fn monte_carlo(c: &mut Criterion) {
    let config = ExperimentConfig {
        environment: canonical(),
        policy: PolicyConfig::mvlcb(),
        horizon: 1000,
        runs: 200,
        base_seed: 1,
    };
    c.bench_function("monte_carlo_mvlcb_t1000_m200", |b| {
        b.iter(|| black_box(monte_carlo_report(&config).unwrap()))
    });
}

fn exact(c: &mut Criterion) {
    let env = canonical();
    c.bench_function("exact_mvfl_t6", |b| {
        b.iter(|| black_box(enumerate_exact(&env, &PolicyConfig::mvfl(), 6, 1_000_000).unwrap()))
    });
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = episodes, monte_carlo, exact
}
criterion_main!(benches);
