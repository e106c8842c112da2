use std::path::Path;

use anyhow::Result;
use mvbandit::theory::{
    bh_error_floor_check, bound_cbae, bound_mvfl, bound_mvlcb, concentration_bound, coupling_floor,
    empirical_tail, kl_bernoulli, worst_case_gamma, BinaryTest, BoundInputs,
};
use mvbandit::{
    monte_carlo_report, ArmDistribution, Environment, ExperimentConfig, PolicyConfig, RiskTolerance,
};
use serde::Serialize;
use serde_json::{json, Value};

use crate::output::{num, write_csv, write_json};

/// The constant the KL step of the coupling argument relies on.
pub const CLAIMED_KL_CONSTANT: f64 = 22.0;

pub const COUPLING_HORIZONS: [usize; 4] = [100, 1000, 10_000, 100_000];

#[derive(Debug, Clone, Copy)]
pub struct TheoryOptions {
    /// Monte-Carlo size of the tail and error-floor checks.
    pub mc_runs: usize,
    /// Monte-Carlo size of the regret-versus-bound checks.
    pub bound_runs: usize,
    pub bound_horizon: usize,
    pub seed: u64,
}

impl Default for TheoryOptions {
    fn default() -> Self {
        Self {
            mc_runs: 50_000,
            bound_runs: 500,
            bound_horizon: 5000,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TheoryRecord {
    pub check_name: String,
    pub parameters: Value,
    pub computed_value: f64,
    pub reference_value: Option<f64>,
    pub holds: bool,
    /// Set on checks known to fail; they are reported, not treated as errors.
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub expected_violation: bool,
}

impl TheoryRecord {
    fn new(
        name: &str,
        parameters: Value,
        computed: f64,
        reference: Option<f64>,
        holds: bool,
    ) -> Self {
        Self {
            check_name: name.to_string(),
            parameters,
            computed_value: computed,
            reference_value: reference,
            holds,
            expected_violation: false,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TailRow {
    pub dist: String,
    pub lambda: f64,
    pub t: u64,
    pub delta: f64,
    pub alpha: f64,
    pub bound: f64,
    pub upper_freq: f64,
    pub lower_freq: f64,
    pub sem: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct TheoryReport {
    pub records: Vec<TheoryRecord>,
    #[serde(skip)]
    pub tail: Vec<TailRow>,
}

impl TheoryReport {
    pub fn unexpected_violations(&self) -> Vec<&TheoryRecord> {
        self.records
            .iter()
            .filter(|r| !r.holds && !r.expected_violation)
            .collect()
    }

    pub fn find(&self, name: &str) -> impl Iterator<Item = &TheoryRecord> + '_ {
        let name = name.to_string();
        self.records.iter().filter(move |r| r.check_name == name)
    }
}

/// 20 log-spaced gaps on `[10⁻³, 10⁻¹]`.
pub fn coupling_gamma_grid() -> Vec<f64> {
    (0..20)
        .map(|i| 10f64.powf(-3.0 + 2.0 * i as f64 / 19.0))
        .collect()
}

pub fn kl_ratio(gamma: f64) -> f64 {
    kl_bernoulli(0.25 + 2.0 * gamma, 0.25 - 2.0 * gamma) / (gamma * gamma)
}

fn coupling_records(records: &mut Vec<TheoryRecord>) -> Result<()> {
    for &horizon in &COUPLING_HORIZONS {
        for gamma in coupling_gamma_grid() {
            let c = coupling_floor(CLAIMED_KL_CONSTANT, gamma, horizon)?;
            records.push(TheoryRecord::new(
                "coupling_floor",
                json!({ "kappa": c.kappa, "gamma": gamma, "T": horizon }),
                c.sum,
                Some(c.floor),
                c.holds,
            ));
        }
        let g = worst_case_gamma(horizon as f64);
        let c = coupling_floor(CLAIMED_KL_CONSTANT, g, horizon)?;
        records.push(TheoryRecord::new(
            "coupling_floor_worst_case",
            json!({ "kappa": c.kappa, "gamma": g, "T": horizon }),
            c.sum,
            Some(c.floor),
            c.holds,
        ));
    }
    Ok(())
}

fn kl_records(records: &mut Vec<TheoryRecord>) {
    let grid: Vec<f64> = (10..=100).map(|i| i as f64 / 1000.0).collect();
    for &gamma in grid
        .iter()
        .filter(|g| ((**g * 1000.0).round() as i64) % 10 == 0)
    {
        let mut r = TheoryRecord::new(
            "kl_ratio",
            json!({ "gamma": gamma }),
            kl_ratio(gamma),
            Some(CLAIMED_KL_CONSTANT),
            kl_ratio(gamma) <= CLAIMED_KL_CONSTANT,
        );
        r.expected_violation = !r.holds;
        records.push(r);
    }
    for (name, hi) in [("kl_ratio_max_upto_0.05", 0.05), ("kl_ratio_max", 0.1)] {
        let (arg, max) = grid
            .iter()
            .filter(|&&g| g <= hi + 1e-12)
            .map(|&g| (g, kl_ratio(g)))
            .fold(
                (0.0, f64::NEG_INFINITY),
                |a, b| if b.1 > a.1 { b } else { a },
            );
        let mut r = TheoryRecord::new(
            name,
            json!({ "gamma_min": 0.01, "gamma_max": hi, "argmax": arg }),
            max,
            Some(CLAIMED_KL_CONSTANT),
            max <= CLAIMED_KL_CONSTANT,
        );
        r.expected_violation = !r.holds;
        records.push(r);
    }
}

fn error_floor_records(records: &mut Vec<TheoryRecord>, opts: &TheoryOptions) -> Result<()> {
    for gamma in [0.01, 0.05] {
        let nu = ArmDistribution::Bernoulli {
            p: 0.25 + 2.0 * gamma,
        };
        let nu_prime = ArmDistribution::Bernoulli {
            p: 0.25 - 2.0 * gamma,
        };
        for n in [1u64, 10, 50] {
            for test in [BinaryTest::Majority, BinaryTest::LikelihoodRatio] {
                let v = bh_error_floor_check(&nu, &nu_prime, n, test, opts.mc_runs, opts.seed)?;
                records.push(TheoryRecord::new(
                    "bh_error_floor",
                    json!({ "gamma": gamma, "n": n, "test": test, "runs": opts.mc_runs, "sem": v.sem }),
                    v.error_sum,
                    Some(v.floor),
                    v.holds,
                ));
            }
        }
    }
    Ok(())
}

fn concentration_records(
    records: &mut Vec<TheoryRecord>,
    tail: &mut Vec<TailRow>,
    opts: &TheoryOptions,
) -> Result<()> {
    let risk = RiskTolerance::new(1.0)?;
    let dist = ArmDistribution::Bernoulli { p: 0.5 };
    let alpha = dist.sub_gaussian_params()?.alpha_max;
    for t in [20u64, 100] {
        for delta in [0.2, 0.5, 1.0] {
            let bound = concentration_bound(t, delta, alpha, risk)?;
            let e = empirical_tail(&dist, risk, t, delta, opts.mc_runs, opts.seed)?;
            let holds = e.upper_freq <= bound + 3.0 * e.upper_sem
                && e.lower_freq <= bound + 3.0 * e.lower_sem;
            records.push(TheoryRecord::new(
                "concentration_tail",
                json!({
                    "dist": "bernoulli(0.5)", "lambda": 1.0, "t": t, "delta": delta,
                    "alpha": alpha, "runs": opts.mc_runs,
                    "upper_freq": e.upper_freq, "lower_freq": e.lower_freq, "sem": e.sem(),
                }),
                e.upper_freq.max(e.lower_freq),
                Some(bound),
                holds,
            ));
            tail.push(TailRow {
                dist: "bernoulli(0.5)".into(),
                lambda: 1.0,
                t,
                delta,
                alpha,
                bound,
                upper_freq: e.upper_freq,
                lower_freq: e.lower_freq,
                sem: e.sem(),
            });
        }
    }
    Ok(())
}

/// `B(0.9)` against `B(√0.31)` at `λ = 1`: `Γ₂ = 0.5`.
pub fn bernoulli_pair_half_gap() -> Result<Environment> {
    Ok(Environment::new(
        vec![
            ArmDistribution::Bernoulli { p: 0.9 },
            ArmDistribution::Bernoulli { p: 0.31f64.sqrt() },
        ],
        RiskTolerance::new(1.0)?,
    )?)
}

/// MC regret against the closed-form bounds at theorem-grade constants.
pub fn bound_respect_records(opts: &TheoryOptions) -> Result<Vec<TheoryRecord>> {
    let mut records = Vec::new();
    let horizon = opts.bound_horizon;

    let env = bernoulli_pair_half_gap()?;
    let alpha = env.alpha_max()?;
    let inputs = BoundInputs::from_env(&env, horizon as u64, alpha);
    let c = inputs.mvlcb_threshold();
    let bound = bound_mvlcb(&inputs.with_c(c))?;
    let report = monte_carlo_report(&ExperimentConfig {
        environment: env,
        policy: PolicyConfig::mvlcb().with_c(c),
        horizon,
        runs: opts.bound_runs,
        base_seed: opts.seed,
    })?;
    records.push(TheoryRecord::new(
        "bound_respect_mvlcb",
        json!({
            "env": "bernoulli(0.9) vs bernoulli(sqrt 0.31)", "lambda": 1.0, "alpha": alpha,
            "c": c, "T": horizon, "runs": opts.bound_runs, "theorem_grade": bound.theorem_grade,
            "direct_regret": report.direct_regret,
        }),
        report.decomposed_regret,
        Some(bound.value),
        report.decomposed_regret <= bound.value,
    ));

    let env = Environment::canonical(2.5, RiskTolerance::new(1.0)?)?;
    let alpha = env.alpha_max()?;
    let bound = bound_mvfl(&BoundInputs::from_env(&env, horizon as u64, alpha))?;
    let report = monte_carlo_report(&ExperimentConfig {
        environment: env,
        policy: PolicyConfig::mvfl(),
        horizon,
        runs: opts.bound_runs,
        base_seed: opts.seed,
    })?;
    records.push(TheoryRecord::new(
        "bound_respect_mvfl",
        json!({
            "env": "canonical, variance 2.5", "lambda": 1.0, "alpha": alpha, "T": horizon,
            "runs": opts.bound_runs, "theorem_grade": bound.theorem_grade,
            "direct_regret": report.direct_regret,
        }),
        report.decomposed_regret,
        Some(bound.value),
        report.decomposed_regret <= bound.value,
    ));
    Ok(records)
}

fn bound_value_records(records: &mut Vec<TheoryRecord>) -> Result<()> {
    let env = Environment::canonical(2.5, RiskTolerance::new(1.0)?)?;
    let alpha = env.alpha_max()?;
    for horizon in [1000u64, 10_000] {
        let inputs = BoundInputs::from_env(&env, horizon, alpha);
        let evaluations = [
            ("bound_mvlcb", bound_mvlcb(&inputs)?),
            ("bound_cbae", bound_cbae(&inputs)?),
            ("bound_mvfl", bound_mvfl(&inputs)?),
        ];
        for (name, value) in evaluations {
            records.push(TheoryRecord::new(
                name,
                json!({
                    "env": "canonical, variance 2.5", "lambda": 1.0, "alpha": alpha, "T": horizon,
                    "c": inputs.c, "C": inputs.big_c, "gammahat0": inputs.gammahat0,
                    "theorem_grade": value.theorem_grade,
                }),
                value.value,
                None,
                value.value.is_finite(),
            ));
        }
    }
    Ok(())
}

pub fn theory_report(opts: &TheoryOptions) -> Result<TheoryReport> {
    let mut records = Vec::new();
    let mut tail = Vec::new();
    coupling_records(&mut records)?;
    kl_records(&mut records);
    error_floor_records(&mut records, opts)?;
    concentration_records(&mut records, &mut tail, opts)?;
    bound_value_records(&mut records)?;
    records.extend(bound_respect_records(opts)?);
    Ok(TheoryReport { records, tail })
}

/// Writes `theory-report.json` and `tail.csv`.
pub fn run_theory(opts: &TheoryOptions, out: &Path) -> Result<TheoryReport> {
    let report = theory_report(opts)?;
    let unexpected = report.unexpected_violations().len();
    write_json(
        &out.join("theory-report.json"),
        &json!({
            "records": report.records,
            "violations": report.records.iter().filter(|r| !r.holds).count(),
            "unexpected_violations": unexpected,
        }),
    )?;
    let rows: Vec<Vec<String>> = report
        .tail
        .iter()
        .map(|r| {
            vec![
                r.dist.clone(),
                num(r.lambda),
                r.t.to_string(),
                num(r.delta),
                num(r.alpha),
                num(r.bound),
                num(r.upper_freq),
                num(r.lower_freq),
                num(r.sem),
            ]
        })
        .collect();
    write_csv(
        &out.join("tail.csv"),
        &[
            "dist",
            "lambda",
            "t",
            "delta",
            "alpha",
            "bound",
            "upper_freq",
            "lower_freq",
            "sem",
        ],
        &rows,
    )?;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gap_grid() {
        let g = coupling_gamma_grid();
        assert_eq!(g.len(), 20);
        assert!((g[0] - 1e-3).abs() < 1e-15);
        assert!((g[19] - 0.1).abs() < 1e-14);
    }

    #[test]
    fn kl_ratio_exceeds_claimed_constant() {
        assert!((kl_ratio(0.01) - 43.4995).abs() < 1e-3);
        assert!((kl_ratio(0.05) - 48.873).abs() < 1e-2);
        let mut records = Vec::new();
        kl_records(&mut records);
        let max = records
            .iter()
            .find(|r| r.check_name == "kl_ratio_max_upto_0.05")
            .unwrap();
        assert!(!max.holds && max.expected_violation);
    }

    #[test]
    fn half_gap_pair() {
        let g = bernoulli_pair_half_gap().unwrap().gaps();
        assert!((g.gamma[1] - 0.5).abs() < 1e-12);
        assert_eq!(bernoulli_pair_half_gap().unwrap().alpha_max().unwrap(), 2.0);
    }
}
