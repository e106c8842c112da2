use std::path::Path;

use anyhow::{bail, Result};
use mvbandit::policy::FeedbackKind;
use mvbandit::theory::{lb_env_pair, worst_case_gamma, MIN_COUPLING_HORIZON};
use mvbandit::{monte_carlo_report, ExperimentConfig, PolicyConfig, RiskTolerance};
use serde::Serialize;

use crate::output::{num, write_csv};

#[derive(Debug, Clone, Serialize)]
pub struct LowerBoundRow {
    pub policy: String,
    pub horizon: usize,
    pub gamma: f64,
    pub regret_f: f64,
    pub regret_f_prime: f64,
    pub sem_f: f64,
    pub sem_f_prime: f64,
    pub max_regret: f64,
}

impl LowerBoundRow {
    pub fn per_round(&self) -> f64 {
        self.max_regret / self.horizon as f64
    }
}

/// Accepts `mvfl`, `mvlcb`, `cbae-bandit`, `cbae-full`, `uniform-bandit`,
/// `oracle-f` (plays the arm optimal under `F`, arm 0).
pub fn parse_policy_list(list: &str) -> Result<Vec<PolicyConfig>> {
    list.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|name| {
            Ok(match name {
                "mvfl" => PolicyConfig::mvfl(),
                "mvlcb" => PolicyConfig::mvlcb(),
                "cbae-bandit" | "cbae" => PolicyConfig::cbae(FeedbackKind::Bandit),
                "cbae-full" => PolicyConfig::cbae(FeedbackKind::Full),
                "uniform-bandit" | "uniform" => PolicyConfig::uniform(),
                "oracle-f" => PolicyConfig::oracle().with_arm(0),
                other => bail!("unknown policy {other:?}"),
            })
        })
        .collect()
}

/// Max-over-pair regret at `Γ = worst_case_gamma(T)` with `λ = 0`.
///
/// Regret is the decomposed estimate; both environments share seeds.
pub fn lowerbound_rows(
    horizons: &[usize],
    policies: &[PolicyConfig],
    runs: usize,
    base_seed: u64,
) -> Result<Vec<LowerBoundRow>> {
    let risk = RiskTolerance::new(0.0)?;
    let mut rows = Vec::new();
    for &horizon in horizons {
        if horizon < MIN_COUPLING_HORIZON {
            bail!("T = {horizon} is below the minimum horizon {MIN_COUPLING_HORIZON}");
        }
        let gamma = worst_case_gamma(horizon as f64);
        let pair = lb_env_pair(gamma, risk)?;
        for policy in policies {
            let run = |env: &mvbandit::Environment| {
                monte_carlo_report(&ExperimentConfig {
                    environment: env.clone(),
                    policy: policy.clone(),
                    horizon,
                    runs,
                    base_seed,
                })
            };
            let f = run(&pair.env_f)?;
            let fp = run(&pair.env_f_prime)?;
            rows.push(LowerBoundRow {
                policy: policy.label(),
                horizon,
                gamma,
                regret_f: f.decomposed_regret,
                regret_f_prime: fp.decomposed_regret,
                sem_f: f.decomposed_sem,
                sem_f_prime: fp.decomposed_sem,
                max_regret: f.decomposed_regret.max(fp.decomposed_regret),
            });
        }
    }
    Ok(rows)
}

pub fn run_lowerbound(
    horizons: &[usize],
    policies: &[PolicyConfig],
    runs: usize,
    base_seed: u64,
    out: &Path,
) -> Result<Vec<LowerBoundRow>> {
    let rows = lowerbound_rows(horizons, policies, runs, base_seed)?;
    let records: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.policy.clone(),
                r.horizon.to_string(),
                num(r.gamma),
                num(r.regret_f),
                num(r.regret_f_prime),
                num(r.sem_f),
                num(r.sem_f_prime),
                num(r.max_regret),
                num(r.per_round()),
            ]
        })
        .collect();
    write_csv(
        &out.join("lowerbound.csv"),
        &[
            "policy",
            "t",
            "gamma",
            "regret_f",
            "regret_f_prime",
            "sem_f",
            "sem_f_prime",
            "max_regret",
            "max_regret_per_t",
        ],
        &records,
    )?;
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn policy_names() {
        let p = parse_policy_list("mvfl, mvlcb,oracle-f").unwrap();
        let labels: Vec<String> = p.iter().map(|c| c.label()).collect();
        assert_eq!(labels, ["mvfl", "mvlcb", "fixed0-bandit"]);
        assert!(parse_policy_list("ucb").is_err());
    }

    #[test]
    fn short_horizon_rejected() {
        let err = lowerbound_rows(&[50], &[PolicyConfig::mvfl()], 4, 0).unwrap_err();
        assert!(err.to_string().contains("minimum horizon"));
    }

    #[test]
    fn informed_oracle_pays_on_the_flipped_pair() {
        let rows = lowerbound_rows(&[100], &[PolicyConfig::oracle().with_arm(0)], 4, 0).unwrap();
        let r = &rows[0];
        assert!(r.regret_f.abs() < 1e-9);
        assert!(r.max_regret >= r.gamma * 100.0 * (1.0 - 1e-9));
    }
}
