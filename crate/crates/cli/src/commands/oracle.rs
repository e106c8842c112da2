use std::path::Path;

use anyhow::Result;
use mvbandit::policy::FeedbackKind;
use mvbandit::regret::{DEFAULT_BRANCH_BUDGET, IDENTITY_TOLERANCE};
use mvbandit::{enumerate_exact, ArmDistribution, Environment, PolicyConfig, RiskTolerance};
use serde::Serialize;
use serde_json::json;

use crate::output::write_json;

#[derive(Debug, Clone)]
pub struct BatteryCase {
    pub instance: &'static str,
    pub environment: Environment,
    pub policy: PolicyConfig,
    pub horizon: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleEntry {
    pub instance: String,
    pub policy: String,
    pub horizon: usize,
    pub term1: f64,
    pub term2: f64,
    pub decomposed_regret: f64,
    pub direct_regret: f64,
    pub identity_gap: f64,
    pub holds: bool,
    pub nodes: u64,
    pub prob: Vec<Vec<f64>>,
}

/// Small-`C` CB-AE variant so that eliminations happen inside the horizon.
fn eager_cbae(kind: FeedbackKind) -> PolicyConfig {
    PolicyConfig::cbae(kind).with_big_c(0.5)
}

pub fn oracle_battery() -> Result<Vec<BatteryCase>> {
    let risk = RiskTolerance::new(1.0)?;
    let bernoulli = Environment::new(
        vec![
            ArmDistribution::Bernoulli { p: 0.7 },
            ArmDistribution::Bernoulli { p: 0.4 },
        ],
        risk,
    )?;
    let two_atom = Environment::new(
        vec![
            ArmDistribution::TwoPoint {
                mu: 1.0,
                sigma2: 1.0,
            },
            ArmDistribution::TwoPoint {
                mu: 2.0,
                sigma2: 2.5,
            },
        ],
        risk,
    )?;
    let discrete = Environment::new(
        vec![
            ArmDistribution::DiscreteFinite {
                atoms: vec![(0.0, 0.2), (1.0, 0.5), (2.0, 0.3)],
            },
            ArmDistribution::DiscreteFinite {
                atoms: vec![(-1.0, 0.25), (1.5, 0.75)],
            },
            ArmDistribution::DiscreteFinite {
                atoms: vec![(0.5, 0.6), (3.0, 0.4)],
            },
        ],
        risk,
    )?;

    let bandit = [
        PolicyConfig::mvlcb(),
        PolicyConfig::cbae(FeedbackKind::Bandit),
        eager_cbae(FeedbackKind::Bandit),
        PolicyConfig::oracle(),
    ];
    let full = [
        PolicyConfig::mvfl(),
        PolicyConfig::cbae(FeedbackKind::Full),
        eager_cbae(FeedbackKind::Full),
        PolicyConfig::oracle().with_feedback(FeedbackKind::Full),
    ];
    let mut cases = Vec::new();
    for p in &bandit {
        cases.push(BatteryCase {
            instance: "bernoulli_k2_bandit",
            environment: bernoulli.clone(),
            policy: p.clone(),
            horizon: 6,
        });
    }
    for p in &full {
        cases.push(BatteryCase {
            instance: "twoatom_k2_full",
            environment: two_atom.clone(),
            policy: p.clone(),
            horizon: 4,
        });
    }
    for p in &bandit {
        cases.push(BatteryCase {
            instance: "discrete_k3_bandit",
            environment: discrete.clone(),
            policy: p.clone(),
            horizon: 4,
        });
    }
    Ok(cases)
}

/// Runs the battery. `inject_fault` flips the sign of the decision-variance
/// term, which must make the check fail.
pub fn oracle_check(cases: &[BatteryCase], inject_fault: bool) -> Result<Vec<OracleEntry>> {
    cases
        .iter()
        .map(|case| {
            let r = enumerate_exact(
                &case.environment,
                &case.policy,
                case.horizon,
                DEFAULT_BRANCH_BUDGET,
            )?;
            let term2 = if inject_fault { -r.term2 } else { r.term2 };
            let decomposed = r.term1 + term2;
            let gap = (decomposed - r.direct_regret).abs();
            Ok(OracleEntry {
                instance: case.instance.to_string(),
                policy: r.policy,
                horizon: r.horizon,
                term1: r.term1,
                term2,
                decomposed_regret: decomposed,
                direct_regret: r.direct_regret,
                identity_gap: gap,
                holds: gap <= IDENTITY_TOLERANCE,
                nodes: r.nodes,
                prob: r.prob,
            })
        })
        .collect()
}

/// Writes `exact.json`; returns whether every identity held.
pub fn run_oracle_check(out: &Path, inject_fault: bool, empty: bool) -> Result<bool> {
    let cases = if empty { Vec::new() } else { oracle_battery()? };
    if cases.is_empty() {
        eprintln!("warning: enumeration battery is empty; nothing was checked");
    }
    let entries = oracle_check(&cases, inject_fault)?;
    let pass = entries.iter().all(|e| e.holds);
    write_json(
        &out.join("exact.json"),
        &json!({
            "tolerance": IDENTITY_TOLERANCE,
            "inject_fault": inject_fault,
            "pass": pass,
            "entries": entries,
        }),
    )?;
    Ok(pass)
}
