use std::path::Path;
use std::time::Instant;

use anyhow::Result;
use mvbandit::{monte_carlo_report, RegretReport};
use serde::Serialize;
use serde_json::json;

use super::Common;
use crate::config::SimulationConfig;
use crate::grid::checkpoint_grid;
use crate::output::{manifest_hash, num, write_csv, write_json};

pub const CURVE_HEADER: [&str; 9] = [
    "policy",
    "env_id",
    "gamma_label",
    "t",
    "regret_decomposed_mean",
    "regret_direct_mean",
    "regret_sem",
    "term1_cum",
    "term2_cum",
];

/// Reports of every (environment, policy) pair, in config order.
#[derive(Debug, Clone)]
pub struct CurveSet {
    pub entries: Vec<(String, String, RegretReport)>,
}

impl CurveSet {
    pub fn get(&self, env_id: &str, policy: &str) -> Option<&RegretReport> {
        self.entries
            .iter()
            .find(|(e, _, r)| e == env_id && r.policy == policy)
            .map(|(_, _, r)| r)
    }
}

/// `regret_sem` is the standard error of the direct estimate, the one
/// plotted by default.
pub fn curve_rows(env_id: &str, gamma_label: &str, report: &RegretReport) -> Vec<Vec<String>> {
    checkpoint_grid(report.horizon)
        .into_iter()
        .map(|t| {
            let c = report.checkpoint(t);
            vec![
                report.policy.clone(),
                env_id.to_string(),
                gamma_label.to_string(),
                t.to_string(),
                num(c.decomposed),
                num(c.direct),
                num(c.direct_sem),
                num(c.term1),
                num(c.term2),
            ]
        })
        .collect()
}

fn dense_rows<'a>(
    env_id: &str,
    report: &'a RegretReport,
) -> impl Iterator<Item = Vec<String>> + 'a {
    let env_id = env_id.to_string();
    report.term2_series.iter().enumerate().map(move |(i, v)| {
        vec![
            report.policy.clone(),
            env_id.clone(),
            (i + 1).to_string(),
            num(*v),
        ]
    })
}

pub fn simulate(config: &SimulationConfig, base_seed: u64) -> Result<CurveSet> {
    let mut entries = Vec::new();
    for (entry, experiment) in config.experiments(base_seed) {
        let report = monte_carlo_report(&experiment)?;
        entries.push((entry.id.clone(), entry.label(), report));
    }
    Ok(CurveSet { entries })
}

#[derive(Serialize)]
struct Manifest<'a> {
    command: &'a str,
    config: &'a SimulationConfig,
    base_seed: u64,
    version: &'a str,
}

pub(crate) fn write_curves(out: &Path, name: &str, set: &CurveSet, dense: bool) -> Result<()> {
    let rows: Vec<Vec<String>> = set
        .entries
        .iter()
        .flat_map(|(id, label, r)| curve_rows(id, label, r))
        .collect();
    write_csv(&out.join(name), &CURVE_HEADER, &rows)?;
    if dense {
        let rows: Vec<Vec<String>> = set
            .entries
            .iter()
            .flat_map(|(id, _, r)| dense_rows(id, r))
            .collect();
        let stem = name.trim_end_matches(".csv");
        write_csv(
            &out.join(format!("{stem}_term2_dense.csv")),
            &["policy", "env_id", "t", "term2"],
            &rows,
        )?;
    }
    Ok(())
}

pub(crate) fn meta(
    manifest: &impl Serialize,
    started: Instant,
    extra: serde_json::Value,
) -> Result<serde_json::Value> {
    let mut value = json!({
        "tool": "mvbandit",
        "version": env!("CARGO_PKG_VERSION"),
        "manifest_hash": manifest_hash(manifest)?,
        "manifest": manifest,
        "seed_policy": "replication i uses base_seed + i",
        "wall_clock_seconds": started.elapsed().as_secs_f64(),
    });
    if let (Some(obj), serde_json::Value::Object(more)) = (value.as_object_mut(), extra) {
        obj.extend(more);
    }
    Ok(value)
}

pub fn run_simulate(
    config_path: &Path,
    out: &Path,
    common: &Common,
    overrides: Overrides,
) -> Result<CurveSet> {
    let started = Instant::now();
    let mut config = SimulationConfig::load(config_path)?;
    if let Some(runs) = overrides.runs {
        config.runs = runs;
    }
    if let Some(horizon) = overrides.horizon {
        config.horizon = horizon;
    }
    let base_seed = common.seed.or(config.base_seed).unwrap_or(0);
    let set = simulate(&config, base_seed)?;
    write_curves(out, "curves.csv", &set, common.dense)?;
    let manifest = Manifest {
        command: "simulate",
        config: &config,
        base_seed,
        version: env!("CARGO_PKG_VERSION"),
    };
    let experiments: Vec<_> = config
        .experiments(base_seed)
        .into_iter()
        .map(|(_, e)| e)
        .collect();
    let meta = meta(
        &manifest,
        started,
        json!({ "config_path": config_path.display().to_string(), "experiments": experiments }),
    )?;
    write_json(&out.join("meta.json"), &meta)?;
    Ok(set)
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Overrides {
    pub runs: Option<usize>,
    pub horizon: Option<usize>,
}
