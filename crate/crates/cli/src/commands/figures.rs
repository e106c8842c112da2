use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

use anyhow::{bail, Result};
use mvbandit::policy::FeedbackKind;
use mvbandit::{Environment, PolicyConfig, RiskTolerance};
use serde::Serialize;
use serde_json::json;

use super::simulate::{meta, simulate, write_curves};
use super::{Common, CurveSet};
use crate::config::{EnvironmentEntry, SimulationConfig};
use crate::output::write_json;

/// Variances of arms 1..3 in the six panels; `Γ = σ² − 2`.
pub const PANEL_VARIANCES: [f64; 6] = [2.5, 2.2, 2.1, 2.05, 2.01, 2.0];

const FULL_HORIZON: f64 = 10_000.0;
const FULL_RUNS: f64 = 1000.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Figure {
    /// Bandit feedback: MV-LCB against CB-AE.
    Fig1,
    /// Full information: MV-FL against CB-AE.
    Fig2,
}

impl FromStr for Figure {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fig1" => Ok(Self::Fig1),
            "fig2" => Ok(Self::Fig2),
            other => bail!("unknown figure id {other:?} (expected fig1 or fig2)"),
        }
    }
}

impl Figure {
    pub fn id(self) -> &'static str {
        match self {
            Self::Fig1 => "fig1",
            Self::Fig2 => "fig2",
        }
    }

    pub fn policies(self) -> Vec<PolicyConfig> {
        match self {
            Self::Fig1 => vec![
                PolicyConfig::mvlcb(),
                PolicyConfig::cbae(FeedbackKind::Bandit),
            ],
            Self::Fig2 => vec![PolicyConfig::mvfl(), PolicyConfig::cbae(FeedbackKind::Full)],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Panel {
    pub variance: f64,
    pub entry: EnvironmentEntry,
}

pub fn figure_panels() -> Result<Vec<Panel>> {
    let risk = RiskTolerance::new(1.0)?;
    PANEL_VARIANCES
        .iter()
        .map(|&variance| {
            Ok(Panel {
                variance,
                entry: EnvironmentEntry {
                    id: format!("canonical_var{variance:.2}"),
                    gamma_label: Some(format!("{:.2}", variance - 2.0)),
                    environment: Environment::canonical(variance, risk)?,
                },
            })
        })
        .collect()
}

/// `T = ⌈s·10⁴⌉` and `M = ⌈s·1000⌉`.
pub fn scaled_sizes(scale: f64) -> Result<(usize, usize)> {
    if !(scale > 0.0 && scale <= 1.0) {
        bail!("scale must lie in (0, 1], got {scale}");
    }
    let horizon = (scale * FULL_HORIZON).ceil() as usize;
    let runs = ((scale * FULL_RUNS).ceil() as usize).max(2);
    Ok((horizon, runs))
}

#[derive(Debug, Clone)]
pub struct FigureOutput {
    pub figure: Figure,
    pub horizon: usize,
    pub runs: usize,
    /// One curve set per panel, in [`PANEL_VARIANCES`] order.
    pub panels: Vec<(Panel, CurveSet)>,
}

pub fn figure_data(figure: Figure, scale: f64, base_seed: u64) -> Result<FigureOutput> {
    let (horizon, runs) = scaled_sizes(scale)?;
    let mut panels = Vec::new();
    for panel in figure_panels()? {
        let config = SimulationConfig {
            horizon,
            runs,
            base_seed: Some(base_seed),
            environments: vec![panel.entry.clone()],
            policies: figure.policies(),
        };
        let set = simulate(&config, base_seed)?;
        panels.push((panel, set));
    }
    Ok(FigureOutput {
        figure,
        horizon,
        runs,
        panels,
    })
}

pub fn run_figures(
    figure: Figure,
    scale: f64,
    out: &Path,
    common: &Common,
) -> Result<FigureOutput> {
    let started = Instant::now();
    let base_seed = common.seed.unwrap_or(0);
    let output = figure_data(figure, scale, base_seed)?;
    let mut files = Vec::new();
    for (panel, set) in &output.panels {
        let name = format!("{}_gamma_{}.csv", figure.id(), panel.entry.label());
        write_curves(out, &name, set, common.dense)?;
        files.push(name);
    }
    let manifest = json!({
        "command": "figures",
        "figure": figure,
        "scale": scale,
        "horizon": output.horizon,
        "runs": output.runs,
        "base_seed": base_seed,
        "risk_lambda": 1.0,
        "policies": figure.policies(),
        "environments": output.panels.iter().map(|(p, _)| &p.entry).collect::<Vec<_>>(),
        "version": env!("CARGO_PKG_VERSION"),
    });
    let meta = meta(&manifest, started, json!({ "files": files }))?;
    write_json(&out.join(format!("{}_meta.json", figure.id())), &meta)?;
    Ok(output)
}
