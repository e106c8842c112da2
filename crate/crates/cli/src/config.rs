//! The `simulate` configuration file.

use std::collections::HashSet;
use std::path::Path;

use anyhow::{bail, Context, Result};
use mvbandit::{Environment, ExperimentConfig, PolicyConfig};
use serde::{Deserialize, Serialize};

/// ```json
/// {
///   "horizon": 1000,
///   "runs": 200,
///   "base_seed": 7,
///   "environments": [{"id": "pair", "environment": {"lambda": 1, "arms": [...]}}],
///   "policies": [{"policy": "mvlcb"}, {"policy": "cbae", "C": 16}]
/// }
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationConfig {
    pub horizon: usize,
    pub runs: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_seed: Option<u64>,
    pub environments: Vec<EnvironmentEntry>,
    pub policies: Vec<PolicyConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnvironmentEntry {
    pub id: String,
    /// Panel label; defaults to the smallest positive MV gap, two decimals.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma_label: Option<String>,
    pub environment: Environment,
}

impl EnvironmentEntry {
    pub fn label(&self) -> String {
        self.gamma_label.clone().unwrap_or_else(|| {
            let g = self.environment.gaps().gamma_min_positive.unwrap_or(0.0);
            format!("{g:.2}")
        })
    }
}

impl SimulationConfig {
    /// Parses `text`; errors carry `source:line:column`.
    pub fn parse(text: &str, source: &str) -> Result<Self> {
        let config: Self = serde_json::from_str(text)
            .map_err(|e| anyhow::anyhow!("{source}:{}:{}: {e}", e.line(), e.column()))?;
        config.check().with_context(|| source.to_string())?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::parse(&text, &path.display().to_string())
    }

    fn check(&self) -> Result<()> {
        if self.environments.is_empty() || self.policies.is_empty() {
            bail!("at least one environment and one policy are required");
        }
        let mut ids = HashSet::new();
        for e in &self.environments {
            if !ids.insert(e.id.as_str()) {
                bail!("duplicate environment id {:?}", e.id);
            }
        }
        let mut labels = HashSet::new();
        for p in &self.policies {
            p.validate()?;
            if !labels.insert(p.label()) {
                bail!("duplicate policy {:?}", p.label());
            }
        }
        Ok(())
    }

    /// One experiment per (environment, policy), environments outermost.
    pub fn experiments(&self, base_seed: u64) -> Vec<(&EnvironmentEntry, ExperimentConfig)> {
        self.environments
            .iter()
            .flat_map(|e| {
                self.policies.iter().map(move |p| {
                    (
                        e,
                        ExperimentConfig {
                            environment: e.environment.clone(),
                            policy: p.clone(),
                            horizon: self.horizon,
                            runs: self.runs,
                            base_seed,
                        },
                    )
                })
            })
            .collect()
    }
}
