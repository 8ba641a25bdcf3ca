//! TOML scenario files.
//!
//! ```toml
//! n_total = 15
//! av_ids = [0, 1, 3, 4, 6, 7, 9, 10, 12, 13]
//! departure_headway = 2.0
//! free_flow_r0_to_j = 20.0
//! free_flow_r1_to_j = 30.0
//! free_flow_j_to_b = 5.0
//! saturation_headway = 2.0
//! payoff_quantum = 1.0
//! phase_offset = 0.0
//! supply_mode = "adaptive"
//! ```
//!
//! Missing keys take the library defaults.

use std::path::Path;

use avclub_core::{ScenarioConfig, SupplyMode};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioFile {
    pub n_total: usize,
    pub av_ids: Vec<usize>,
    pub departure_headway: f64,
    pub free_flow_r0_to_j: f64,
    pub free_flow_r1_to_j: f64,
    pub free_flow_j_to_b: f64,
    pub saturation_headway: f64,
    pub payoff_quantum: f64,
    pub phase_offset: f64,
    pub supply_mode: String,
}

impl Default for ScenarioFile {
    fn default() -> Self {
        ScenarioFile::from(&ScenarioConfig::default())
    }
}

impl From<&ScenarioConfig> for ScenarioFile {
    fn from(c: &ScenarioConfig) -> Self {
        ScenarioFile {
            n_total: c.n_total,
            av_ids: c.av_ids.clone(),
            departure_headway: c.departure_headway,
            free_flow_r0_to_j: c.free_flow_r0_to_j,
            free_flow_r1_to_j: c.free_flow_r1_to_j,
            free_flow_j_to_b: c.free_flow_j_to_b,
            saturation_headway: c.saturation_headway,
            payoff_quantum: c.payoff_quantum,
            phase_offset: c.phase_offset,
            supply_mode: c.supply_mode.as_str().to_string(),
        }
    }
}

impl TryFrom<ScenarioFile> for ScenarioConfig {
    type Error = Error;

    fn try_from(f: ScenarioFile) -> Result<Self> {
        let supply_mode: SupplyMode = f.supply_mode.parse().map_err(|e| Error::Config(format!("{e}")))?;
        let cfg = ScenarioConfig {
            n_total: f.n_total,
            av_ids: f.av_ids,
            departure_headway: f.departure_headway,
            free_flow_r0_to_j: f.free_flow_r0_to_j,
            free_flow_r1_to_j: f.free_flow_r1_to_j,
            free_flow_j_to_b: f.free_flow_j_to_b,
            saturation_headway: f.saturation_headway,
            payoff_quantum: f.payoff_quantum,
            phase_offset: f.phase_offset,
            supply_mode,
        };
        cfg.validate().map_err(|e| Error::Config(e.to_string()))?;
        Ok(cfg)
    }
}

pub fn parse_scenario(text: &str) -> Result<ScenarioConfig> {
    let file: ScenarioFile = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
    file.try_into()
}

pub fn render_scenario(cfg: &ScenarioConfig) -> String {
    toml::to_string(&ScenarioFile::from(cfg)).expect("scenario fields serialize")
}

pub fn load_scenario(path: impl AsRef<Path>) -> Result<ScenarioConfig> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_scenario(&text)
}

/// First 16 hex digits of the SHA-256 of the canonical TOML rendering.
/// The supply mode is part of the hash.
pub fn scenario_hash(cfg: &ScenarioConfig) -> String {
    let digest = Sha256::digest(render_scenario(cfg).as_bytes());
    hex::encode(digest)[..16].to_string()
}
