//! Scenario-file parsing, validation, and canonical hashing.
//!
//! Scenario files are JSON objects with a top-level `schema_version`.
//! Unknown keys are rejected so typos fail loudly. The canonical form
//! (every field explicit, fixed key order) is what gets hashed, so the hash
//! is invariant under key reordering and formatting in the source file.

use std::fs;
use std::path::Path;

use cclf_core::sim::{AgentInit, Condition, ScenarioConfig};
use cclf_core::vec2::Vec2;
use cclf_core::Mode;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

pub const DEFAULT_GAMMA: f64 = 0.5;
pub const DEFAULT_DELTA: f64 = 1.0;
pub const DEFAULT_SIGMA1: f64 = 1.0;
pub const DEFAULT_SIGMA2: f64 = 1.0;
pub const DEFAULT_DT: f64 = 0.01;
pub const DEFAULT_T_FINAL: f64 = 15.0;
pub const DEFAULT_U_MAX: f64 = 2.0;
pub const DEFAULT_WEIGHT: f64 = 1.0;

/// On-disk agent entry.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AgentFile {
    pub start: [f64; 2],
    pub goal: [f64; 2],
    #[serde(default = "default_weight")]
    pub weight: f64,
    #[serde(default = "default_u_max")]
    pub u_max: f64,
}

/// On-disk scenario schema. Also the canonical form embedded in manifests.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub schema_version: u32,
    pub agents: Vec<AgentFile>,
    #[serde(default = "default_gamma")]
    pub gamma: f64,
    #[serde(default = "default_delta")]
    pub delta: f64,
    #[serde(default = "default_sigma1")]
    pub sigma1: f64,
    #[serde(default = "default_sigma2")]
    pub sigma2: f64,
    #[serde(default = "default_dt")]
    pub dt: f64,
    #[serde(default = "default_t_final")]
    pub t_final: f64,
    #[serde(default)]
    pub mode: ModeField,
    #[serde(default)]
    pub condition: ConditionField,
    #[serde(default)]
    pub margin: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ModeField {
    #[default]
    Paper,
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ConditionField {
    Nominal,
    Simple,
    #[default]
    Cclf,
}

fn default_weight() -> f64 {
    DEFAULT_WEIGHT
}
fn default_u_max() -> f64 {
    DEFAULT_U_MAX
}
fn default_gamma() -> f64 {
    DEFAULT_GAMMA
}
fn default_delta() -> f64 {
    DEFAULT_DELTA
}
fn default_sigma1() -> f64 {
    DEFAULT_SIGMA1
}
fn default_sigma2() -> f64 {
    DEFAULT_SIGMA2
}
fn default_dt() -> f64 {
    DEFAULT_DT
}
fn default_t_final() -> f64 {
    DEFAULT_T_FINAL
}

impl From<ModeField> for Mode {
    fn from(value: ModeField) -> Mode {
        match value {
            ModeField::Paper => Mode::Paper,
            ModeField::Full => Mode::Full,
        }
    }
}

impl From<Mode> for ModeField {
    fn from(value: Mode) -> ModeField {
        match value {
            Mode::Paper => ModeField::Paper,
            Mode::Full => ModeField::Full,
        }
    }
}

impl From<ConditionField> for Condition {
    fn from(value: ConditionField) -> Condition {
        match value {
            ConditionField::Nominal => Condition::Nominal,
            ConditionField::Simple => Condition::Simple,
            ConditionField::Cclf => Condition::Cclf,
        }
    }
}

impl From<Condition> for ConditionField {
    fn from(value: Condition) -> ConditionField {
        match value {
            Condition::Nominal => ConditionField::Nominal,
            Condition::Simple => ConditionField::Simple,
            Condition::Cclf => ConditionField::Cclf,
        }
    }
}

impl ScenarioFile {
    pub fn into_config(self) -> Result<ScenarioConfig, CliError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(CliError::Validation(format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        let config = ScenarioConfig {
            agents: self
                .agents
                .iter()
                .map(|a| AgentInit {
                    start: Vec2::new(a.start[0], a.start[1]),
                    goal: Vec2::new(a.goal[0], a.goal[1]),
                    weight: a.weight,
                    u_max: a.u_max,
                })
                .collect(),
            gamma: self.gamma,
            delta: self.delta,
            sigma1: self.sigma1,
            sigma2: self.sigma2,
            dt: self.dt,
            t_final: self.t_final,
            mode: self.mode.into(),
            condition: self.condition.into(),
            margin: self.margin,
        };
        config.validate().map_err(CliError::validation)?;
        Ok(config)
    }

    pub fn from_config(config: &ScenarioConfig) -> Self {
        ScenarioFile {
            schema_version: SCHEMA_VERSION,
            agents: config
                .agents
                .iter()
                .map(|a| AgentFile {
                    start: [a.start.x, a.start.y],
                    goal: [a.goal.x, a.goal.y],
                    weight: a.weight,
                    u_max: a.u_max,
                })
                .collect(),
            gamma: config.gamma,
            delta: config.delta,
            sigma1: config.sigma1,
            sigma2: config.sigma2,
            dt: config.dt,
            t_final: config.t_final,
            mode: config.mode.into(),
            condition: config.condition.into(),
            margin: config.margin,
        }
    }
}

/// Reads and validates a scenario file.
pub fn parse_config(path: &Path) -> Result<ScenarioConfig, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Validation(format!("cannot read {}: {e}", path.display())))?;
    parse_config_str(&text)
        .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
}

/// Parses scenario JSON from a string (line/column diagnostics on error).
pub fn parse_config_str(text: &str) -> Result<ScenarioConfig, CliError> {
    let file: ScenarioFile = serde_json::from_str(text)
        .map_err(|e| CliError::Validation(e.to_string()))?;
    file.into_config()
}

/// Canonical serialization: every field explicit, struct-defined key order.
pub fn canonical_json(config: &ScenarioConfig) -> String {
    serde_json::to_string(&ScenarioFile::from_config(config))
        .expect("canonical config serialization cannot fail")
}

/// SHA-256 of the canonical serialization, hex-encoded.
pub fn config_hash(config: &ScenarioConfig) -> String {
    let digest = Sha256::digest(canonical_json(config).as_bytes());
    let mut out = String::with_capacity(64);
    for byte in digest {
        out.push_str(&format!("{byte:02x}"));
    }
    out
}
