//! Run configuration, read from TOML.
//!
//! Complex numbers are written as `re+imi` strings, the same form used in
//! caches and reports. Unknown keys are rejected at every level.

use kxxz_core::wire::parse_c64;
use kxxz_core::{make_params, ModelParams, C64};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::PathBuf;
use thiserror::Error;

/// A configuration that cannot be used.
#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read configuration: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed configuration: {0}")]
    Toml(#[from] toml::de::Error),
    #[error("invalid value for {field}: {message}")]
    Invalid { field: String, message: String },
}

impl ConfigError {
    pub fn invalid(field: &str, message: impl ToString) -> Self {
        ConfigError::Invalid {
            field: field.to_string(),
            message: message.to_string(),
        }
    }
}

/// Output format of verification reports.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    /// Structured JSON document.
    #[default]
    Json,
    /// One row per check.
    Csv,
}

/// Model parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsBlock {
    pub n: usize,
    /// Equivariant parameters; generated generically when empty.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub a: Vec<String>,
    pub hbar: String,
    pub q: String,
    pub precision: u32,
}

/// Which checks to run and with which knobs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaskBlock {
    /// Suite names, or `all`.
    pub checks: Vec<String>,
    /// Tolerance overrides keyed by check-id prefix.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub tolerances: BTreeMap<String, f64>,
    /// Order in `x` of the Q-operator series.
    pub m: usize,
    pub d_max: usize,
    /// Deformation values; each suite uses its own defaults when empty.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub z: Vec<String>,
}

/// Where things are read and written.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IoBlock {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cache: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<PathBuf>,
    #[serde(default)]
    pub format: ReportFormat,
}

/// A complete run description.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub params: ParamsBlock,
    pub task: TaskBlock,
    #[serde(default)]
    pub io: IoBlock,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            params: ParamsBlock {
                n: 3,
                a: Vec::new(),
                hbar: "0.8+0.15i".into(),
                q: "0.9+0i".into(),
                precision: 53,
            },
            task: TaskBlock {
                checks: vec!["all".into()],
                tolerances: BTreeMap::new(),
                m: 6,
                d_max: 14,
                z: Vec::new(),
            },
            io: IoBlock::default(),
        }
    }
}

/// Generic equivariant parameters for `n` sites: unit spacing along the real
/// axis with small imaginary offsets, so that no two coincide, no ratio is a
/// small power of `hbar`, and vertex series converge at desk-scale degrees.
pub fn generic_a(n: usize) -> Vec<C64> {
    const OFFSETS: [f64; 6] = [1.0, -2.0, 3.0, 0.0, -1.0, 2.0];
    (0..n)
        .map(|i| C64::new(1.0 + 1.2 * i as f64, 0.1 * OFFSETS[i % 6]))
        .collect()
}

/// Parses a comma-separated list of complex numbers.
pub fn parse_list(field: &str, text: &str) -> Result<Vec<C64>, ConfigError> {
    text.split(',')
        .map(|s| parse_complex(field, s.trim()))
        .collect()
}

/// Parses one complex number, accepting plain reals as well.
pub fn parse_complex(field: &str, text: &str) -> Result<C64, ConfigError> {
    if let Ok(x) = text.parse::<f64>() {
        return Ok(C64::new(x, 0.0));
    }
    parse_c64(text).map_err(|e| ConfigError::invalid(field, e))
}

impl RunConfig {
    /// Reads and validates a TOML file.
    pub fn from_path(path: &std::path::Path) -> Result<Self, ConfigError> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    /// Parses TOML text.
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        let cfg: RunConfig = toml::from_str(text)?;
        cfg.model_params()?;
        cfg.z_values()?;
        Ok(cfg)
    }

    /// Serializes to TOML.
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configuration is always representable")
    }

    /// Validated model parameters.
    pub fn model_params(&self) -> Result<ModelParams, ConfigError> {
        let p = &self.params;
        let a = if p.a.is_empty() {
            generic_a(p.n)
        } else {
            p.a.iter().map(|s| parse_complex("params.a", s)).collect::<Result<_, _>>()?
        };
        let hbar = parse_complex("params.hbar", &p.hbar)?;
        let q = parse_complex("params.q", &p.q)?;
        make_params(p.n, &a, hbar, q, p.precision).map_err(|e| ConfigError::invalid("params", e))
    }

    /// The deformation list, empty when the suites should use their defaults.
    pub fn z_values(&self) -> Result<Vec<C64>, ConfigError> {
        self.task.z.iter().map(|s| parse_complex("task.z", s)).collect()
    }
}
