use std::collections::HashSet;
use std::path::PathBuf;

use markov_groupoids::diagnostics::Thresholds;
use markov_groupoids::models::preset;
use markov_groupoids::weight::ArithmeticMode;
use serde::{Deserialize, Serialize};

use crate::catalog::{builtin, Builtin};
use crate::error::{LabError, Result};

/// One experiment entry of a batch file. Unset fields take the builtin's defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Run label; also the artifact subdirectory.
    pub name: String,
    /// Builtin suite to execute.
    pub experiment: String,
    /// Model preset, for suites that take one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub horizon: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub floor: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arithmetic: Option<ArithmeticMode>,
    #[serde(default)]
    pub seed: u64,
    /// Expected verdict tag; defaults to the builtin's.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget_secs: Option<u64>,
}

impl ExperimentConfig {
    pub fn builtin(name: &str) -> Self {
        ExperimentConfig {
            name: name.to_string(),
            experiment: name.to_string(),
            model: None,
            horizon: None,
            epsilon: None,
            floor: None,
            truncation: None,
            arithmetic: None,
            seed: 0,
            expect: None,
            budget_secs: None,
        }
    }

    pub fn settings(&self) -> Result<Settings> {
        let b = builtin(&self.experiment)?;
        let d = &b.defaults;
        let horizon = self.horizon.unwrap_or(d.horizon);
        let s = Settings {
            horizon,
            thresholds: Thresholds {
                epsilon: self.epsilon.unwrap_or(d.epsilon),
                floor: self.floor.unwrap_or(d.floor),
            },
            truncation: self.truncation.unwrap_or(d.truncation),
            arithmetic: self.arithmetic.unwrap_or(d.arithmetic).resolve(horizon),
            seed: self.seed,
            model: self.model.clone(),
            expect: self.expect.clone().unwrap_or_else(|| d.expect.to_string()),
            budget_secs: self.budget_secs.unwrap_or(d.budget_secs),
        };
        s.validate(&self.name, b)?;
        Ok(s)
    }
}

/// A config with every default filled in.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Settings {
    pub horizon: usize,
    pub thresholds: Thresholds,
    pub truncation: f64,
    pub arithmetic: ArithmeticMode,
    pub seed: u64,
    pub model: Option<String>,
    pub expect: String,
    pub budget_secs: u64,
}

impl Settings {
    fn validate(&self, name: &str, b: &Builtin) -> Result<()> {
        let bad = |why: String| Err(LabError::ConfigInvalid(format!("{name}: {why}")));
        if self.horizon == 0 {
            return bad("horizon must be at least 1".into());
        }
        for (label, t) in [
            ("epsilon", self.thresholds.epsilon),
            ("floor", self.thresholds.floor),
        ] {
            if !(t > 0.0 && t < 2.0) {
                return bad(format!("{label} = {t} is outside (0, 2)"));
            }
        }
        if !(self.truncation >= 0.0 && self.truncation < 1.0) {
            return bad(format!("truncation {} is outside [0, 1)", self.truncation));
        }
        if let Some(m) = &self.model {
            if !b.takes_model {
                return bad(format!("{} does not take a model", b.name));
            }
            preset(m).map_err(|e| LabError::ConfigInvalid(format!("{name}: {e}")))?;
        }
        Ok(())
    }
}

/// A batch file: an output directory and one or more `[[experiment]]` tables.
///
/// ```toml
/// output = "runs/zd"
///
/// [[experiment]]
/// name = "zd"
/// experiment = "zd-liouville"
/// horizon = 64
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BatchConfig {
    pub output: PathBuf,
    #[serde(rename = "experiment")]
    pub experiments: Vec<ExperimentConfig>,
}

impl BatchConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let config: BatchConfig =
            toml::from_str(text).map_err(|e| LabError::ConfigInvalid(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configs always serialize")
    }

    pub fn validate(&self) -> Result<()> {
        if self.experiments.is_empty() {
            return Err(LabError::ConfigInvalid("no experiments listed".into()));
        }
        let mut names = HashSet::new();
        for e in &self.experiments {
            if e.name.is_empty() || e.name.contains(['/', '\\']) || e.name.starts_with('.') {
                return Err(LabError::ConfigInvalid(format!(
                    "{:?} is not a usable run name",
                    e.name
                )));
            }
            if !names.insert(e.name.as_str()) {
                return Err(LabError::ConfigInvalid(format!(
                    "run name {:?} appears twice",
                    e.name
                )));
            }
            e.settings()?;
        }
        Ok(())
    }
}
