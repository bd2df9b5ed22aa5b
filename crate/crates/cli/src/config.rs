//! Sweep files: which candidates to score and how many trials to run.
//!
//! ```json
//! {"trials": 10000, "input_bits": 5, "seed": 1, "top_k": 3,
//!  "configs": [{"label": "enc-v1-N", "architecture": "EncoderClassifier",
//!               "sam_kind": "V1", "init": "N", "blocks": 1, "d_model": 8, "qubits": 4}]}
//! ```
//!
//! `encoding`, `measurement`, and `attention` are optional on a config; when
//! given they must agree with the variant-table row selected by
//! `architecture` and `sam_kind`.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use simbias_core::harness::{Architecture, ModelConfig, SamKind};
use simbias_core::nn::InitKind;
use simbias_core::qsam::{AttentionMethod, Encoding, Measurement};

use crate::error::{Result, RunError};

pub const DEFAULT_TRIALS: usize = 10_000;
pub const DEFAULT_INPUT_BITS: usize = 5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunFile {
    #[serde(default)]
    pub trials: Option<usize>,
    #[serde(default)]
    pub input_bits: Option<usize>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub top_k: Option<usize>,
    pub configs: Vec<ConfigEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigEntry {
    pub label: String,
    pub architecture: String,
    pub sam_kind: String,
    pub init: String,
    #[serde(default)]
    pub encoding: Option<String>,
    #[serde(default)]
    pub measurement: Option<String>,
    #[serde(default)]
    pub value_measurement: Option<String>,
    #[serde(default)]
    pub attention: Option<String>,
    #[serde(default)]
    pub blocks: Option<usize>,
    #[serde(default)]
    pub d_model: Option<usize>,
    #[serde(default)]
    pub ffn_hidden: Option<usize>,
    #[serde(default)]
    pub qubits: Option<usize>,
    #[serde(default)]
    pub ansatz_layers: Option<usize>,
}

/// Command-line overrides for a run file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub trials: Option<usize>,
    pub input_bits: Option<usize>,
    pub seed: Option<u64>,
    pub top_k: Option<usize>,
}

/// A validated sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSpec {
    pub configs: Vec<ModelConfig>,
    pub trials: usize,
    pub input_bits: usize,
    pub master_seed: u64,
    pub top_k: usize,
}

impl ConfigEntry {
    pub fn to_model_config(&self, input_bits: usize) -> Result<ModelConfig> {
        let err = |source| RunError::Config { label: self.label.clone(), source };
        let architecture: Architecture = self.architecture.parse().map_err(err)?;
        let sam_kind: SamKind = self.sam_kind.parse().map_err(err)?;
        let init: InitKind = self.init.parse().map_err(err)?;

        let mut cfg = ModelConfig::new(self.label.clone(), architecture, sam_kind, init);
        cfg.input_bits = input_bits;
        if let Some(v) = self.blocks {
            cfg.blocks = v;
        }
        if let Some(v) = self.d_model {
            cfg.d_model = v;
            cfg.ffn_hidden = 2 * v;
        }
        if let Some(v) = self.ffn_hidden {
            cfg.ffn_hidden = v;
        }
        if let Some(v) = self.qubits {
            cfg.qubits = v;
        }
        if let Some(v) = self.ansatz_layers {
            cfg.ansatz_layers = v;
        }
        if let Some(m) = &self.value_measurement {
            cfg.value_measurement = Some(m.parse::<Measurement>().map_err(err)?);
        }
        cfg.validate().map_err(err)?;
        self.check_row(&cfg)?;
        Ok(cfg)
    }

    /// Optional descriptive fields must match the resolved table row.
    fn check_row(&self, cfg: &ModelConfig) -> Result<()> {
        let mismatch = |field: &str, given: &str, want: &str| RunError::Config {
            label: self.label.clone(),
            source: simbias_core::Error::InvalidConfig(format!(
                "{field} {given:?} does not match variant {} (expects {want})",
                cfg.sam_kind
            )),
        };
        let variant = cfg.variant().map_err(|source| RunError::Config { label: self.label.clone(), source })?;
        let Some(v) = variant else {
            for (field, value) in [("encoding", &self.encoding), ("measurement", &self.measurement), ("attention", &self.attention)] {
                if let Some(given) = value {
                    if given != "None" && given != "Classical" {
                        return Err(mismatch(field, given, "none for classical attention"));
                    }
                }
            }
            return Ok(());
        };
        let parse_err = |source| RunError::Config { label: self.label.clone(), source };
        if let Some(given) = &self.encoding {
            if given.parse::<Encoding>().map_err(parse_err)? != v.encoding {
                return Err(mismatch("encoding", given, v.encoding.as_str()));
            }
        }
        if let Some(given) = &self.measurement {
            if given.parse::<Measurement>().map_err(parse_err)? != v.query_key_measurement {
                return Err(mismatch("measurement", given, v.query_key_measurement.as_str()));
            }
        }
        if let Some(given) = &self.attention {
            if given.parse::<AttentionMethod>().map_err(parse_err)? != v.attention {
                return Err(mismatch("attention", given, v.attention.as_str()));
            }
        }
        Ok(())
    }
}

impl RunFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| RunError::Io { path: path.into(), source })?;
        serde_json::from_str(&text).map_err(|source| RunError::Json { path: PathBuf::from(path), source })
    }

    pub fn resolve(&self, overrides: &Overrides) -> Result<RunSpec> {
        let trials = overrides.trials.or(self.trials).unwrap_or(DEFAULT_TRIALS);
        let input_bits = overrides.input_bits.or(self.input_bits).unwrap_or(DEFAULT_INPUT_BITS);
        let master_seed = overrides.seed.or(self.seed).unwrap_or(0);
        if trials == 0 {
            return Err(RunError::Spec("trials must be >= 1".into()));
        }
        if self.configs.is_empty() {
            return Err(RunError::Spec("no configs".into()));
        }
        let mut seen = BTreeSet::new();
        for c in &self.configs {
            if !seen.insert(c.label.as_str()) {
                return Err(RunError::Spec(format!("duplicate label {:?}", c.label)));
            }
        }
        let top_k = overrides.top_k.or(self.top_k).unwrap_or(self.configs.len());
        if top_k == 0 || top_k > self.configs.len() {
            return Err(RunError::Spec(format!(
                "top_k must be in 1..={}, got {top_k}",
                self.configs.len()
            )));
        }
        let configs = self
            .configs
            .iter()
            .map(|c| c.to_model_config(input_bits))
            .collect::<Result<Vec<_>>>()?;
        Ok(RunSpec { configs, trials, input_bits, master_seed, top_k })
    }
}
