use serde::{Deserialize, Serialize};
use simbias_core::harness::HarvestResult;
use simbias_core::lz::{BitString, LzScore};
use simbias_core::qsam::{Family, QsamVariant};

use crate::error::{Result, RunError};

/// Harvest dump; functions are MSB-first hex of the truth table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HarvestRecord {
    pub label: String,
    pub seed: u64,
    pub n: usize,
    #[serde(rename = "T")]
    pub trials: usize,
    pub functions: Vec<String>,
    pub scores: Vec<f64>,
}

impl From<&HarvestResult> for HarvestRecord {
    fn from(r: &HarvestResult) -> Self {
        HarvestRecord {
            label: r.config.label.clone(),
            seed: r.seed,
            n: r.config.input_bits,
            trials: r.trials(),
            functions: r.functions.iter().map(BitString::to_hex).collect(),
            scores: r.scores.iter().map(|s| s.value()).collect(),
        }
    }
}

impl HarvestRecord {
    /// Decodes the functions back to bit strings of length `2^n`.
    pub fn decode(&self) -> Result<Vec<(BitString, LzScore)>> {
        if self.functions.len() != self.trials || self.scores.len() != self.trials {
            return Err(RunError::Spec(format!("record {:?}: T does not match array lengths", self.label)));
        }
        let len = 1usize << self.n;
        self.functions
            .iter()
            .zip(&self.scores)
            .map(|(h, &s)| Ok((BitString::from_hex(h, len)?, LzScore(s))))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VariantRow {
    pub name: String,
    pub encoding: String,
    pub query_key_measurement: String,
    pub value_measurement: String,
    pub attention: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VariantTables {
    #[serde(rename = "EncoderDecoder")]
    pub encoder_decoder: Vec<VariantRow>,
    #[serde(rename = "SamGan")]
    pub sam_gan: Vec<VariantRow>,
}

fn rows(family: Family) -> Vec<VariantRow> {
    QsamVariant::table(family)
        .into_iter()
        .map(|v| VariantRow {
            name: v.name.to_string(),
            encoding: v.encoding.to_string(),
            query_key_measurement: v.query_key_measurement.to_string(),
            value_measurement: v.value_measurement.to_string(),
            attention: v.attention.to_string(),
        })
        .collect()
}

pub fn variant_tables() -> VariantTables {
    VariantTables { encoder_decoder: rows(Family::EncoderDecoder), sam_gan: rows(Family::SamGan) }
}
