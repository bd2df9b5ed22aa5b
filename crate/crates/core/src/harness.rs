//! Boolean-classifier conversion of transformer candidates and the
//! trial loop that harvests their Boolean functions.
//!
//! A candidate maps an `n`-bit input to one bit: each bit is a token from a
//! two-symbol vocabulary, tokens get sinusoidal positions, pass through
//! `blocks` post-norm transformer blocks (attention, residual, layer norm,
//! GELU FFN, residual, layer norm) with no masking or dropout, and a single
//! linear node reads out the class token (encoder) or the token mean
//! (decoder and generator cores). The output bit is `logit > 0`.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::lz::{self, BitString, LzScore};
use crate::nn::{self, InitKind, Matrix};
use crate::qsam::{self, Family, Measurement, QsamGeometry, QsamParams, QsamVariant, VariantName};

/// Largest supported input length; `2^n` evaluations per trial.
pub const MAX_INPUT_BITS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Architecture {
    EncoderClassifier,
    DecoderCore,
    SamGanGeneratorCore,
}

impl Architecture {
    pub fn as_str(self) -> &'static str {
        match self {
            Architecture::EncoderClassifier => "EncoderClassifier",
            Architecture::DecoderCore => "DecoderCore",
            Architecture::SamGanGeneratorCore => "SamGanGeneratorCore",
        }
    }

    /// Which quantum variant table applies.
    pub fn family(self) -> Family {
        match self {
            Architecture::EncoderClassifier | Architecture::DecoderCore => Family::EncoderDecoder,
            Architecture::SamGanGeneratorCore => Family::SamGan,
        }
    }

    fn has_class_token(self) -> bool {
        self == Architecture::EncoderClassifier
    }
}

impl fmt::Display for Architecture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Architecture {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "EncoderClassifier" => Ok(Architecture::EncoderClassifier),
            "DecoderCore" => Ok(Architecture::DecoderCore),
            "SamGanGeneratorCore" => Ok(Architecture::SamGanGeneratorCore),
            other => Err(Error::InvalidConfig(alloc::format!("unknown architecture {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SamKind {
    Classical,
    Quantum(VariantName),
}

impl fmt::Display for SamKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SamKind::Classical => f.write_str("Classical"),
            SamKind::Quantum(name) => f.write_str(name.as_str()),
        }
    }
}

impl FromStr for SamKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        if s == "Classical" {
            Ok(SamKind::Classical)
        } else {
            s.parse().map(SamKind::Quantum)
        }
    }
}

/// One candidate architecture.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelConfig {
    pub label: String,
    pub architecture: Architecture,
    pub sam_kind: SamKind,
    pub init: InitKind,
    pub blocks: usize,
    pub d_model: usize,
    /// FFN hidden width.
    pub ffn_hidden: usize,
    pub input_bits: usize,
    pub qubits: usize,
    pub ansatz_layers: usize,
    /// Overrides the table's value readout (amplitude variants only).
    pub value_measurement: Option<Measurement>,
}

impl ModelConfig {
    /// A config with the defaults: 1 block, `d_model = 8`, hidden `2·d_model`,
    /// 5 input bits, 6 qubits, one ansatz layer.
    pub fn new(label: impl Into<String>, architecture: Architecture, sam_kind: SamKind, init: InitKind) -> Self {
        Self {
            label: label.into(),
            architecture,
            sam_kind,
            init,
            blocks: 1,
            d_model: 8,
            ffn_hidden: 16,
            input_bits: 5,
            qubits: 6,
            ansatz_layers: 1,
            value_measurement: None,
        }
    }

    /// The resolved variant-table row, or `None` for classical attention.
    pub fn variant(&self) -> Result<Option<QsamVariant>> {
        match self.sam_kind {
            SamKind::Classical => {
                if self.value_measurement.is_some() {
                    return Err(Error::InvalidConfig(
                        "value_measurement only applies to quantum attention".into(),
                    ));
                }
                Ok(None)
            }
            SamKind::Quantum(name) => {
                let v = QsamVariant::lookup(self.architecture.family(), name)?;
                match self.value_measurement {
                    Some(m) => v.with_value_measurement(m).map(Some),
                    None => Ok(Some(v)),
                }
            }
        }
    }

    pub fn qsam_geometry(&self) -> Result<Option<QsamGeometry>> {
        self.variant()?
            .map(|v| QsamGeometry::new(v, self.d_model, self.qubits, self.ansatz_layers))
            .transpose()
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(alloc::format!("{}: {msg}", self.label)));
        if self.label.is_empty() {
            return Err(Error::InvalidConfig("empty label".into()));
        }
        if self.blocks == 0 {
            return bad("blocks must be >= 1".into());
        }
        if self.d_model < 2 || !self.d_model.is_multiple_of(2) {
            return bad(alloc::format!("d_model must be even and >= 2, got {}", self.d_model));
        }
        if self.ffn_hidden == 0 {
            return bad("ffn_hidden must be >= 1".into());
        }
        if !(2..=MAX_INPUT_BITS).contains(&self.input_bits) {
            return bad(alloc::format!("input_bits must be in 2..={MAX_INPUT_BITS}, got {}", self.input_bits));
        }
        self.qsam_geometry().map_err(|e| match e {
            Error::InvalidConfig(msg) => Error::InvalidConfig(alloc::format!("{}: {msg}", self.label)),
            other => other,
        })?;
        Ok(())
    }

    /// Attention parameters per block: `3·d·d` for classical, or ansatz
    /// angles plus adapter/projection entries for quantum.
    pub fn sam_parameter_count_per_block(&self) -> Result<usize> {
        Ok(match self.qsam_geometry()? {
            None => 3 * self.d_model * self.d_model,
            Some(g) => g.parameter_count(),
        })
    }

    /// Attention parameters summed over all blocks.
    pub fn sam_parameter_count(&self) -> Result<usize> {
        Ok(self.blocks * self.sam_parameter_count_per_block()?)
    }

    /// Every trainable parameter, including layer-norm gains and biases.
    pub fn total_parameter_count(&self) -> Result<usize> {
        let (d, h) = (self.d_model, self.ffn_hidden);
        let ffn = d * h + h + h * d + d;
        let norms = 4 * d;
        let block = self.sam_parameter_count_per_block()? + ffn + norms;
        let embed = 2 * d + if self.architecture.has_class_token() { d } else { 0 };
        Ok(embed + self.blocks * block + d + 1)
    }
}

/// Anything that maps an `n`-bit input (one byte per bit, index 0 first) to a bit.
pub trait BooleanModel {
    fn eval(&self, input: &[u8]) -> Result<u8>;
}

enum Attention {
    Classical { wq: Matrix, wk: Matrix, wv: Matrix },
    Quantum { geom: QsamGeometry, params: QsamParams },
}

struct Block {
    attention: Attention,
    w1: Matrix,
    b1: Vec<f64>,
    w2: Matrix,
    b2: Vec<f64>,
    // Layer norms start at gain 1, bias 0.
    ln_gain: Vec<f64>,
    ln_bias: Vec<f64>,
}

impl Block {
    fn forward(&self, x: &Matrix) -> Result<Matrix> {
        let attended = match &self.attention {
            Attention::Classical { wq, wk, wv } => nn::classical_attention(x, wq, wk, wv)?,
            Attention::Quantum { geom, params } => qsam::qsam_forward(x, geom, params)?,
        };
        let h = x.add(&attended)?;
        let mut out = Matrix::zeros(x.rows(), x.cols());
        for i in 0..x.rows() {
            let h_row = nn::layer_norm(h.row(i), &self.ln_gain, &self.ln_bias)?;
            let f = nn::ffn(&h_row, &self.w1, &self.b1, &self.w2, &self.b2)?;
            let sum: Vec<f64> = h_row.iter().zip(&f).map(|(a, b)| a + b).collect();
            out.row_mut(i).copy_from_slice(&nn::layer_norm(&sum, &self.ln_gain, &self.ln_bias)?);
        }
        Ok(out)
    }
}

/// A transformer candidate converted to a single-output Boolean classifier.
pub struct BooleanClassifier {
    architecture: Architecture,
    input_bits: usize,
    embedding: Matrix,
    class_token: Option<Vec<f64>>,
    positions: Matrix,
    blocks: Vec<Block>,
    head_w: Vec<f64>,
    head_b: f64,
}

fn sample_vec<R: Rng + ?Sized>(scheme: nn::InitScheme, rows: usize, cols: usize, count: usize, rng: &mut R) -> Vec<f64> {
    scheme.sample(rows, cols, count, rng)
}

/// Builds and randomly initializes a candidate.
///
/// Draw order: token embedding, class token, then per block the attention
/// parameters, `W1`, `b1`, `W2`, `b2`, and finally the head weights and bias.
/// Biases use the distribution of their layer's weights.
pub fn build_boolean_classifier<R: Rng + ?Sized>(config: &ModelConfig, rng: &mut R) -> Result<BooleanClassifier> {
    config.validate()?;
    let d = config.d_model;
    let h = config.ffn_hidden;
    let scheme = config.init.for_matrix();

    let embedding = nn::init_matrix(2, d, scheme, rng);
    let class_token = config
        .architecture
        .has_class_token()
        .then(|| sample_vec(scheme, 1, d, d, rng));
    let seq_len = config.input_bits + usize::from(class_token.is_some());
    let positions = nn::positional_encoding(seq_len, d)?;

    let geom = config.qsam_geometry()?;
    let mut blocks = Vec::with_capacity(config.blocks);
    for _ in 0..config.blocks {
        let attention = match geom {
            None => Attention::Classical {
                wq: nn::init_matrix(d, d, scheme, rng),
                wk: nn::init_matrix(d, d, scheme, rng),
                wv: nn::init_matrix(d, d, scheme, rng),
            },
            Some(g) => Attention::Quantum { geom: g, params: QsamParams::init(&g, config.init, rng) },
        };
        let w1 = nn::init_matrix(d, h, scheme, rng);
        let b1 = sample_vec(scheme, d, h, h, rng);
        let w2 = nn::init_matrix(h, d, scheme, rng);
        let b2 = sample_vec(scheme, h, d, d, rng);
        blocks.push(Block { attention, w1, b1, w2, b2, ln_gain: vec![1.0; d], ln_bias: vec![0.0; d] });
    }
    let head_w = sample_vec(scheme, d, 1, d, rng);
    let head_b = sample_vec(scheme, d, 1, 1, rng)[0];

    Ok(BooleanClassifier {
        architecture: config.architecture,
        input_bits: config.input_bits,
        embedding,
        class_token,
        positions,
        blocks,
        head_w,
        head_b,
    })
}

impl BooleanClassifier {
    /// Head pre-activation for one input.
    pub fn logit(&self, input: &[u8]) -> Result<f64> {
        if input.len() != self.input_bits {
            return Err(Error::LengthMismatch { expected: self.input_bits, got: input.len() });
        }
        let d = self.embedding.cols();
        let mut x = Matrix::zeros(self.positions.rows(), d);
        let offset = usize::from(self.class_token.is_some());
        if let Some(cls) = &self.class_token {
            x.row_mut(0).copy_from_slice(cls);
        }
        for (t, &bit) in input.iter().enumerate() {
            if bit > 1 {
                return Err(Error::InvalidSymbol(char::from(b'0'.wrapping_add(bit))));
            }
            x.row_mut(t + offset).copy_from_slice(self.embedding.row(bit as usize));
        }
        let mut x = x.add(&self.positions)?;
        for block in &self.blocks {
            x = block.forward(&x)?;
        }
        let readout: Vec<f64> = if self.architecture.has_class_token() {
            x.row(0).to_vec()
        } else {
            let n = x.rows() as f64;
            (0..d).map(|j| (0..x.rows()).map(|i| x[(i, j)]).sum::<f64>() / n).collect()
        };
        Ok(readout.iter().zip(&self.head_w).map(|(a, b)| a * b).sum::<f64>() + self.head_b)
    }
}

impl BooleanModel for BooleanClassifier {
    fn eval(&self, input: &[u8]) -> Result<u8> {
        Ok(u8::from(self.logit(input)? > 0.0))
    }
}

/// Bits of `value` as an `n`-bit big-endian vector.
pub fn input_bits(value: usize, n: usize) -> Vec<u8> {
    (0..n).map(|j| ((value >> (n - 1 - j)) & 1) as u8).collect()
}

/// Evaluates `model` on all `2^n` inputs in ascending order.
pub fn truth_table<M: BooleanModel + ?Sized>(model: &M, n: usize) -> Result<BitString> {
    let bits = (0..1usize << n)
        .map(|k| model.eval(&input_bits(k, n)))
        .collect::<Result<Vec<u8>>>()?;
    BitString::from_bits(bits)
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// 64-bit FNV-1a; stable across platforms and builds.
pub fn label_hash(label: &str) -> u64 {
    label.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ u64::from(b)).wrapping_mul(0x0000_0100_0000_01b3))
}

/// Per-trial seed from `(master seed, label, trial index)`.
pub fn trial_seed(master_seed: u64, label: &str, trial: u64) -> u64 {
    let stream = splitmix64(master_seed ^ splitmix64(label_hash(label)));
    splitmix64(stream ^ splitmix64(trial))
}

/// Harvested functions of one configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct HarvestResult {
    pub config: ModelConfig,
    pub seed: u64,
    pub functions: Vec<BitString>,
    pub scores: Vec<LzScore>,
}

impl HarvestResult {
    pub fn trials(&self) -> usize {
        self.functions.len()
    }
}

/// One trial of a generic model builder.
pub fn harvest_trial_with<M, F>(label: &str, n: usize, master_seed: u64, trial: u64, build: &F) -> Result<(BitString, LzScore)>
where
    M: BooleanModel,
    F: Fn(&mut ChaCha8Rng) -> Result<M>,
{
    let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(master_seed, label, trial));
    let model = build(&mut rng)?;
    let f = truth_table(&model, n)?;
    let score = lz::lz_complexity(&f)?;
    Ok((f, score))
}

/// One trial of a configured candidate.
pub fn harvest_trial(config: &ModelConfig, master_seed: u64, trial: u64) -> Result<(BitString, LzScore)> {
    harvest_trial_with(&config.label, config.input_bits, master_seed, trial, &|rng: &mut ChaCha8Rng| {
        build_boolean_classifier(config, rng)
    })
}

/// Runs `trials` independent initializations of `config` sequentially.
pub fn harvest(config: &ModelConfig, trials: usize, master_seed: u64) -> Result<HarvestResult> {
    if trials == 0 {
        return Err(Error::InvalidConfig("trials must be >= 1".into()));
    }
    config.validate()?;
    let (functions, scores) = (0..trials as u64)
        .map(|i| harvest_trial(config, master_seed, i))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .unzip();
    Ok(HarvestResult { config: config.clone(), seed: master_seed, functions, scores })
}
