//! Quantum self-attention.
//!
//! Every token is loaded into three independent circuits (query, key,
//! value). Each circuit is `encoding → YZ circular ansatz → measurement`.
//! Query/key readouts are turned into an `n × n` row-stochastic score matrix
//! by one of three methods, and the scores mix the value readouts. A linear
//! adapter feeds tokens whose width does not fit the encoding, and a linear
//! projection maps value readouts back to the model width.

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};
use crate::nn::{self, InitKind, Matrix};
use crate::qsim::{self, AnsatzParams, PauliString, StateVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    EncoderDecoder,
    SamGan,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VariantName {
    Canonical,
    V1,
    V2,
    V3,
    V4,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Encoding {
    Angle,
    Amplitude,
    FeatureMap,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Measurement {
    /// `⟨Z_0⟩`.
    SingleZ,
    /// `⟨Z_i⟩` on every qubit.
    AllZ,
    /// The `2q + 1` anticommuting Pauli strings.
    Anticommuting,
    /// The fixed `2^q` Pauli panel.
    PauliPanel,
    /// Computational-basis probabilities.
    BasisProbs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AttentionMethod {
    /// `exp(-(zq_i - zk_j)^2)`, row-normalized.
    Gaussian,
    /// Row softmax of the outer product `zq_i · zk_j`.
    SoftmaxOuter,
    /// Scaled dot-product over measured feature vectors.
    ClassicalDot,
}

macro_rules! names {
    ($ty:ident { $($variant:ident => $text:literal),* $(,)? }) => {
        impl $ty {
            pub fn as_str(self) -> &'static str {
                match self { $($ty::$variant => $text),* }
            }
        }

        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl FromStr for $ty {
            type Err = Error;
            fn from_str(s: &str) -> Result<Self> {
                match s {
                    $($text => Ok($ty::$variant),)*
                    other => Err(Error::InvalidConfig(alloc::format!(
                        concat!("unknown ", stringify!($ty), " {:?}"), other
                    ))),
                }
            }
        }
    };
}

names!(Family { EncoderDecoder => "EncoderDecoder", SamGan => "SamGan" });
names!(VariantName { Canonical => "Canonical", V1 => "V1", V2 => "V2", V3 => "V3", V4 => "V4" });
names!(Encoding { Angle => "Angle", Amplitude => "Amplitude", FeatureMap => "FeatureMap" });
names!(Measurement {
    SingleZ => "SingleZ",
    AllZ => "AllZ",
    Anticommuting => "Anticommuting",
    PauliPanel => "PauliPanel",
    BasisProbs => "BasisProbs",
});
names!(AttentionMethod { Gaussian => "Gaussian", SoftmaxOuter => "SoftmaxOuter", ClassicalDot => "ClassicalDot" });

impl Measurement {
    /// Number of real values produced on a `qubits`-qubit register.
    pub fn output_dim(self, qubits: usize) -> usize {
        match self {
            Measurement::SingleZ => 1,
            Measurement::AllZ => qubits,
            Measurement::Anticommuting => 2 * qubits + 1,
            Measurement::PauliPanel | Measurement::BasisProbs => 1 << qubits,
        }
    }
}

/// One row of a variant table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QsamVariant {
    pub family: Family,
    pub name: VariantName,
    pub encoding: Encoding,
    pub query_key_measurement: Measurement,
    pub value_measurement: Measurement,
    pub attention: AttentionMethod,
}

impl QsamVariant {
    /// Rows of the variant table for `family`, in table order.
    pub fn table(family: Family) -> Vec<QsamVariant> {
        use AttentionMethod::*;
        use Encoding::*;
        use Measurement::*;
        use VariantName::*;
        let row = |name, encoding, qk, attention| QsamVariant {
            family,
            name,
            encoding,
            query_key_measurement: qk,
            value_measurement: if encoding == Amplitude { BasisProbs } else { AllZ },
            attention,
        };
        match family {
            Family::EncoderDecoder => alloc::vec![
                row(Canonical, FeatureMap, SingleZ, Gaussian),
                row(V1, Amplitude, SingleZ, Gaussian),
                row(V2, Amplitude, SingleZ, SoftmaxOuter),
                row(V3, Amplitude, PauliPanel, ClassicalDot),
                row(V4, Amplitude, Anticommuting, ClassicalDot),
            ],
            Family::SamGan => alloc::vec![
                row(Canonical, Angle, SingleZ, Gaussian),
                row(V1, Angle, AllZ, ClassicalDot),
                row(V2, Angle, Anticommuting, ClassicalDot),
                row(V3, Angle, SingleZ, SoftmaxOuter),
            ],
        }
    }

    pub fn lookup(family: Family, name: VariantName) -> Result<QsamVariant> {
        Self::table(family).into_iter().find(|v| v.name == name).ok_or_else(|| {
            let allowed: Vec<&str> = Self::table(family).iter().map(|v| v.name.as_str()).collect();
            Error::InvalidConfig(alloc::format!(
                "variant {name} is not in the {family} table (allowed: {})",
                allowed.join(", ")
            ))
        })
    }

    /// Swaps the value readout. Amplitude-encoded variants accept
    /// `BasisProbs` or `PauliPanel`; angle-type encodings only `AllZ`.
    pub fn with_value_measurement(mut self, m: Measurement) -> Result<QsamVariant> {
        let ok = match self.encoding {
            Encoding::Amplitude => matches!(m, Measurement::BasisProbs | Measurement::PauliPanel),
            Encoding::Angle | Encoding::FeatureMap => m == Measurement::AllZ,
        };
        if !ok {
            return Err(Error::InvalidConfig(alloc::format!(
                "value measurement {m} is not available with {} encoding",
                self.encoding
            )));
        }
        self.value_measurement = m;
        Ok(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    Query,
    Key,
    Value,
}

/// Shape information for one quantum attention layer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QsamGeometry {
    pub variant: QsamVariant,
    pub d_model: usize,
    pub qubits: usize,
    pub ansatz_layers: usize,
}

impl QsamGeometry {
    pub fn new(variant: QsamVariant, d_model: usize, qubits: usize, ansatz_layers: usize) -> Result<Self> {
        if qubits == 0 || qubits > qsim::MAX_QUBITS {
            return Err(Error::RegisterTooLarge(qubits));
        }
        let uses_panel = variant.query_key_measurement == Measurement::PauliPanel
            || variant.value_measurement == Measurement::PauliPanel;
        if uses_panel && qubits > qsim::MAX_PANEL_QUBITS {
            return Err(Error::InvalidConfig(alloc::format!(
                "Pauli panel measurement is capped at {} qubits, got {qubits}",
                qsim::MAX_PANEL_QUBITS
            )));
        }
        if d_model == 0 || ansatz_layers == 0 {
            return Err(Error::InvalidConfig("d_model and ansatz layers must be positive".into()));
        }
        Ok(Self { variant, d_model, qubits, ansatz_layers })
    }

    /// Width of the vector handed to the encoding.
    pub fn input_width(&self) -> usize {
        let (d, q) = (self.d_model, self.qubits);
        match self.variant.encoding {
            Encoding::Angle => q,
            Encoding::FeatureMap if d % (2 * q) == 0 => d,
            Encoding::FeatureMap => 2 * q,
            Encoding::Amplitude => d.min(1 << q),
        }
    }

    pub fn needs_adapter(&self) -> bool {
        self.input_width() != self.d_model
    }

    pub fn measurement(&self, role: Role) -> Measurement {
        match role {
            Role::Query | Role::Key => self.variant.query_key_measurement,
            Role::Value => self.variant.value_measurement,
        }
    }

    pub fn feature_dim(&self, role: Role) -> usize {
        self.measurement(role).output_dim(self.qubits)
    }

    pub fn needs_projection(&self) -> bool {
        self.feature_dim(Role::Value) != self.d_model
    }

    /// Ansatz angles plus adapter and projection entries.
    pub fn parameter_count(&self) -> usize {
        let angles = 3 * AnsatzParams::count(self.qubits, self.ansatz_layers);
        let adapter = if self.needs_adapter() { self.d_model * self.input_width() } else { 0 };
        let projection = if self.needs_projection() {
            self.feature_dim(Role::Value) * self.d_model
        } else {
            0
        };
        angles + adapter + projection
    }
}

/// Trainable state of one quantum attention layer.
#[derive(Debug, Clone, PartialEq)]
pub struct QsamParams {
    pub ansatz_q: AnsatzParams,
    pub ansatz_k: AnsatzParams,
    pub ansatz_v: AnsatzParams,
    /// `d_model × input_width`, present iff the geometry needs it.
    pub adapter: Option<Matrix>,
    /// `value_dim × d_model`, present iff the geometry needs it.
    pub projection: Option<Matrix>,
}

impl QsamParams {
    /// Draws every parameter in a fixed order: query, key, value angles,
    /// then adapter, then projection.
    pub fn init<R: Rng + ?Sized>(geom: &QsamGeometry, init: InitKind, rng: &mut R) -> Self {
        let count = AnsatzParams::count(geom.qubits, geom.ansatz_layers);
        let mut angles = |role| {
            let scheme = init.for_circuit(geom.qubits, geom.feature_dim(role));
            let thetas = scheme.sample(geom.qubits, geom.qubits, count, rng);
            AnsatzParams::new(geom.qubits, geom.ansatz_layers, thetas).expect("sized by count")
        };
        let ansatz_q = angles(Role::Query);
        let ansatz_k = angles(Role::Key);
        let ansatz_v = angles(Role::Value);
        let adapter = geom
            .needs_adapter()
            .then(|| nn::init_matrix(geom.d_model, geom.input_width(), init.for_matrix(), rng));
        let projection = geom.needs_projection().then(|| {
            nn::init_matrix(geom.feature_dim(Role::Value), geom.d_model, init.for_matrix(), rng)
        });
        Self { ansatz_q, ansatz_k, ansatz_v, adapter, projection }
    }

    fn ansatz(&self, role: Role) -> &AnsatzParams {
        match role {
            Role::Query => &self.ansatz_q,
            Role::Key => &self.ansatz_k,
            Role::Value => &self.ansatz_v,
        }
    }
}

/// Loads `input` with `encoding` into a `qubits`-qubit register.
///
/// An all-zero amplitude input has no direction; it is loaded as `|0…0⟩`.
pub fn encode(encoding: Encoding, input: &[f64], qubits: usize) -> Result<StateVector> {
    match encoding {
        Encoding::Angle => {
            if input.len() != qubits {
                return Err(Error::LengthMismatch { expected: qubits, got: input.len() });
            }
            qsim::encode_angle(input)
        }
        Encoding::FeatureMap => qsim::encode_feature_map(input, qubits),
        Encoding::Amplitude => match qsim::encode_amplitude_into(input, qubits) {
            Err(Error::ZeroVector) => StateVector::zero(qubits),
            other => other,
        },
    }
}

pub fn measure(state: &StateVector, m: Measurement) -> Result<Vec<f64>> {
    let q = state.qubits();
    let paulis = |set: Vec<PauliString>| set.iter().map(|p| state.expect_pauli(p)).collect();
    match m {
        Measurement::SingleZ => Ok(alloc::vec![state.z_expectations()[0]]),
        Measurement::AllZ => Ok(state.z_expectations()),
        Measurement::Anticommuting => paulis(qsim::anticommuting_set(q)),
        Measurement::PauliPanel => paulis(qsim::pauli_panel(q)?),
        Measurement::BasisProbs => Ok(state.basis_probabilities()),
    }
}

/// Readout of one token through the `role` circuit.
pub fn token_features(token: &[f64], geom: &QsamGeometry, params: &QsamParams, role: Role) -> Result<Vec<f64>> {
    if token.len() != geom.d_model {
        return Err(Error::LengthMismatch { expected: geom.d_model, got: token.len() });
    }
    let adapted;
    let input = match &params.adapter {
        Some(a) => {
            adapted = a.vecmul(token)?;
            &adapted[..]
        }
        None => token,
    };
    let mut state = encode(geom.variant.encoding, input, geom.qubits)?;
    qsim::apply_yz_circular(&mut state, params.ansatz(role))?;
    measure(&state, geom.measurement(role))
}

pub fn gaussian_attention(zq: &[f64], zk: &[f64]) -> Matrix {
    let mut out = Matrix::zeros(zq.len(), zk.len());
    for (i, &q) in zq.iter().enumerate() {
        let row = out.row_mut(i);
        for (slot, &k) in row.iter_mut().zip(zk) {
            *slot = libm::exp(-(q - k) * (q - k));
        }
        let sum: f64 = row.iter().sum();
        row.iter_mut().for_each(|v| *v /= sum);
    }
    out
}

pub fn softmax_outer_attention(zq: &[f64], zk: &[f64]) -> Matrix {
    let mut out = Matrix::zeros(zq.len(), zk.len());
    for (i, &q) in zq.iter().enumerate() {
        let row = out.row_mut(i);
        for (slot, &k) in row.iter_mut().zip(zk) {
            *slot = q * k;
        }
        nn::softmax_in_place(row);
    }
    out
}

/// Row-stochastic scores from query/key readouts (`n × dim` each).
pub fn attention_scores(method: AttentionMethod, q: &Matrix, k: &Matrix) -> Result<Matrix> {
    let scalar = |m: &Matrix| -> Result<Vec<f64>> {
        if m.cols() != 1 {
            return Err(Error::InvalidConfig(alloc::format!(
                "{method} attention needs one readout per token, got {}",
                m.cols()
            )));
        }
        Ok(m.as_slice().to_vec())
    };
    match method {
        AttentionMethod::Gaussian => Ok(gaussian_attention(&scalar(q)?, &scalar(k)?)),
        AttentionMethod::SoftmaxOuter => Ok(softmax_outer_attention(&scalar(q)?, &scalar(k)?)),
        AttentionMethod::ClassicalDot => nn::scaled_dot_scores(q, k),
    }
}

fn readouts(x: &Matrix, geom: &QsamGeometry, params: &QsamParams, role: Role) -> Result<Matrix> {
    let dim = geom.feature_dim(role);
    let mut out = Matrix::zeros(x.rows(), dim);
    for i in 0..x.rows() {
        let f = token_features(x.row(i), geom, params, role)?;
        out.row_mut(i).copy_from_slice(&f);
    }
    Ok(out)
}

/// Score matrix for a token sequence `x` (`n × d_model`).
pub fn qsam_scores(x: &Matrix, geom: &QsamGeometry, params: &QsamParams) -> Result<Matrix> {
    let q = readouts(x, geom, params, Role::Query)?;
    let k = readouts(x, geom, params, Role::Key)?;
    attention_scores(geom.variant.attention, &q, &k)
}

/// `scores · values`, projected back to `d_model`.
pub fn qsam_forward(x: &Matrix, geom: &QsamGeometry, params: &QsamParams) -> Result<Matrix> {
    if x.cols() != geom.d_model {
        return Err(Error::Shape(alloc::format!(
            "input width {} does not match d_model {}",
            x.cols(),
            geom.d_model
        )));
    }
    let scores = qsam_scores(x, geom, params)?;
    let values = readouts(x, geom, params, Role::Value)?;
    let mixed = scores.matmul(&values)?;
    match &params.projection {
        Some(p) => mixed.matmul(p),
        None => Ok(mixed),
    }
}
