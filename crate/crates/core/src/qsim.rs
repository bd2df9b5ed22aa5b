//! Dense statevector simulation for small registers.
//!
//! Qubit 0 is the most significant bit of the basis index, so on a 3-qubit
//! register `|011⟩` is index 3 and qubit 0 is in state `|0⟩`.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

pub use num_complex::Complex64;

use crate::error::{Error, Result};

pub const MAX_QUBITS: usize = 12;
/// Largest register accepted by [`pauli_panel`].
pub const MAX_PANEL_QUBITS: usize = 6;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

fn check_register(qubits: usize) -> Result<()> {
    if qubits == 0 {
        return Err(Error::InvalidConfig("register needs at least one qubit".into()));
    }
    if qubits > MAX_QUBITS {
        return Err(Error::RegisterTooLarge(qubits));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// `|0…0⟩` on `qubits` qubits.
    pub fn zero(qubits: usize) -> Result<Self> {
        check_register(qubits)?;
        let mut amps = vec![ZERO; 1 << qubits];
        amps[0] = ONE;
        Ok(Self { qubits, amps })
    }

    /// Wraps raw amplitudes. The caller is responsible for normalization.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let len = amps.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::Shape(alloc::format!(
                "amplitude count {len} is not a power of two >= 2"
            )));
        }
        let qubits = len.trailing_zeros() as usize;
        check_register(qubits)?;
        Ok(Self { qubits, amps })
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(Complex64::norm_sqr).sum()
    }

    fn stride(&self, qubit: usize) -> Result<usize> {
        if qubit >= self.qubits {
            return Err(Error::QubitOutOfRange { index: qubit, qubits: self.qubits });
        }
        Ok(1 << (self.qubits - 1 - qubit))
    }

    /// Applies the 2×2 matrix `[[m00, m01], [m10, m11]]` to `qubit`.
    pub fn apply_single(&mut self, qubit: usize, m: [[Complex64; 2]; 2]) -> Result<()> {
        let stride = self.stride(qubit)?;
        let len = self.amps.len();
        let mut base = 0;
        while base < len {
            for i0 in base..base + stride {
                let i1 = i0 + stride;
                let (a, b) = (self.amps[i0], self.amps[i1]);
                self.amps[i0] = m[0][0] * a + m[0][1] * b;
                self.amps[i1] = m[1][0] * a + m[1][1] * b;
            }
            base += 2 * stride;
        }
        Ok(())
    }

    pub fn apply_rx(&mut self, qubit: usize, theta: f64) -> Result<()> {
        self.apply_single(qubit, rx_matrix(theta))
    }

    pub fn apply_ry(&mut self, qubit: usize, theta: f64) -> Result<()> {
        self.apply_single(qubit, ry_matrix(theta))
    }

    pub fn apply_rz(&mut self, qubit: usize, theta: f64) -> Result<()> {
        self.apply_single(qubit, rz_matrix(theta))
    }

    pub fn apply_cnot(&mut self, control: usize, target: usize) -> Result<()> {
        let c = self.stride(control)?;
        let t = self.stride(target)?;
        if control == target {
            return Err(Error::SameQubit(control));
        }
        for i in 0..self.amps.len() {
            // Visit each swapped pair once, from its target-bit-0 member.
            if i & c != 0 && i & t == 0 {
                self.amps.swap(i, i | t);
            }
        }
        Ok(())
    }

    /// Exact `⟨ψ|P|ψ⟩`.
    pub fn expect_pauli(&self, p: &PauliString) -> Result<f64> {
        if p.len() != self.qubits {
            return Err(Error::LengthMismatch { expected: self.qubits, got: p.len() });
        }
        let (mut flip, mut sign, mut ys) = (0usize, 0usize, 0u32);
        for (j, &f) in p.factors().iter().enumerate() {
            let bit = 1 << (self.qubits - 1 - j);
            match f {
                Pauli::I => {}
                Pauli::X => flip |= bit,
                Pauli::Y => {
                    flip |= bit;
                    sign |= bit;
                    ys += 1;
                }
                Pauli::Z => sign |= bit,
            }
        }
        // Y = i·X·Z, so P|b⟩ = i^ys (-1)^popcount(b & sign) |b ^ flip⟩.
        let global = I.powu(ys);
        let mut acc = ZERO;
        for (b, &amp) in self.amps.iter().enumerate() {
            let term = self.amps[b ^ flip].conj() * amp;
            if (b & sign).count_ones() % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        Ok((global * acc).re)
    }

    /// `⟨Z_i⟩` for every qubit `i`, cheaper than going through Pauli strings.
    pub fn z_expectations(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.qubits];
        for (b, amp) in self.amps.iter().enumerate() {
            let p = amp.norm_sqr();
            for (j, slot) in out.iter_mut().enumerate() {
                if b & (1 << (self.qubits - 1 - j)) == 0 {
                    *slot += p;
                } else {
                    *slot -= p;
                }
            }
        }
        out
    }

    /// `|⟨i|ψ⟩|²` for every basis state in index order.
    pub fn basis_probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(Complex64::norm_sqr).collect()
    }
}

pub fn rx_matrix(theta: f64) -> [[Complex64; 2]; 2] {
    let (s, c) = libm::sincos(theta / 2.0);
    let (c, ms) = (Complex64::new(c, 0.0), Complex64::new(0.0, -s));
    [[c, ms], [ms, c]]
}

pub fn ry_matrix(theta: f64) -> [[Complex64; 2]; 2] {
    let (s, c) = libm::sincos(theta / 2.0);
    [
        [Complex64::new(c, 0.0), Complex64::new(-s, 0.0)],
        [Complex64::new(s, 0.0), Complex64::new(c, 0.0)],
    ]
}

pub fn rz_matrix(theta: f64) -> [[Complex64; 2]; 2] {
    let (s, c) = libm::sincos(theta / 2.0);
    [[Complex64::new(c, -s), ZERO], [ZERO, Complex64::new(c, s)]]
}

/// `⊗ Rx(x_i) |0⟩`, one qubit per feature.
pub fn encode_angle(x: &[f64]) -> Result<StateVector> {
    let mut state = StateVector::zero(x.len())?;
    for (q, &theta) in x.iter().enumerate() {
        state.apply_rx(q, theta)?;
    }
    Ok(state)
}

/// Normalized `x` written into the amplitudes of a `ceil(log2 d)`-qubit
/// register (at least one qubit), zero-padded.
pub fn encode_amplitude(x: &[f64]) -> Result<StateVector> {
    let qubits = (x.len().max(2).next_power_of_two().trailing_zeros()) as usize;
    encode_amplitude_into(x, qubits)
}

/// Amplitude encoding into a register of exactly `qubits` qubits.
pub fn encode_amplitude_into(x: &[f64], qubits: usize) -> Result<StateVector> {
    if x.is_empty() {
        return Err(Error::EmptyInput);
    }
    check_register(qubits)?;
    if x.len() > 1 << qubits {
        return Err(Error::Shape(alloc::format!(
            "{} features do not fit in {qubits} qubits",
            x.len()
        )));
    }
    let norm = libm::sqrt(x.iter().map(|v| v * v).sum::<f64>());
    if norm == 0.0 || !norm.is_finite() {
        return Err(Error::ZeroVector);
    }
    let mut amps = vec![ZERO; 1 << qubits];
    for (a, &v) in amps.iter_mut().zip(x) {
        *a = Complex64::new(v / norm, 0.0);
    }
    Ok(StateVector { qubits, amps })
}

/// Layered feature map: per layer, `Rx` on every qubit from one block of
/// `qubits` features, `Ry` from the next block, then a CNOT chain `j → j+1`.
pub fn encode_feature_map(x: &[f64], qubits: usize) -> Result<StateVector> {
    check_register(qubits)?;
    if x.is_empty() || !x.len().is_multiple_of(2 * qubits) {
        return Err(Error::FeatureMapDivisibility { d: x.len(), qubits });
    }
    let mut state = StateVector::zero(qubits)?;
    for layer in x.chunks(2 * qubits) {
        let (rx, ry) = layer.split_at(qubits);
        for (q, &theta) in rx.iter().enumerate() {
            state.apply_rx(q, theta)?;
        }
        for (q, &theta) in ry.iter().enumerate() {
            state.apply_ry(q, theta)?;
        }
        for q in 0..qubits - 1 {
            state.apply_cnot(q, q + 1)?;
        }
    }
    Ok(state)
}

/// Rotation angles for the YZ circular ansatz.
///
/// Layout: layer-major, then qubit, then `(θ_y, θ_z)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AnsatzParams {
    qubits: usize,
    layers: usize,
    thetas: Vec<f64>,
}

impl AnsatzParams {
    pub fn new(qubits: usize, layers: usize, thetas: Vec<f64>) -> Result<Self> {
        if layers == 0 {
            return Err(Error::InvalidConfig("ansatz needs at least one layer".into()));
        }
        let expected = Self::count(qubits, layers);
        if thetas.len() != expected {
            return Err(Error::ParamCount { expected, got: thetas.len() });
        }
        Ok(Self { qubits, layers, thetas })
    }

    pub fn zeros(qubits: usize, layers: usize) -> Self {
        Self { qubits, layers, thetas: vec![0.0; Self::count(qubits, layers)] }
    }

    /// Number of angles for a register: `2 · qubits · layers`.
    pub const fn count(qubits: usize, layers: usize) -> usize {
        2 * qubits * layers
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn layers(&self) -> usize {
        self.layers
    }

    pub fn thetas(&self) -> &[f64] {
        &self.thetas
    }
}

/// Per layer: `Ry(θ)`, `Rz(θ')` on every qubit, then CNOTs `0→1, …, q-2→q-1, q-1→0`.
pub fn apply_yz_circular(state: &mut StateVector, params: &AnsatzParams) -> Result<()> {
    let q = state.qubits();
    if params.qubits != q {
        return Err(Error::ParamCount {
            expected: AnsatzParams::count(q, params.layers),
            got: params.thetas.len(),
        });
    }
    for layer in params.thetas.chunks(2 * q) {
        for (j, pair) in layer.chunks(2).enumerate() {
            state.apply_ry(j, pair[0])?;
            state.apply_rz(j, pair[1])?;
        }
        if q > 1 {
            for j in 0..q {
                state.apply_cnot(j, (j + 1) % q)?;
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    fn symbol(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// Tensor product of single-qubit Paulis; factor `j` acts on qubit `j`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliString(Vec<Pauli>);

impl PauliString {
    pub fn new(factors: Vec<Pauli>) -> Self {
        Self(factors)
    }

    pub fn parse(text: &str) -> Result<Self> {
        text.chars()
            .map(|c| match c {
                'I' => Ok(Pauli::I),
                'X' => Ok(Pauli::X),
                'Y' => Ok(Pauli::Y),
                'Z' => Ok(Pauli::Z),
                other => Err(Error::InvalidSymbol(other)),
            })
            .collect::<Result<Vec<_>>>()
            .map(Self)
    }

    pub fn identity(qubits: usize) -> Self {
        Self(vec![Pauli::I; qubits])
    }

    /// `qubits`-long identity with `p` on the positions in `on`.
    fn with(qubits: usize, p: Pauli, on: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::identity(qubits);
        for j in on {
            s.0[j] = p;
        }
        s
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn factors(&self) -> &[Pauli] {
        &self.0
    }

    pub fn weight(&self) -> usize {
        self.0.iter().filter(|&&p| p != Pauli::I).count()
    }

    pub fn is_identity(&self) -> bool {
        self.weight() == 0
    }

    /// Two Pauli strings anticommute iff they differ, both non-identity, on
    /// an odd number of positions.
    pub fn anticommutes(&self, other: &Self) -> bool {
        self.0
            .iter()
            .zip(&other.0)
            .filter(|(&a, &b)| a != Pauli::I && b != Pauli::I && a != b)
            .count()
            % 2
            == 1
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.0.iter().map(|p| p.symbol()).collect();
        f.write_str(&s)
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliString({self})")
    }
}

/// `2q + 1` pairwise-anticommuting Pauli strings:
/// `Z^{j} X I…`, `Z^{j} Y I…` for `j = 0..q`, then `Z^{⊗q}`.
pub fn anticommuting_set(qubits: usize) -> Vec<PauliString> {
    let mut out = Vec::with_capacity(2 * qubits + 1);
    for j in 0..qubits {
        for p in [Pauli::X, Pauli::Y] {
            let mut s = PauliString::with(qubits, Pauli::Z, 0..j);
            s.0[j] = p;
            out.push(s);
        }
    }
    out.push(PauliString::with(qubits, Pauli::Z, 0..qubits));
    out
}

/// A fixed panel of `2^q` non-identity Pauli strings.
///
/// Order: for each weight `w = 1..=q`, `Z^{⊗w}` on every contiguous window
/// of `w` qubits, then `X^{⊗w}` on the same windows. If that is still short
/// of `2^q` (q ≥ 5), the remaining non-identity strings follow in order of
/// weight, then lexicographically with `I < X < Y < Z`, skipping duplicates.
pub fn pauli_panel(qubits: usize) -> Result<Vec<PauliString>> {
    if qubits == 0 {
        return Err(Error::InvalidConfig("register needs at least one qubit".into()));
    }
    if qubits > MAX_PANEL_QUBITS {
        return Err(Error::RegisterTooLarge(qubits));
    }
    let target = 1usize << qubits;
    let mut out: Vec<PauliString> = Vec::with_capacity(target);
    'windows: for w in 1..=qubits {
        for p in [Pauli::Z, Pauli::X] {
            for start in 0..=qubits - w {
                if out.len() == target {
                    break 'windows;
                }
                out.push(PauliString::with(qubits, p, start..start + w));
            }
        }
    }
    if out.len() < target {
        let seen: alloc::collections::BTreeSet<PauliString> = out.iter().cloned().collect();
        let mut rest: Vec<PauliString> = (1..(1usize << (2 * qubits)))
            .map(|code| {
                PauliString(
                    (0..qubits)
                        .map(|j| match (code >> (2 * (qubits - 1 - j))) & 3 {
                            0 => Pauli::I,
                            1 => Pauli::X,
                            2 => Pauli::Y,
                            _ => Pauli::Z,
                        })
                        .collect(),
                )
            })
            .filter(|s| !seen.contains(s))
            .collect();
        rest.sort_by_key(|s| s.weight());
        out.extend(rest.into_iter().take(target - out.len()));
    }
    Ok(out)
}
