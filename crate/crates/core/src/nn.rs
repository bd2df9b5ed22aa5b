//! Small dense building blocks for transformer layers: matrices, random
//! initialization, softmax, scaled dot-product attention, layer norm,
//! sinusoidal positions, and the GELU feed-forward network.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use rand::Rng;
use rand_distr::{Distribution, StandardNormal, Uniform};

use crate::error::{Error, Result};

pub const LAYER_NORM_EPS: f64 = 1e-5;

/// Row-major dense matrix of `f64`.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Shape(alloc::format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Shape("ragged rows".into()));
        }
        Ok(Self { rows: rows.len(), cols, data: rows.concat() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)];
            }
        }
        out
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::Shape(alloc::format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                let src = rhs.row(k);
                for (o, &b) in out.row_mut(i).iter_mut().zip(src) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        if (self.rows, self.cols) != (rhs.rows, rhs.cols) {
            return Err(Error::Shape("elementwise add of different shapes".into()));
        }
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect();
        Ok(Self { rows: self.rows, cols: self.cols, data })
    }

    pub fn scale(mut self, factor: f64) -> Self {
        self.data.iter_mut().for_each(|v| *v *= factor);
        self
    }

    /// Row vector times this matrix.
    pub fn vecmul(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.rows {
            return Err(Error::Shape(alloc::format!(
                "vector of length {} times {}x{} matrix",
                x.len(),
                self.rows,
                self.cols
            )));
        }
        let mut out = vec![0.0; self.cols];
        for (k, &a) in x.iter().enumerate() {
            for (o, &b) in out.iter_mut().zip(self.row(k)) {
                *o += a * b;
            }
        }
        Ok(out)
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Parameter initialization scheme.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitScheme {
    /// i.i.d. `N(0, 1)`.
    Normal,
    /// `U(±sqrt(6 / (rows + cols)))`.
    XavierUniform,
    /// `U(±sqrt(6 / (fan_in + fan_out)))` with circuit-derived fans.
    XavierCustom { fan_in: usize, fan_out: usize },
    /// Every parameter is zero. Degenerate reference model.
    Zeros,
}

impl InitScheme {
    /// Half-width of the uniform range for a `rows x cols` tensor, if uniform.
    pub fn uniform_bound(&self, rows: usize, cols: usize) -> Option<f64> {
        match *self {
            InitScheme::XavierUniform => Some(libm::sqrt(6.0 / (rows + cols) as f64)),
            InitScheme::XavierCustom { fan_in, fan_out } => {
                Some(libm::sqrt(6.0 / (fan_in + fan_out).max(1) as f64))
            }
            InitScheme::Normal | InitScheme::Zeros => None,
        }
    }

    /// `count` samples for a parameter tensor of logical shape `rows x cols`.
    pub fn sample<R: Rng + ?Sized>(&self, rows: usize, cols: usize, count: usize, rng: &mut R) -> Vec<f64> {
        match self {
            InitScheme::Zeros => vec![0.0; count],
            InitScheme::Normal => (0..count).map(|_| StandardNormal.sample(rng)).collect(),
            _ => {
                let bound = self.uniform_bound(rows, cols).unwrap_or(0.0);
                match Uniform::new_inclusive(-bound, bound) {
                    Ok(dist) => (0..count).map(|_| dist.sample(rng)).collect(),
                    Err(_) => vec![0.0; count],
                }
            }
        }
    }
}

/// Model-wide initialization choice (`N`, `X`, `XB`, or the all-zero reference).
///
/// Classical weight matrices use their own shape as fans under both Xavier
/// kinds. Circuit angles use `fan_in = fan_out = qubits` under `X`, and
/// `fan_in = qubits`, `fan_out = measured operators` under `XB`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InitKind {
    Normal,
    Xavier,
    XavierQuantum,
    Zeros,
}

impl InitKind {
    pub fn as_str(self) -> &'static str {
        match self {
            InitKind::Normal => "N",
            InitKind::Xavier => "X",
            InitKind::XavierQuantum => "XB",
            InitKind::Zeros => "Zeros",
        }
    }

    pub fn for_matrix(self) -> InitScheme {
        match self {
            InitKind::Normal => InitScheme::Normal,
            InitKind::Xavier | InitKind::XavierQuantum => InitScheme::XavierUniform,
            InitKind::Zeros => InitScheme::Zeros,
        }
    }

    pub fn for_circuit(self, encoding_qubits: usize, measured_operators: usize) -> InitScheme {
        match self {
            InitKind::Normal => InitScheme::Normal,
            InitKind::Xavier => InitScheme::XavierCustom { fan_in: encoding_qubits, fan_out: encoding_qubits },
            InitKind::XavierQuantum => InitScheme::XavierCustom {
                fan_in: encoding_qubits,
                fan_out: measured_operators,
            },
            InitKind::Zeros => InitScheme::Zeros,
        }
    }
}

impl core::str::FromStr for InitKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "N" | "Normal" => Ok(InitKind::Normal),
            "X" | "Xavier" | "XavierUniform" => Ok(InitKind::Xavier),
            "XB" | "XavierQuantum" | "XavierCustom" => Ok(InitKind::XavierQuantum),
            "Zeros" => Ok(InitKind::Zeros),
            other => Err(Error::InvalidConfig(alloc::format!("unknown init scheme {other:?}"))),
        }
    }
}

/// A `rows x cols` matrix drawn from `scheme`.
pub fn init_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, scheme: InitScheme, rng: &mut R) -> Matrix {
    Matrix { rows, cols, data: scheme.sample(rows, cols, rows * cols, rng) }
}

/// Numerically stable softmax of one row, in place.
pub fn softmax_in_place(row: &mut [f64]) {
    let max = row.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut sum = 0.0;
    for v in row.iter_mut() {
        *v = libm::exp(*v - max);
        sum += *v;
    }
    for v in row.iter_mut() {
        *v /= sum;
    }
}

pub fn softmax_rows(m: &Matrix) -> Matrix {
    let mut out = m.clone();
    for i in 0..out.rows {
        softmax_in_place(out.row_mut(i));
    }
    out
}

/// `softmax(Q Kᵀ / sqrt(d_k)) V` with `Q = X Wq`, `K = X Wk`, `V = X Wv`.
pub fn classical_attention(x: &Matrix, wq: &Matrix, wk: &Matrix, wv: &Matrix) -> Result<Matrix> {
    let q = x.matmul(wq)?;
    let k = x.matmul(wk)?;
    let v = x.matmul(wv)?;
    scaled_dot_attention(&q, &k, &v)
}

/// Row-stochastic score matrix `softmax(Q Kᵀ / sqrt(d_k))`.
pub fn scaled_dot_scores(q: &Matrix, k: &Matrix) -> Result<Matrix> {
    if q.cols != k.cols {
        return Err(Error::Shape("query and key widths differ".into()));
    }
    let scale = 1.0 / libm::sqrt(q.cols as f64);
    Ok(softmax_rows(&q.matmul(&k.transpose())?.scale(scale)))
}

pub fn scaled_dot_attention(q: &Matrix, k: &Matrix, v: &Matrix) -> Result<Matrix> {
    scaled_dot_scores(q, k)?.matmul(v)
}

/// `(x - mean) / sqrt(var + eps) * gain + bias` over one row.
pub fn layer_norm(x: &[f64], gain: &[f64], bias: &[f64]) -> Result<Vec<f64>> {
    if x.len() < 2 || gain.len() != x.len() || bias.len() != x.len() {
        return Err(Error::Shape("layer norm needs matching rows of length >= 2".into()));
    }
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    let var = x.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    let inv = 1.0 / libm::sqrt(var + LAYER_NORM_EPS);
    Ok(x.iter()
        .zip(gain.iter().zip(bias))
        .map(|(v, (g, b))| (v - mean) * inv * g + b)
        .collect())
}

/// Sinusoidal table: `PE(t, 2i) = sin(t / 10000^(2i/d))`, `PE(t, 2i+1) = cos(…)`.
pub fn positional_encoding(len: usize, dim: usize) -> Result<Matrix> {
    if !dim.is_multiple_of(2) || dim == 0 {
        return Err(Error::OddDimension(dim));
    }
    let mut pe = Matrix::zeros(len, dim);
    for t in 0..len {
        for i in 0..dim / 2 {
            let angle = t as f64 / libm::pow(10000.0, (2 * i) as f64 / dim as f64);
            let (s, c) = libm::sincos(angle);
            pe[(t, 2 * i)] = s;
            pe[(t, 2 * i + 1)] = c;
        }
    }
    Ok(pe)
}

/// GELU, tanh approximation.
pub fn gelu(x: f64) -> f64 {
    const C: f64 = 0.797_884_560_802_865_4; // sqrt(2/pi)
    0.5 * x * (1.0 + libm::tanh(C * (x + 0.044_715 * x * x * x)))
}

/// `GELU(x W1 + b1) W2 + b2`.
pub fn ffn(x: &[f64], w1: &Matrix, b1: &[f64], w2: &Matrix, b2: &[f64]) -> Result<Vec<f64>> {
    if b1.len() != w1.cols || b2.len() != w2.cols {
        return Err(Error::Shape("bias length does not match layer width".into()));
    }
    let mut hidden = w1.vecmul(x)?;
    for (h, b) in hidden.iter_mut().zip(b1) {
        *h = gelu(*h + b);
    }
    let mut out = w2.vecmul(&hidden)?;
    for (o, b) in out.iter_mut().zip(b2) {
        *o += b;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn xavier_bounds_and_determinism() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let m = init_matrix(3, 3, InitScheme::XavierUniform, &mut rng);
        assert!(m.as_slice().iter().all(|v| v.abs() <= 1.0));

        let custom = InitScheme::XavierCustom { fan_in: 4, fan_out: 2 };
        let m = init_matrix(10, 10, custom, &mut rng);
        assert!(m.as_slice().iter().all(|v| v.abs() <= 1.0));

        let a = init_matrix(4, 5, InitScheme::Normal, &mut ChaCha8Rng::seed_from_u64(9));
        let b = init_matrix(4, 5, InitScheme::Normal, &mut ChaCha8Rng::seed_from_u64(9));
        assert_eq!(a, b);
    }

    #[test]
    fn normal_moments() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let m = init_matrix(1, 100_000, InitScheme::Normal, &mut rng);
        let n = m.len() as f64;
        let mean = m.as_slice().iter().sum::<f64>() / n;
        let var = m.as_slice().iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
        assert!(mean.abs() < 0.02, "mean {mean}");
        assert!((var - 1.0).abs() < 0.05, "var {var}");
    }

    #[test]
    fn softmax_values() {
        let m = Matrix::from_rows(&[vec![2.0, 2.0, 2.0], vec![1.0, 2.0, 3.0], vec![0.0, 800.0, 0.0]]).unwrap();
        let s = softmax_rows(&m);
        for j in 0..3 {
            assert!((s[(0, j)] - 1.0 / 3.0).abs() < 1e-15);
        }
        let want = [0.090_030_573_170_380_46, 0.244_728_471_054_797_64, 0.665_240_955_774_821_9];
        for (j, w) in want.iter().enumerate() {
            assert!((s[(1, j)] - w).abs() < 1e-12);
        }
        assert!((s[(2, 1)] - 1.0).abs() < 1e-12 && s[(2, 0)] < 1e-300);
    }

    #[test]
    fn attention_degenerate_cases() {
        let x = Matrix::from_rows(&[vec![1.0, 0.5], vec![-2.0, 3.0], vec![0.2, 0.1]]).unwrap();
        let zero = Matrix::zeros(2, 2);
        let wv = Matrix::from_rows(&[vec![1.0, 2.0], vec![0.0, -1.0]]).unwrap();
        let out = classical_attention(&x, &zero, &zero, &wv).unwrap();
        let v = x.matmul(&wv).unwrap();
        for j in 0..2 {
            let mean = (v[(0, j)] + v[(1, j)] + v[(2, j)]) / 3.0;
            for i in 0..3 {
                assert!((out[(i, j)] - mean).abs() < 1e-12);
            }
        }

        let one = Matrix::from_rows(&[vec![0.3, -0.7]]).unwrap();
        let w = Matrix::from_rows(&[vec![5.0, 1.0], vec![2.0, 3.0]]).unwrap();
        let out = classical_attention(&one, &w, &w, &wv).unwrap();
        assert_eq!(out, one.matmul(&wv).unwrap());

        assert!(classical_attention(&x, &Matrix::zeros(3, 2), &zero, &wv).is_err());
    }

    #[test]
    fn attention_two_by_two() {
        // X = I, Wq = Wk = I, Wv = [[1,2],[3,4]], d_k = 2.
        // logits = I / sqrt(2); row 0 weights = (e^a, 1)/(e^a+1), a = 1/sqrt(2).
        let eye = Matrix::from_rows(&[vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let wv = Matrix::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        let out = classical_attention(&eye, &eye, &eye, &wv).unwrap();
        let a = libm::exp(1.0 / libm::sqrt(2.0));
        let (w0, w1) = (a / (a + 1.0), 1.0 / (a + 1.0));
        assert!((out[(0, 0)] - (w0 * 1.0 + w1 * 3.0)).abs() < 1e-12);
        assert!((out[(0, 1)] - (w0 * 2.0 + w1 * 4.0)).abs() < 1e-12);
        assert!((out[(1, 0)] - (w1 * 1.0 + w0 * 3.0)).abs() < 1e-12);
        assert!((out[(1, 1)] - (w1 * 2.0 + w0 * 4.0)).abs() < 1e-12);
    }

    #[test]
    fn layer_norm_cases() {
        let ones = [1.0; 4];
        let zeros = [0.0; 4];
        assert!(layer_norm(&[3.0; 4], &ones, &zeros).unwrap().iter().all(|v| v.abs() < 1e-12));

        let out = layer_norm(&[1.0, -1.0], &[1.0, 1.0], &[0.0, 0.0]).unwrap();
        let scale = 1.0 / libm::sqrt(1.0 + LAYER_NORM_EPS);
        assert!((out[0] - scale).abs() < 1e-15 && (out[1] + scale).abs() < 1e-15);

        let bias = [0.5, -2.0, 7.0, 1.0];
        assert_eq!(layer_norm(&[1.0, 5.0, -3.0, 2.0], &zeros, &bias).unwrap(), bias);
        assert!(layer_norm(&[1.0], &[1.0], &[0.0]).is_err());
    }

    #[test]
    fn positional_table() {
        let pe = positional_encoding(4, 6).unwrap();
        assert_eq!(pe.row(0), &[0.0, 1.0, 0.0, 1.0, 0.0, 1.0]);
        assert!((pe[(1, 0)] - 0.841_470_984_807_896_5).abs() < 1e-15);
        assert!(pe.as_slice().iter().all(|v| v.abs() <= 1.0));
        assert_eq!(positional_encoding(3, 5), Err(Error::OddDimension(5)));
    }

    #[test]
    fn gelu_and_ffn() {
        // 0.5 (1 + tanh(sqrt(2/pi) * 1.044715))
        assert!((gelu(1.0) - 0.841_191_990_607_743).abs() < 1e-12);
        assert_eq!(gelu(0.0), 0.0);
        assert!((gelu(20.0) - 20.0).abs() < 1e-12);

        let w1 = Matrix::from_rows(&[vec![1.0, -1.0, 2.0], vec![0.5, 0.5, 0.5]]).unwrap();
        let w2 = Matrix::from_rows(&[vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]]).unwrap();
        assert_eq!(ffn(&[0.0, 0.0], &w1, &[0.0; 3], &w2, &[0.0; 2]).unwrap(), vec![0.0, 0.0]);
        assert!(ffn(&[0.0, 0.0], &w1, &[0.0; 2], &w2, &[0.0; 2]).is_err());
        assert!(ffn(&[0.0; 3], &w1, &[0.0; 3], &w2, &[0.0; 2]).is_err());
    }
}
