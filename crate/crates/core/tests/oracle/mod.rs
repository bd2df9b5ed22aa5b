//! Slow reference implementations, written without reference to the library
//! code they check.

#![allow(dead_code)]

use simbias_core::qsim::{Complex64, Pauli, PauliString};

/// LZ76 by definition: each phrase is the shortest block starting at `i`
/// that does not occur anywhere in `s[..i + len - 1]`. An unfinished last
/// block still counts.
pub fn lz76_brute(s: &[u8]) -> usize {
    let n = s.len();
    let mut i = 0;
    let mut phrases = 0;
    while i < n {
        let mut len = 1;
        while i + len <= n && occurs(&s[i..i + len], &s[..i + len - 1]) {
            len += 1;
        }
        phrases += 1;
        i += len;
    }
    phrases
}

fn occurs(needle: &[u8], hay: &[u8]) -> bool {
    needle.len() <= hay.len() && hay.windows(needle.len()).any(|w| w == needle)
}

/// Score with the constant-string floor of exactly `log2(n)`.
pub fn lz_brute(s: &[u8]) -> f64 {
    if s.iter().all(|&b| b == s[0]) {
        return (s.len() as f64).log2();
    }
    let mut rev = s.to_vec();
    rev.reverse();
    (s.len() as f64).log2() * (lz76_brute(s) + lz76_brute(&rev)) as f64 / 2.0
}

/// Row-major dense complex matrix.
#[derive(Clone, Debug)]
pub struct Dense {
    pub n: usize,
    pub a: Vec<Complex64>,
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

impl Dense {
    pub fn identity(n: usize) -> Self {
        let mut a = vec![c(0.0, 0.0); n * n];
        for i in 0..n {
            a[i * n + i] = c(1.0, 0.0);
        }
        Dense { n, a }
    }

    pub fn from_2x2(m: [[Complex64; 2]; 2]) -> Self {
        Dense { n: 2, a: vec![m[0][0], m[0][1], m[1][0], m[1][1]] }
    }

    pub fn kron(&self, o: &Dense) -> Dense {
        let n = self.n * o.n;
        let mut a = vec![c(0.0, 0.0); n * n];
        for i in 0..self.n {
            for j in 0..self.n {
                for k in 0..o.n {
                    for l in 0..o.n {
                        a[(i * o.n + k) * n + j * o.n + l] = self.a[i * self.n + j] * o.a[k * o.n + l];
                    }
                }
            }
        }
        Dense { n, a }
    }

    /// `self · o`
    pub fn mul(&self, o: &Dense) -> Dense {
        let n = self.n;
        let mut a = vec![c(0.0, 0.0); n * n];
        for i in 0..n {
            for k in 0..n {
                let x = self.a[i * n + k];
                for j in 0..n {
                    a[i * n + j] += x * o.a[k * n + j];
                }
            }
        }
        Dense { n, a }
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        (0..self.n).map(|i| (0..self.n).map(|j| self.a[i * self.n + j] * v[j]).sum()).collect()
    }
}

pub fn rx(t: f64) -> Dense {
    let (co, si) = ((t / 2.0).cos(), (t / 2.0).sin());
    Dense::from_2x2([[c(co, 0.0), c(0.0, -si)], [c(0.0, -si), c(co, 0.0)]])
}

pub fn ry(t: f64) -> Dense {
    let (co, si) = ((t / 2.0).cos(), (t / 2.0).sin());
    Dense::from_2x2([[c(co, 0.0), c(-si, 0.0)], [c(si, 0.0), c(co, 0.0)]])
}

pub fn rz(t: f64) -> Dense {
    Dense::from_2x2([[c(0.0, -t / 2.0).exp(), c(0.0, 0.0)], [c(0.0, 0.0), c(0.0, t / 2.0).exp()]])
}

pub fn pauli(p: Pauli) -> Dense {
    let z = c(0.0, 0.0);
    let one = c(1.0, 0.0);
    match p {
        Pauli::I => Dense::identity(2),
        Pauli::X => Dense::from_2x2([[z, one], [one, z]]),
        Pauli::Y => Dense::from_2x2([[z, c(0.0, -1.0)], [c(0.0, 1.0), z]]),
        Pauli::Z => Dense::from_2x2([[one, z], [z, -one]]),
    }
}

/// `g` on `target` of a `q`-qubit register; qubit 0 is the leftmost factor.
pub fn on_qubit(g: &Dense, target: usize, q: usize) -> Dense {
    (0..q).fold(Dense::identity(1), |acc, j| {
        acc.kron(if j == target { g } else { &IDENTITY2 })
    })
}

static IDENTITY2: std::sync::LazyLock<Dense> = std::sync::LazyLock::new(|| Dense::identity(2));

/// `|0⟩⟨0|_c ⊗ I + |1⟩⟨1|_c ⊗ X_t`
pub fn cnot(control: usize, target: usize, q: usize) -> Dense {
    let z = c(0.0, 0.0);
    let p0 = Dense::from_2x2([[c(1.0, 0.0), z], [z, z]]);
    let p1 = Dense::from_2x2([[z, z], [z, c(1.0, 0.0)]]);
    let x = pauli(Pauli::X);
    let mut keep = Dense::identity(1);
    let mut flip = Dense::identity(1);
    for j in 0..q {
        let (a, b) = if j == control {
            (&p0, &p1)
        } else if j == target {
            (&*IDENTITY2, &x)
        } else {
            (&*IDENTITY2, &*IDENTITY2)
        };
        keep = keep.kron(a);
        flip = flip.kron(b);
    }
    let a = keep.a.iter().zip(&flip.a).map(|(u, v)| u + v).collect();
    Dense { n: keep.n, a }
}

pub fn pauli_string(p: &PauliString) -> Dense {
    p.factors().iter().fold(Dense::identity(1), |acc, &f| acc.kron(&pauli(f)))
}

pub fn expectation(p: &Dense, psi: &[Complex64]) -> Complex64 {
    psi.iter().zip(p.apply(psi)).map(|(a, b)| a.conj() * b).sum()
}

pub fn zero_state(q: usize) -> Vec<Complex64> {
    let mut v = vec![c(0.0, 0.0); 1 << q];
    v[0] = c(1.0, 0.0);
    v
}

/// Circuit as a product of gate matrices, first gate rightmost.
pub fn circuit(q: usize, gates: &[Dense]) -> Dense {
    gates.iter().fold(Dense::identity(1 << q), |acc, g| g.mul(&acc))
}

pub fn angle_circuit(x: &[f64]) -> Dense {
    let q = x.len();
    let gates: Vec<Dense> = x.iter().enumerate().map(|(j, &t)| on_qubit(&rx(t), j, q)).collect();
    circuit(q, &gates)
}

pub fn feature_map_circuit(x: &[f64], q: usize) -> Dense {
    let mut gates = Vec::new();
    for layer in x.chunks(2 * q) {
        let (xs, ys) = layer.split_at(q);
        for (j, &t) in xs.iter().enumerate() {
            gates.push(on_qubit(&rx(t), j, q));
        }
        for (j, &t) in ys.iter().enumerate() {
            gates.push(on_qubit(&ry(t), j, q));
        }
        for j in 0..q.saturating_sub(1) {
            gates.push(cnot(j, j + 1, q));
        }
    }
    circuit(q, &gates)
}

/// Layers of `Ry, Rz` on each qubit then a CNOT ring (none for one qubit).
pub fn yz_circular_circuit(thetas: &[f64], q: usize) -> Dense {
    let mut gates = Vec::new();
    for layer in thetas.chunks(2 * q) {
        for j in 0..q {
            gates.push(on_qubit(&ry(layer[2 * j]), j, q));
            gates.push(on_qubit(&rz(layer[2 * j + 1]), j, q));
        }
        if q > 1 {
            for j in 0..q {
                gates.push(cnot(j, (j + 1) % q, q));
            }
        }
    }
    circuit(q, &gates)
}

pub fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}
