//! Lempel–Ziv (1976) complexity of binary strings.
//!
//! The phrase count follows the exhaustive-history parse: each new phrase is
//! the shortest prefix of the unparsed remainder that cannot be copied from
//! the history seen so far (copies may overlap the phrase itself). A final
//! phrase that runs off the end of the string counts as one phrase.
//!
//! The scalar complexity averages the forward and backward phrase counts and
//! scales by `log2(len)`. Constant strings are pinned to exactly `log2(len)`,
//! which makes the minimum over `2^m`-bit strings equal to `m`.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// An ordered, nonempty sequence of bits stored one per byte (`0` or `1`).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BitString(Vec<u8>);

impl BitString {
    /// Builds a bit string from raw `0`/`1` bytes.
    pub fn from_bits(bits: Vec<u8>) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::EmptyInput);
        }
        if let Some(&b) = bits.iter().find(|&&b| b > 1) {
            return Err(Error::InvalidSymbol(char::from(b'0'.wrapping_add(b))));
        }
        Ok(Self(bits))
    }

    /// Parses a string of `'0'`/`'1'` characters. Surrounding whitespace is ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let bits = text
            .trim()
            .chars()
            .map(|c| match c {
                '0' => Ok(0u8),
                '1' => Ok(1u8),
                other => Err(Error::InvalidSymbol(other)),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_bits(bits)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Always false; kept for API symmetry with slices.
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_bits(&self) -> &[u8] {
        &self.0
    }

    pub fn reversed(&self) -> Self {
        let mut bits = self.0.clone();
        bits.reverse();
        Self(bits)
    }

    pub fn is_constant(&self) -> bool {
        self.0.iter().all(|&b| b == self.0[0])
    }

    /// Hex encoding, four bits per digit, most significant bit first.
    /// A trailing partial nibble is padded with zeros.
    pub fn to_hex(&self) -> String {
        const DIGITS: &[u8; 16] = b"0123456789abcdef";
        self.0
            .chunks(4)
            .map(|chunk| {
                let nibble = chunk
                    .iter()
                    .chain(core::iter::repeat(&0))
                    .take(4)
                    .fold(0usize, |acc, &b| (acc << 1) | b as usize);
                DIGITS[nibble] as char
            })
            .collect()
    }

    /// Inverse of [`BitString::to_hex`] for a known bit length.
    pub fn from_hex(hex: &str, len: usize) -> Result<Self> {
        let expected = len.div_ceil(4);
        if hex.len() != expected {
            return Err(Error::LengthMismatch { expected, got: hex.len() });
        }
        let mut bits = Vec::with_capacity(expected * 4);
        for c in hex.chars() {
            let nibble = c.to_digit(16).ok_or(Error::InvalidSymbol(c))?;
            bits.extend((0..4).rev().map(|s| ((nibble >> s) & 1) as u8));
        }
        bits.truncate(len);
        Self::from_bits(bits)
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString({self})")
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b == 0 { "0" } else { "1" })?;
        }
        Ok(())
    }
}

/// A scaled LZ complexity value.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct LzScore(pub f64);

impl LzScore {
    pub fn value(self) -> f64 {
        self.0
    }
}

/// Exhaustive-history LZ76 phrase count of a left-to-right scan.
///
/// Kaspar–Schuster single-pass formulation; `O(n^2)` worst case.
pub fn phrase_count(bits: &[u8]) -> Result<usize> {
    let n = bits.len();
    match n {
        0 => return Err(Error::EmptyInput),
        1 => return Ok(1),
        _ => {}
    }
    let mut count = 1;
    // `prefix_len` is the length of the already-parsed history, `start` the
    // candidate copy source, `k` the current match length.
    let mut prefix_len = 1;
    let mut start = 0;
    let mut k = 1;
    let mut k_max = 1;
    loop {
        if bits[start + k - 1] == bits[prefix_len + k - 1] {
            k += 1;
            if prefix_len + k > n {
                count += 1;
                break;
            }
        } else {
            k_max = k_max.max(k);
            start += 1;
            if start == prefix_len {
                count += 1;
                prefix_len += k_max;
                if prefix_len + 1 > n {
                    break;
                }
                start = 0;
                k = 1;
                k_max = 1;
            } else {
                k = 1;
            }
        }
    }
    Ok(count)
}

/// Phrase count of a [`BitString`].
pub fn lz76_phrase_count(s: &BitString) -> usize {
    // BitString is nonempty by construction.
    phrase_count(s.as_bits()).unwrap_or(1)
}

/// `log2(n) * (N(s) + N(reverse s)) / 2`, or exactly `log2(n)` for a constant string.
pub fn lz_complexity(s: &BitString) -> Result<LzScore> {
    lz_complexity_bits(s.as_bits())
}

/// Same as [`lz_complexity`] over a raw bit slice.
pub fn lz_complexity_bits(bits: &[u8]) -> Result<LzScore> {
    let n = bits.len();
    if n == 0 {
        return Err(Error::EmptyInput);
    }
    if n < 2 {
        return Err(Error::TooShort(n));
    }
    let scale = libm::log2(n as f64);
    if bits.iter().all(|&b| b == bits[0]) {
        return Ok(LzScore(scale));
    }
    let forward = phrase_count(bits)?;
    let mut rev = bits.to_vec();
    rev.reverse();
    let backward = phrase_count(&rev)?;
    Ok(LzScore(scale * (forward + backward) as f64 / 2.0))
}
