use rand::Rng;
use serde::{Deserialize, Serialize};

use super::PauliError;

/// Classical key split into consecutive segments `x | y | z`.
///
/// A full protocol key has `|x| = 2m` and `|y| = |z| = s`. Recycled keys are
/// shorter; [`KeyString::pad`] tops them up with fresh bits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KeyString {
    bits: Vec<bool>,
    x_len: usize,
    y_len: usize,
    z_len: usize,
}

/// Hex encoding of a key plus its segment offsets, as stored in run records.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KeyRecord {
    pub hex: String,
    pub bits: usize,
    pub x: [usize; 2],
    pub y: [usize; 2],
    pub z: [usize; 2],
}

impl KeyString {
    pub fn new(bits: Vec<bool>, x_len: usize, y_len: usize, z_len: usize) -> Result<Self, PauliError> {
        if !x_len.is_multiple_of(2) {
            return Err(PauliError::OddKeyLength(x_len));
        }
        let total = x_len + y_len + z_len;
        if bits.len() != total {
            return Err(PauliError::LengthMismatch { expected: total, found: bits.len() });
        }
        Ok(Self { bits, x_len, y_len, z_len })
    }

    /// Full key of length `2m + 2s` from its three segments.
    pub fn from_segments(x: &[bool], y: &[bool], z: &[bool]) -> Result<Self, PauliError> {
        let bits = [x, y, z].concat();
        Self::new(bits, x.len(), y.len(), z.len())
    }

    pub fn zeros(m: usize, s: usize) -> Self {
        Self { bits: vec![false; 2 * m + 2 * s], x_len: 2 * m, y_len: s, z_len: s }
    }

    pub fn random(m: usize, s: usize, rng: &mut impl Rng) -> Self {
        let bits = random_bits(2 * m + 2 * s, rng);
        Self { bits, x_len: 2 * m, y_len: s, z_len: s }
    }

    /// Rebuilds a full `(m, s)` key from `prefix` followed by fresh bits.
    pub fn pad(prefix: &[bool], m: usize, s: usize, rng: &mut impl Rng) -> Result<Self, PauliError> {
        let total = 2 * m + 2 * s;
        if prefix.len() > total {
            return Err(PauliError::LengthMismatch { expected: total, found: prefix.len() });
        }
        let mut bits = prefix.to_vec();
        bits.extend(random_bits(total - prefix.len(), rng));
        Self::new(bits, 2 * m, s, s)
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn x(&self) -> &[bool] {
        &self.bits[..self.x_len]
    }

    pub fn y(&self) -> &[bool] {
        &self.bits[self.x_len..self.x_len + self.y_len]
    }

    pub fn z(&self) -> &[bool] {
        &self.bits[self.x_len + self.y_len..]
    }

    /// The authentication part `y | z`.
    pub fn yz(&self) -> &[bool] {
        &self.bits[self.x_len..]
    }

    pub fn segment_lengths(&self) -> (usize, usize, usize) {
        (self.x_len, self.y_len, self.z_len)
    }

    /// Checks the `(2m, s, s)` shape a protocol run needs.
    pub fn check_full(&self, m: usize, s: usize) -> Result<(), PauliError> {
        if self.segment_lengths() != (2 * m, s, s) {
            return Err(PauliError::KeyShape {
                expected: (2 * m, s, s),
                found: self.segment_lengths(),
            });
        }
        Ok(())
    }

    pub fn to_hex(&self) -> String {
        hex::encode(pack_bits(&self.bits))
    }

    pub fn record(&self) -> KeyRecord {
        let (a, b) = (self.x_len, self.x_len + self.y_len);
        KeyRecord {
            hex: self.to_hex(),
            bits: self.bits.len(),
            x: [0, a],
            y: [a, b],
            z: [b, self.bits.len()],
        }
    }

    pub fn from_record(r: &KeyRecord) -> Result<Self, PauliError> {
        let bytes = hex::decode(&r.hex).map_err(|e| PauliError::Parse(e.to_string()))?;
        let bits = unpack_bits(&bytes, r.bits)?;
        Self::new(bits, r.x[1] - r.x[0], r.y[1] - r.y[0], r.z[1] - r.z[0])
    }
}

pub fn random_bits(n: usize, rng: &mut impl Rng) -> Vec<bool> {
    (0..n).map(|_| rng.gen::<bool>()).collect()
}

/// MSB-first byte packing; the final byte is zero-padded.
pub fn pack_bits(bits: &[bool]) -> Vec<u8> {
    bits.chunks(8)
        .map(|c| c.iter().enumerate().fold(0u8, |acc, (i, &b)| acc | ((b as u8) << (7 - i))))
        .collect()
}

pub fn unpack_bits(bytes: &[u8], n: usize) -> Result<Vec<bool>, PauliError> {
    if bytes.len() * 8 < n {
        return Err(PauliError::LengthMismatch { expected: n, found: bytes.len() * 8 });
    }
    Ok((0..n).map(|i| (bytes[i / 8] >> (7 - i % 8)) & 1 == 1).collect())
}

pub fn xor_bits(a: &[bool], b: &[bool]) -> Vec<bool> {
    a.iter().zip(b).map(|(x, y)| x ^ y).collect()
}

/// Integer value of a bit string, first bit most significant.
pub fn bits_to_index(bits: &[bool]) -> usize {
    bits.iter().fold(0usize, |acc, &b| (acc << 1) | b as usize)
}

pub fn index_to_bits(index: usize, n: usize) -> Vec<bool> {
    (0..n).map(|i| (index >> (n - 1 - i)) & 1 == 1).collect()
}
