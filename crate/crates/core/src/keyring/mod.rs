//! Key lifecycle: Toeplitz hashing, recycling after accept or reject, and
//! the `δK ≤ δQ − δM` ledger.

mod ledger;

use rand::Rng;
use thiserror::Error;

use crate::pauli::{random_bits, KeyString, PauliError};

pub use ledger::{audit_law, ledger_record, AuditReport, Ledger, LedgerEntry, Violation, ViolationScope};

#[derive(Debug, Error)]
pub enum KeyringError {
    #[error("hash output length {t} must lie in 1..={j}")]
    BadHashShape { j: usize, t: usize },
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("recycling needs {need}, got {got}")]
    TooSmall { need: &'static str, got: usize },
    #[error(transparent)]
    Pauli(#[from] PauliError),
    #[error("ledger CSV: {0}")]
    Csv(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Toeplitz matrix over GF(2): output bit `i` is the parity of
/// `input AND seed[i..i+j]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ToeplitzHash {
    j: usize,
    t: usize,
    seed: Vec<bool>,
}

impl ToeplitzHash {
    pub fn new(j: usize, t: usize, seed: Vec<bool>) -> Result<Self, KeyringError> {
        if t == 0 || t > j {
            return Err(KeyringError::BadHashShape { j, t });
        }
        if seed.len() != j + t - 1 {
            return Err(KeyringError::LengthMismatch { expected: j + t - 1, found: seed.len() });
        }
        Ok(Self { j, t, seed })
    }

    pub fn random(j: usize, t: usize, rng: &mut impl Rng) -> Result<Self, KeyringError> {
        if t == 0 || t > j {
            return Err(KeyringError::BadHashShape { j, t });
        }
        Self::new(j, t, random_bits(j + t - 1, rng))
    }

    pub fn in_len(&self) -> usize {
        self.j
    }

    pub fn out_len(&self) -> usize {
        self.t
    }

    pub fn seed(&self) -> &[bool] {
        &self.seed
    }

    pub fn seed_hex(&self) -> String {
        hex::encode(crate::pauli::pack_bits(&self.seed))
    }
}

pub fn toeplitz_hash(input: &[bool], h: &ToeplitzHash) -> Result<Vec<bool>, KeyringError> {
    if input.len() != h.j {
        return Err(KeyringError::LengthMismatch { expected: h.j, found: input.len() });
    }
    Ok((0..h.t)
        .map(|i| {
            h.seed[i..i + h.j].iter().zip(input).fold(false, |acc, (&a, &b)| acc ^ (a & b))
        })
        .collect())
}

/// Length of the accept-branch recycled key.
pub fn accept_len(m: usize, s: usize) -> usize {
    2 * m + s - 2
}

/// Length of the reject-branch recycled key.
pub fn reject_len(m: usize, s: usize) -> usize {
    m + s - 2
}

/// After an accepted run: keep `x` and compress `y|z` (2s bits) to `s − 2`
/// bits. `hash` must map `2s` bits to `s − 2`.
pub fn recycle_on_accept(
    key: &KeyString,
    m: usize,
    s: usize,
    hash: &ToeplitzHash,
) -> Result<KeyString, KeyringError> {
    if s < 3 {
        return Err(KeyringError::TooSmall { need: "s >= 3", got: s });
    }
    key.check_full(m, s)?;
    check_hash(hash, 2 * s, s - 2)?;
    let tail = toeplitz_hash(key.yz(), hash)?;
    Ok(KeyString::new([key.x(), &tail].concat(), 2 * m, s - 2, 0)?)
}

/// After a rejected run: compress the whole key to `m + s − 2` bits.
pub fn recycle_on_reject(
    key: &KeyString,
    m: usize,
    s: usize,
    hash: &ToeplitzHash,
) -> Result<KeyString, KeyringError> {
    if m + s < 3 {
        return Err(KeyringError::TooSmall { need: "m + s >= 3", got: m + s });
    }
    key.check_full(m, s)?;
    check_hash(hash, 2 * m + 2 * s, m + s - 2)?;
    let out = toeplitz_hash(key.bits(), hash)?;
    Ok(KeyString::new(out, 0, m + s - 2, 0)?)
}

fn check_hash(h: &ToeplitzHash, j: usize, t: usize) -> Result<(), KeyringError> {
    if (h.j, h.t) != (j, t) {
        return Err(KeyringError::LengthMismatch { expected: j + t - 1, found: h.seed.len() });
    }
    Ok(())
}

#[cfg(test)]
mod tests;
