//! Pauli strings, the quantum one-time pad, and the single-bit flip pad used
//! to protect shared singlets.

mod key;
mod otp;
mod string;

use thiserror::Error;

use crate::qcore::QcoreError;

pub use key::{
    bits_to_index, index_to_bits, pack_bits, random_bits, unpack_bits, xor_bits, KeyRecord, KeyString,
};
pub use otp::{
    apply_pauli, bitflip_average, bitflip_protect, max_entangled, pauli_from_key, qotp_decrypt,
    qotp_encrypt, qotp_key_average, singlets, Bell, PauliTarget,
};
pub use string::{PauliString, Phase};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PauliError {
    #[error("key segment has odd length {0}")]
    OddKeyLength(usize),
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("qubit {qubit} out of range for {n} qubits")]
    QubitOutOfRange { qubit: usize, n: usize },
    #[error("key segments {found:?} do not match the required {expected:?}")]
    KeyShape { expected: (usize, usize, usize), found: (usize, usize, usize) },
    #[error("cannot parse `{0}`")]
    Parse(String),
    #[error(transparent)]
    Qcore(#[from] QcoreError),
}
