use serde::{Deserialize, Serialize};

use crate::pauli::KeyRecord;

/// Protocol that produced a run record.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum Protocol {
    Sqas,
    ModifiedQas,
    Interactive,
    Teleport,
    SecretSharing,
    ProtectEntanglement,
}

impl Protocol {
    pub const ALL: [Protocol; 6] = [
        Protocol::Sqas,
        Protocol::ModifiedQas,
        Protocol::Interactive,
        Protocol::Teleport,
        Protocol::SecretSharing,
        Protocol::ProtectEntanglement,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Protocol::Sqas => "sqas",
            Protocol::ModifiedQas => "modified_qas",
            Protocol::Interactive => "interactive",
            Protocol::Teleport => "teleport",
            Protocol::SecretSharing => "secret_sharing",
            Protocol::ProtectEntanglement => "protect_entanglement",
        }
    }
}

impl std::fmt::Display for Protocol {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Protocol {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Protocol::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| format!("unknown protocol `{s}`"))
    }
}

/// Outcome and resource counts of one protocol run. Serialized as one JSON
/// object per line.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub accepted: bool,
    pub fidelity_out: f64,
    pub qubits_sent: u64,
    pub cbits_forward: u64,
    pub cbits_back: u64,
    pub key_consumed_bits: u64,
    pub key_recycled_bits: u64,
    /// Present only when the run tracked the adversary coherently.
    pub eve_key_product_distance: Option<f64>,
    pub seed: u64,
    pub protocol: Protocol,
    /// Private message size counted as delivered when the run accepts:
    /// qubits plus the plaintext length of any encrypted classical message.
    pub message_units: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub key: Option<KeyRecord>,
    /// Public Toeplitz seed of the recycling step, as hex.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hash_seed: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub analysis: Option<serde_json::Value>,
}

impl RunRecord {
    /// Names of the fields every serialized record carries.
    pub const REQUIRED_FIELDS: [&'static str; 11] = [
        "accepted",
        "fidelity_out",
        "qubits_sent",
        "cbits_forward",
        "cbits_back",
        "key_consumed_bits",
        "key_recycled_bits",
        "eve_key_product_distance",
        "seed",
        "protocol",
        "message_units",
    ];

    pub(crate) fn new(protocol: Protocol, seed: u64) -> Self {
        Self {
            accepted: false,
            fidelity_out: 0.0,
            qubits_sent: 0,
            cbits_forward: 0,
            cbits_back: 0,
            key_consumed_bits: 0,
            key_recycled_bits: 0,
            eve_key_product_distance: None,
            seed,
            protocol,
            message_units: 0,
            key: None,
            hash_seed: None,
            analysis: None,
        }
    }

    /// Ledger deltas `(δQ, δM, δK)`.
    pub fn deltas(&self) -> (i64, i64, i64) {
        let dm = if self.accepted { self.message_units as i64 } else { 0 };
        (
            self.qubits_sent as i64,
            dm,
            self.key_recycled_bits as i64 - self.key_consumed_bits as i64,
        )
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("run records always serialize")
    }
}
