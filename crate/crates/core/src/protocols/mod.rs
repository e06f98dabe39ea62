//! Protocol state machines: stabilizer authentication with a pre-shared key,
//! its coherent-key and interactive variants, a teleportation baseline,
//! encrypted secret sharing, and bit-flip protection of singlets.

mod attack;
mod modified;
mod protect;
mod record;
mod sharing;
mod sqas;
mod teleport;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::keyring::KeyringError;
use crate::pauli::PauliError;
use crate::purity::{CliffordCircuit, PurityError, Tableau};
use crate::qcore::{QcoreError, StateVector, SubsystemLayout, STATEVECTOR_QUBIT_CAP};
use crate::seeds::splitmix64;

pub use attack::{AttackModel, Basis, EVE_QUBIT_BUDGET};
pub use modified::{analyze_modified_qas, run_modified_qas, BranchStats, ModifiedQasAnalysis};
pub use protect::run_protect_entanglement;
pub use record::{Protocol, RunRecord};
pub use sharing::{run_secret_sharing, run_secret_sharing_with_pad, SharingOutcome};
pub use sqas::{run_interactive, run_sqas, run_sqas_full, SqasOutcome};
pub use teleport::run_teleport_baseline;

#[derive(Debug, Error)]
pub enum ProtocolError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("{what} needs {qubits} qubits, cap is {cap}")]
    SizeCap { what: &'static str, qubits: usize, cap: usize },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Pauli(#[from] PauliError),
    #[error(transparent)]
    Purity(#[from] PurityError),
    #[error(transparent)]
    Qcore(#[from] QcoreError),
    #[error(transparent)]
    Keyring(#[from] KeyringError),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Backend {
    #[default]
    Dense,
    Stabilizer,
}

impl Backend {
    pub fn name(self) -> &'static str {
        match self {
            Backend::Dense => "dense",
            Backend::Stabilizer => "stabilizer",
        }
    }
}

/// Sizes, backend and seed of one run. `trials` is read by batch drivers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimulationParams {
    pub m: usize,
    pub s: usize,
    pub backend: Backend,
    pub seed: u64,
    pub trials: u64,
    /// Feed the accept/reject outcome to the key recycler (costs one back bit).
    pub recycle: bool,
}

impl SimulationParams {
    pub fn new(m: usize, s: usize, seed: u64) -> Self {
        Self { m, s, backend: Backend::Dense, seed, trials: 1, recycle: true }
    }

    pub fn with_backend(mut self, backend: Backend) -> Self {
        self.backend = backend;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn n(&self) -> usize {
        self.m + self.s
    }

    pub fn validate(&self) -> Result<(), ProtocolError> {
        if self.m == 0 || self.s == 0 {
            return Err(ProtocolError::Config(format!("need m >= 1 and s >= 1, got m={} s={}", self.m, self.s)));
        }
        Ok(())
    }

    /// RNG driving code choice, attack and measurement draws of a run.
    pub fn protocol_rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }
}

const KEY_STREAM: u64 = 0x6b65_795f_7374_7265;
const INPUT_STREAM: u64 = 0x696e_7075_745f_7374;

/// Independent RNG for key material tied to a run seed. Interactive runs draw
/// their fresh keys from it, so batch drivers that pre-share keys drawn from
/// the same stream pair the two protocols run for run.
pub fn key_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(splitmix64(seed ^ KEY_STREAM))
}

/// Independent RNG for random input states tied to a run seed.
pub fn input_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(splitmix64(seed ^ INPUT_STREAM))
}

/// Payload handed to a protocol: an arbitrary pure state, or a stabilizer
/// state given by a Clifford preparation of `|0…0⟩`.
#[derive(Clone, Debug)]
pub enum InputState {
    Vector(StateVector),
    Clifford { m: usize, prep: CliffordCircuit },
}

impl InputState {
    pub fn random_clifford(m: usize, rng: &mut impl rand::Rng) -> Self {
        InputState::Clifford { m, prep: CliffordCircuit::random(m, 4 * m * m + 4, rng) }
    }

    pub fn m(&self) -> usize {
        match self {
            InputState::Vector(v) => v.num_qubits(),
            InputState::Clifford { m, .. } => *m,
        }
    }

    /// Dense amplitudes, labelled `"payload"`.
    pub fn to_vector(&self) -> Result<StateVector, ProtocolError> {
        let layout = SubsystemLayout::new(&[("payload", self.m())])?;
        match self {
            InputState::Vector(v) => Ok(v.clone().with_layout(layout)?),
            InputState::Clifford { m, prep } => {
                check_dense(*m, "payload")?;
                let mut psi = StateVector::basis(layout, 0)?;
                prep.apply(&mut psi, 0);
                Ok(psi)
            }
        }
    }

    pub fn prep(&self) -> Option<&CliffordCircuit> {
        match self {
            InputState::Clifford { prep, .. } => Some(prep),
            InputState::Vector(_) => None,
        }
    }

    /// Stabilizer generators of the payload, if it is a stabilizer state.
    pub fn stabilizer_tableau(&self) -> Option<Tableau> {
        self.prep().map(|prep| {
            let mut t = Tableau::new(prep.num_qubits());
            prep.apply_tableau(&mut t, 0);
            t
        })
    }
}

impl From<StateVector> for InputState {
    fn from(v: StateVector) -> Self {
        InputState::Vector(v)
    }
}

pub(crate) fn check_dense(qubits: usize, what: &'static str) -> Result<(), ProtocolError> {
    if qubits > STATEVECTOR_QUBIT_CAP {
        return Err(ProtocolError::SizeCap { what, qubits, cap: STATEVECTOR_QUBIT_CAP });
    }
    Ok(())
}

pub(crate) fn range(start: usize, len: usize) -> Vec<usize> {
    (start..start + len).collect()
}

#[cfg(test)]
mod tests;
