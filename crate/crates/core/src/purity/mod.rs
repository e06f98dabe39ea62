//! Keyed stabilizer purity-testing codes.
//!
//! A code on `n = m + s` qubits is a Clifford circuit `C` chosen by the key
//! bits `z`. The payload occupies the first `m` qubits, the syndrome
//! ancillas the trailing `s`. The stabilizers are `C Z_{m+i} C†`, and a Pauli
//! error `A` on the channel is caught exactly when `C† A C` carries an X
//! factor on some ancilla.

mod circuit;
mod tableau;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::pauli::{bits_to_index, PauliError, PauliString};
use crate::qcore::{QcoreError, StateVector, SubsystemLayout};
use crate::seeds::mix_words;
use crate::stats::{wilson, Interval, Z95};

pub use circuit::{CliffordCircuit, Gate};
pub use tableau::Tableau;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PurityError {
    #[error("invalid code size m={m}, s={s}")]
    BadSize { m: usize, s: usize },
    #[error("size mismatch: expected {expected}, found {found}")]
    SizeMismatch { expected: usize, found: usize },
    #[error("invalid gate {0}")]
    BadGate(String),
    #[error("cannot parse circuit: {0}")]
    Parse(String),
    #[error("the identity is not a meaningful attack")]
    IdentityAttack,
    #[error("trials must be at least 1")]
    NoTrials,
    #[error(transparent)]
    Pauli(#[from] PauliError),
    #[error(transparent)]
    Qcore(#[from] QcoreError),
}

/// Public choice of code family. Each family maps the `2^s` values of `z` to
/// circuits; drawing the family afresh per run keeps the effective code
/// ensemble large even when `s` is small.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CodeFamily {
    pub seed: u64,
}

impl CodeFamily {
    pub fn new(seed: u64) -> Self {
        Self { seed }
    }

    pub fn random(rng: &mut impl Rng) -> Self {
        Self { seed: rng.gen() }
    }

    pub fn sample(&self, m: usize, s: usize, z: &[bool]) -> Result<PurityTestingCode, PurityError> {
        if m == 0 || s == 0 || z.is_empty() {
            return Err(PurityError::BadSize { m, s });
        }
        let n = m + s;
        let mut words = vec![self.seed, m as u64, s as u64, z.len() as u64];
        words.extend(z.chunks(64).map(|c| bits_to_index(c) as u64));
        let mut rng = ChaCha8Rng::seed_from_u64(mix_words(words));
        let circuit = CliffordCircuit::random(n, 4 * n * n, &mut rng);
        Ok(PurityTestingCode { m, s, z: z.to_vec(), family: *self, circuit })
    }
}

/// A sampled member of the code family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PurityTestingCode {
    m: usize,
    s: usize,
    z: Vec<bool>,
    family: CodeFamily,
    circuit: CliffordCircuit,
}

/// Code from the default family for `(m, s, z)`.
pub fn sample_code(m: usize, s: usize, z: &[bool]) -> Result<PurityTestingCode, PurityError> {
    CodeFamily::default().sample(m, s, z)
}

impl PurityTestingCode {
    /// Code with a caller-supplied circuit (tests and degenerate cases).
    pub fn with_circuit(m: usize, s: usize, z: &[bool], circuit: CliffordCircuit) -> Result<Self, PurityError> {
        if circuit.num_qubits() != m + s {
            return Err(PurityError::SizeMismatch { expected: m + s, found: circuit.num_qubits() });
        }
        Ok(Self { m, s, z: z.to_vec(), family: CodeFamily::default(), circuit })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn n(&self) -> usize {
        self.m + self.s
    }

    pub fn z(&self) -> &[bool] {
        &self.z
    }

    pub fn family(&self) -> CodeFamily {
        self.family
    }

    pub fn circuit(&self) -> &CliffordCircuit {
        &self.circuit
    }

    /// `S_i = C Z_{m+i} C†`, `i = 0..s`.
    pub fn stabilizers(&self) -> Vec<PauliString> {
        (0..self.s)
            .map(|i| {
                let z = PauliString::single(self.n(), self.m + i, 'Z').expect("ancilla index in range");
                self.circuit.conjugate(&z).expect("widths agree")
            })
            .collect()
    }

    /// `C† A C` for a channel Pauli `A`.
    pub fn effective_error(&self, attack: &PauliString) -> Result<PauliString, PurityError> {
        self.circuit.heisenberg(attack)
    }

    /// Syndrome flips caused by a channel Pauli: bit `i` is set iff the
    /// attack anticommutes with stabilizer `i`.
    pub fn syndrome_flips(&self, attack: &PauliString) -> Result<Vec<bool>, PurityError> {
        let e = self.effective_error(attack)?;
        Ok((0..self.s).map(|i| e.x(self.m + i)).collect())
    }

    pub fn detects(&self, attack: &PauliString) -> Result<bool, PurityError> {
        Ok(self.syndrome_flips(attack)?.into_iter().any(|b| b))
    }

    fn check_y(&self, y: &[bool]) -> Result<(), PurityError> {
        if y.len() != self.s {
            return Err(PurityError::SizeMismatch { expected: self.s, found: y.len() });
        }
        Ok(())
    }
}

/// `C (payload ⊗ |y⟩)`; the ancilla register is labelled `syndrome`.
pub fn encode(payload: &StateVector, code: &PurityTestingCode, y: &[bool]) -> Result<StateVector, PurityError> {
    if payload.num_qubits() != code.m {
        return Err(PurityError::SizeMismatch { expected: code.m, found: payload.num_qubits() });
    }
    code.check_y(y)?;
    let anc = StateVector::from_bits(SubsystemLayout::single("syndrome", code.s), y)?;
    let mut out = payload.tensor(&anc)?;
    code.circuit.apply(&mut out, 0);
    Ok(out)
}

/// Result of syndrome verification.
#[derive(Clone, Debug, PartialEq)]
pub struct Verified {
    pub accepted: bool,
    pub syndrome: Vec<bool>,
    /// Post-measurement payload, returned on both branches.
    pub payload: StateVector,
}

/// Applies `C†`, measures the ancillas (one uniform draw each, outcome
/// `u ≥ P(0)`), and accepts iff the outcome equals `y`.
pub fn decode_and_verify(
    received: &StateVector,
    code: &PurityTestingCode,
    y: &[bool],
    rng: &mut impl Rng,
) -> Result<Verified, PurityError> {
    if received.num_qubits() != code.n() {
        return Err(PurityError::SizeMismatch { expected: code.n(), found: received.num_qubits() });
    }
    code.check_y(y)?;
    let mut psi = received.clone();
    code.circuit.apply_inverse(&mut psi, 0);
    let syndrome: Vec<bool> = (0..code.s).map(|i| psi.measure(code.m + i, rng.gen::<f64>())).collect();
    let accepted = syndrome == y;
    // Ancillas are now in a basis state; read the payload amplitudes off it.
    let offset = bits_to_index(&syndrome);
    let step = 1usize << code.s;
    let amps = (0..1usize << code.m).map(|i| psi.amplitudes()[i * step + offset]).collect();
    let layout = SubsystemLayout::single("payload", code.m);
    let payload = StateVector::normalized(amps, layout)?;
    Ok(Verified { accepted, syndrome, payload })
}

/// Miss/detect statistics for a fixed channel Pauli.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Detection {
    pub trials: u64,
    pub detected: u64,
    pub estimate: f64,
    /// Half-width of the 95% Wilson interval.
    pub ci95: f64,
    pub interval: Interval,
}

/// Fraction of uniformly drawn codes (fresh family and fresh `z` per trial)
/// that detect `attack`, from an exact symplectic check per code.
pub fn detection_probability(
    m: usize,
    s: usize,
    attack: &PauliString,
    trials: u64,
    seed: u64,
) -> Result<Detection, PurityError> {
    if trials == 0 {
        return Err(PurityError::NoTrials);
    }
    if attack.num_qubits() != m + s {
        return Err(PurityError::SizeMismatch { expected: m + s, found: attack.num_qubits() });
    }
    if attack.is_scalar() {
        if attack.phase_exponent() == 0 {
            return Err(PurityError::IdentityAttack);
        }
        let interval = wilson(0, trials, Z95);
        return Ok(Detection { trials, detected: 0, estimate: 0.0, ci95: interval.half_width(), interval });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut detected = 0u64;
    for _ in 0..trials {
        let family = CodeFamily::random(&mut rng);
        let z: Vec<bool> = (0..s).map(|_| rng.gen()).collect();
        if family.sample(m, s, &z)?.detects(attack)? {
            detected += 1;
        }
    }
    let interval = wilson(detected, trials, Z95);
    Ok(Detection {
        trials,
        detected,
        estimate: interval.estimate,
        ci95: interval.half_width(),
        interval,
    })
}
