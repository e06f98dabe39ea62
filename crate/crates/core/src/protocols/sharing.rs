use rand::Rng;
use serde_json::json;

use crate::pauli::{apply_pauli, pauli_from_key, random_bits, xor_bits};
use crate::purity::CodeFamily;
use crate::qcore::{DensityMatrix, DENSITY_QUBIT_CAP};

use super::sqas::{bit_string, dense_channel, leading_fidelity};
use super::{range, AttackModel, Backend, InputState, Protocol, ProtocolError, RunRecord, SimulationParams};

/// Result of a secret-sharing run. Shares are absent when Claire rejects and
/// the parties abort.
#[derive(Clone, Debug)]
pub struct SharingOutcome {
    pub record: RunRecord,
    /// `J ⊕ X`, sent to Bob under the classical one-time pad `X`.
    pub bob_holds: Option<Vec<bool>>,
    /// Claire's payload register, still encrypted with `J`.
    pub claire_holds: Option<DensityMatrix>,
}

/// Alice encrypts the payload with a fresh `2m`-bit pad `J`, authenticates
/// it to Claire with `key_ac = y|z`, and on Claire's accept sends `J ⊕ X`
/// to Bob, where `X` is the first `2m` bits of `key_ab`. Only Bob and Claire
/// together recover the payload. `J` is the first draw of the run RNG.
pub fn run_secret_sharing(
    params: &SimulationParams,
    input: &InputState,
    key_ab: &[bool],
    key_ac: &[bool],
    attack: &AttackModel,
) -> Result<SharingOutcome, ProtocolError> {
    let mut rng = params.protocol_rng();
    let j = random_bits(2 * params.m, &mut rng);
    share(params, input, &j, key_ab, key_ac, attack, &mut rng)
}

/// As [`run_secret_sharing`] with the pad `J` supplied by the caller.
pub fn run_secret_sharing_with_pad(
    params: &SimulationParams,
    input: &InputState,
    pad: &[bool],
    key_ab: &[bool],
    key_ac: &[bool],
    attack: &AttackModel,
) -> Result<SharingOutcome, ProtocolError> {
    let mut rng = params.protocol_rng();
    share(params, input, pad, key_ab, key_ac, attack, &mut rng)
}

fn share(
    params: &SimulationParams,
    input: &InputState,
    pad: &[bool],
    key_ab: &[bool],
    key_ac: &[bool],
    attack: &AttackModel,
    rng: &mut impl Rng,
) -> Result<SharingOutcome, ProtocolError> {
    params.validate()?;
    let (m, s) = (params.m, params.s);
    if params.backend != Backend::Dense {
        return Err(ProtocolError::Unsupported("secret sharing runs on the dense backend".into()));
    }
    if m > DENSITY_QUBIT_CAP {
        return Err(ProtocolError::SizeCap { what: "Claire's share", qubits: m, cap: DENSITY_QUBIT_CAP });
    }
    if input.m() != m {
        return Err(ProtocolError::Config(format!("input has {} qubits, m = {m}", input.m())));
    }
    if pad.len() != 2 * m {
        return Err(ProtocolError::Config(format!("pad J needs {} bits, got {}", 2 * m, pad.len())));
    }
    if key_ab.len() < 2 * m {
        return Err(ProtocolError::Config(format!("key X needs at least {} bits, got {}", 2 * m, key_ab.len())));
    }
    if key_ac.len() != 2 * s {
        return Err(ProtocolError::Config(format!("key S needs {} bits, got {}", 2 * s, key_ac.len())));
    }
    attack.validate(m + s)?;
    let (y, z) = key_ac.split_at(s);
    let family = CodeFamily::random(rng);
    let code = family.sample(m, s, z)?;
    let payload = input.to_vector()?;
    let ch = dense_channel(&payload, pad, y, &code, attack, rng)?;

    let (bob_holds, claire_holds) = if ch.accepted {
        (Some(xor_bits(pad, &key_ab[..2 * m])), Some(ch.state.reduced(&["payload"])?))
    } else {
        (None, None)
    };
    let mut joint = ch.state;
    apply_pauli(&mut joint, &range(0, m), &pauli_from_key(pad)?.adjoint())?;

    let mut record = RunRecord::new(Protocol::SecretSharing, params.seed);
    record.accepted = ch.accepted;
    record.fidelity_out = leading_fidelity(&joint, &payload);
    record.qubits_sent = (m + s) as u64;
    record.message_units = (3 * m) as u64;
    record.key_consumed_bits = (2 * m + 2 * s) as u64;
    record.cbits_forward = if ch.accepted { (2 * m) as u64 } else { 0 };
    record.cbits_back = 1;
    record.analysis = Some(json!({
        "backend": "dense",
        "attack": attack.to_string(),
        "code_family": family.seed,
        "syndrome": bit_string(&ch.syndrome),
    }));
    Ok(SharingOutcome { record, bob_holds, claire_holds })
}
