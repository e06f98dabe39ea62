use rand::Rng;
use serde_json::json;

use crate::keyring::{recycle_on_accept, recycle_on_reject, ToeplitzHash};
use crate::pauli::{apply_pauli, pauli_from_key, KeyString};
use crate::purity::{CodeFamily, PurityTestingCode, Tableau};
use crate::qcore::{StateVector, SubsystemLayout, C64};

use super::{check_dense, key_rng, range, AttackModel, Backend, InputState, Protocol, ProtocolError, RunRecord, SimulationParams};

/// A finished authentication run and, when recycling was requested, the
/// recycled key.
#[derive(Clone, Debug)]
pub struct SqasOutcome {
    pub record: RunRecord,
    pub recycled: Option<KeyString>,
}

/// One authenticated transmission with pre-shared key `x|y|z`: encrypt with
/// `P_x`, encode with the code chosen by `z` and syndrome `y`, send through
/// the attack, verify, decrypt. The code family is drawn first from the run
/// RNG, then attack and measurement draws, then the public hash seed.
pub fn run_sqas(
    params: &SimulationParams,
    input: &InputState,
    key: &KeyString,
    attack: &AttackModel,
) -> Result<RunRecord, ProtocolError> {
    Ok(run_sqas_full(params, input, key, attack)?.record)
}

pub fn run_sqas_full(
    params: &SimulationParams,
    input: &InputState,
    key: &KeyString,
    attack: &AttackModel,
) -> Result<SqasOutcome, ProtocolError> {
    let (m, s) = (params.m, params.s);
    let mut rng = params.protocol_rng();
    let core = authenticate(params, input, key, attack, &mut rng)?;

    let mut record = RunRecord::new(Protocol::Sqas, params.seed);
    record.accepted = core.accepted;
    record.fidelity_out = core.fidelity;
    record.qubits_sent = params.n() as u64;
    record.message_units = m as u64;
    record.key_consumed_bits = (2 * m + 2 * s) as u64;
    record.key = Some(key.record());

    let mut recycled = None;
    if params.recycle {
        record.cbits_back = 1;
        let (out, hash) = recycle(key, m, s, core.accepted, &mut rng)?;
        record.key_recycled_bits = out.as_ref().map_or(0, |k| k.len() as u64);
        record.hash_seed = hash.map(|h| h.seed_hex());
        recycled = out;
    }
    record.analysis = Some(core.analysis(params.backend, attack));
    Ok(SqasOutcome { record, recycled })
}

/// Same transmission with `x`, `y`, `z` drawn fresh from the run's key stream
/// and announced publicly afterwards. No pre-shared key is consumed.
pub fn run_interactive(
    params: &SimulationParams,
    input: &InputState,
    attack: &AttackModel,
) -> Result<RunRecord, ProtocolError> {
    params.validate()?;
    let key = KeyString::random(params.m, params.s, &mut key_rng(params.seed));
    let mut rng = params.protocol_rng();
    let core = authenticate(params, input, &key, attack, &mut rng)?;

    let mut record = RunRecord::new(Protocol::Interactive, params.seed);
    record.accepted = core.accepted;
    record.fidelity_out = core.fidelity;
    record.qubits_sent = params.n() as u64;
    record.message_units = params.m as u64;
    record.cbits_forward = key.len() as u64;
    record.cbits_back = 1;
    record.key = Some(key.record());
    record.analysis = Some(core.analysis(params.backend, attack));
    Ok(record)
}

fn recycle(
    key: &KeyString,
    m: usize,
    s: usize,
    accepted: bool,
    rng: &mut impl Rng,
) -> Result<(Option<KeyString>, Option<ToeplitzHash>), ProtocolError> {
    if accepted {
        if s >= 3 {
            let h = ToeplitzHash::random(2 * s, s - 2, rng)?;
            Ok((Some(recycle_on_accept(key, m, s, &h)?), Some(h)))
        } else {
            // Too few syndrome bits to hash; only x survives.
            Ok((Some(KeyString::new(key.x().to_vec(), 2 * m, 0, 0)?), None))
        }
    } else if m + s >= 3 {
        let h = ToeplitzHash::random(2 * m + 2 * s, m + s - 2, rng)?;
        Ok((Some(recycle_on_reject(key, m, s, &h)?), Some(h)))
    } else {
        Ok((None, None))
    }
}

pub(crate) struct CoreOutcome {
    pub accepted: bool,
    pub syndrome: Vec<bool>,
    pub fidelity: f64,
    pub family: CodeFamily,
}

impl CoreOutcome {
    fn analysis(&self, backend: Backend, attack: &AttackModel) -> serde_json::Value {
        json!({
            "backend": backend.name(),
            "attack": attack.to_string(),
            "code_family": self.family.seed,
            "syndrome": bit_string(&self.syndrome),
        })
    }
}

pub(crate) fn bit_string(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

fn authenticate(
    params: &SimulationParams,
    input: &InputState,
    key: &KeyString,
    attack: &AttackModel,
    rng: &mut impl Rng,
) -> Result<CoreOutcome, ProtocolError> {
    params.validate()?;
    let (m, s, n) = (params.m, params.s, params.n());
    key.check_full(m, s)?;
    if input.m() != m {
        return Err(ProtocolError::Config(format!("input has {} qubits, m = {m}", input.m())));
    }
    attack.validate(n)?;
    let family = CodeFamily::random(rng);
    let code = family.sample(m, s, key.z())?;
    let (accepted, syndrome, fidelity) = match params.backend {
        Backend::Dense => {
            let psi = input.to_vector()?;
            let mut ch = dense_channel(&psi, key.x(), key.y(), &code, attack, rng)?;
            apply_pauli(&mut ch.state, &range(0, m), &pauli_from_key(key.x())?.adjoint())?;
            let fidelity = leading_fidelity(&ch.state, &psi);
            (ch.accepted, ch.syndrome, fidelity)
        }
        Backend::Stabilizer => stabilizer_channel(input, key, &code, attack, rng)?,
    };
    Ok(CoreOutcome { accepted, syndrome, fidelity, family })
}

/// State after verification, payload still encrypted. Layout: `payload`
/// (m), `syndrome` (s), then `eve` when the attack uses ancillas.
pub(crate) struct DenseChannel {
    pub accepted: bool,
    pub syndrome: Vec<bool>,
    pub state: StateVector,
}

pub(crate) fn dense_channel(
    payload: &StateVector,
    x: &[bool],
    y: &[bool],
    code: &PurityTestingCode,
    attack: &AttackModel,
    rng: &mut impl Rng,
) -> Result<DenseChannel, ProtocolError> {
    let (m, s, n, e) = (code.m(), code.s(), code.n(), attack.eve_qubits());
    check_dense(n + e, "dense authentication")?;
    let mut parts = vec![("payload", m), ("syndrome", s)];
    if e > 0 {
        parts.push(("eve", e));
    }
    let mut bits = vec![false; n + e];
    bits[m..n].copy_from_slice(y);
    let anc = StateVector::from_bits(SubsystemLayout::qubits(s + e), &bits[m..])?;
    let mut psi = payload.tensor(&anc)?.with_layout(SubsystemLayout::new(&parts)?)?;

    apply_pauli(&mut psi, &range(0, m), &pauli_from_key(x)?)?;
    code.circuit().apply(&mut psi, 0);
    attack.apply_dense(&mut psi, &range(0, n), &range(n, e), rng)?;
    code.circuit().apply_inverse(&mut psi, 0);
    let syndrome: Vec<bool> = (0..s).map(|i| psi.measure(m + i, rng.gen::<f64>())).collect();
    Ok(DenseChannel { accepted: syndrome == y, syndrome, state: psi })
}

/// `⟨ψ|ρ|ψ⟩` where `ρ` is the reduced state of the leading
/// `ψ.num_qubits()` qubits of `full`.
pub(crate) fn leading_fidelity(full: &StateVector, target: &StateVector) -> f64 {
    let rest = full.num_qubits() - target.num_qubits();
    let stride = 1usize << rest;
    let amps = full.amplitudes();
    let t = target.amplitudes();
    (0..stride)
        .map(|r| t.iter().enumerate().map(|(i, ti)| ti.conj() * amps[i * stride + r]).sum::<C64>().norm_sqr())
        .sum::<f64>()
        .clamp(0.0, 1.0)
}

/// Stabilizer-backend transmission. Pauli attacks run in the Pauli frame;
/// other Clifford attacks run on a full tableau. Both consume the same draws
/// as the dense path.
fn stabilizer_channel(
    input: &InputState,
    key: &KeyString,
    code: &PurityTestingCode,
    attack: &AttackModel,
    rng: &mut impl Rng,
) -> Result<(bool, Vec<bool>, f64), ProtocolError> {
    let Some(prep) = input.prep() else {
        return Err(ProtocolError::Unsupported("the stabilizer backend needs a Clifford-prepared input".into()));
    };
    if !attack.is_clifford() {
        return Err(ProtocolError::Unsupported(format!("attack `{attack}` needs the dense backend")));
    }
    let (m, s, n, e) = (code.m(), code.s(), code.n(), attack.eve_qubits());

    if let Some(a) = attack.sample_pauli(n, rng) {
        let flips = code.syndrome_flips(&a)?;
        for _ in 0..s {
            rng.gen::<f64>();
        }
        let syndrome: Vec<bool> = key.y().iter().zip(&flips).map(|(y, f)| y ^ f).collect();
        let accepted = !flips.iter().any(|&f| f);
        // Decryption maps the payload error to ±itself; it either stabilizes
        // the input up to sign or is orthogonal to it.
        let payload_error = code.effective_error(&a)?.slice(0, m);
        let stab = input.stabilizer_tableau().expect("Clifford input");
        let fidelity = if stab.stabilizers().iter().all(|g| g.commutes_with(&payload_error).unwrap_or(false)) {
            1.0
        } else {
            0.0
        };
        return Ok((accepted, syndrome, fidelity));
    }

    let mut t = Tableau::new(n + e);
    prep.apply_tableau(&mut t, 0);
    let px = pauli_from_key(key.x())?;
    t.apply_pauli(&range(0, m), &px);
    for (i, &yi) in key.y().iter().enumerate() {
        if yi {
            t.apply_pauli(&[m + i], &crate::pauli::PauliString::single(1, 0, 'X')?);
        }
    }
    code.circuit().apply_tableau(&mut t, 0);
    attack.apply_tableau(&mut t, &range(0, n), &range(n, e), rng)?;
    code.circuit().apply_inverse_tableau(&mut t, 0);
    let syndrome: Vec<bool> = (0..s).map(|i| t.measure(m + i, None, rng.gen::<f64>()).0).collect();
    t.apply_pauli(&range(0, m), &px);
    prep.apply_inverse_tableau(&mut t, 0);
    let fidelity = (0..m).map(|q| t.measure(q, Some(false), 0.0).1).product();
    Ok((syndrome == key.y(), syndrome, fidelity))
}
