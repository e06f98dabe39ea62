use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use crate::pauli::{apply_pauli, bits_to_index, index_to_bits, pauli_from_key};
use crate::purity::{CodeFamily, PurityTestingCode};
use crate::qcore::{fidelity_pure, trace_distance, DensityMatrix, StateVector, SubsystemLayout};

use super::sqas::bit_string;
use super::{range, AttackModel, Basis, Backend, InputState, Protocol, ProtocolError, RunRecord, SimulationParams, EVE_QUBIT_BUDGET};

const MAX_M: usize = 2;
const MAX_S: usize = 2;

/// Registers: `key` (2m, in uniform superposition), `payload` (m),
/// `syndrome` (s), `eve` (when the attack needs ancillas).
struct Layout {
    m: usize,
    s: usize,
    e: usize,
}

impl Layout {
    fn payload(&self) -> usize {
        2 * self.m
    }

    fn syndrome(&self) -> usize {
        3 * self.m
    }

    fn eve(&self) -> usize {
        3 * self.m + self.s
    }

    fn channel(&self) -> Vec<usize> {
        range(self.payload(), self.m + self.s)
    }
}

fn check(params_m: usize, params_s: usize, attack: &AttackModel) -> Result<(), ProtocolError> {
    if params_m == 0 || params_s == 0 || params_m > MAX_M || params_s > MAX_S {
        return Err(ProtocolError::Config(format!(
            "modified QAS runs on the dense backend with 1 <= m <= {MAX_M}, 1 <= s <= {MAX_S}"
        )));
    }
    if attack.eve_qubits() > EVE_QUBIT_BUDGET {
        return Err(ProtocolError::Config(format!("Eve budget is {EVE_QUBIT_BUDGET} qubits")));
    }
    if matches!(attack, AttackModel::MeasureResend { .. }) && params_m + params_s > EVE_QUBIT_BUDGET {
        return Err(ProtocolError::Config(format!(
            "measure-resend records outcomes coherently and needs n <= {EVE_QUBIT_BUDGET}"
        )));
    }
    attack.validate(params_m + params_s)
}

/// Applies `P_x` to the payload controlled on the key register: for each
/// payload qubit `i`, `Z` controlled by key bit `2i`, then `X` by `2i + 1`.
fn controlled_encrypt(psi: &mut StateVector, m: usize, payload: usize) {
    for i in 0..m {
        psi.cz(2 * i, payload + i);
        psi.cnot(2 * i + 1, payload + i);
    }
}

fn controlled_decrypt(psi: &mut StateVector, m: usize, payload: usize) {
    for i in 0..m {
        psi.cnot(2 * i + 1, payload + i);
        psi.cz(2 * i, payload + i);
    }
}

/// `2^{-m} Σ_x |x⟩ P_x|ψ⟩` on `key ⊗ payload`.
fn keyed_superposition(input: &StateVector, m: usize) -> Result<StateVector, ProtocolError> {
    let key = StateVector::basis(SubsystemLayout::single("key", 2 * m), 0)?;
    let payload = input.clone().with_layout(SubsystemLayout::single("payload", m))?;
    let mut psi = key.tensor(&payload)?;
    for q in 0..2 * m {
        psi.h(q);
    }
    controlled_encrypt(&mut psi, m, 2 * m);
    Ok(psi)
}

/// State after encoding, the attack and Bob's `C†`, before any measurement.
fn channel_state(
    input: &StateVector,
    y: &[bool],
    code: &PurityTestingCode,
    attack: &AttackModel,
    rng: &mut impl Rng,
) -> Result<(StateVector, Layout), ProtocolError> {
    let l = Layout { m: code.m(), s: code.s(), e: attack.eve_qubits() };
    let mut parts = vec![("syndrome", l.s)];
    if l.e > 0 {
        parts.push(("eve", l.e));
    }
    let mut bits = y.to_vec();
    bits.extend(vec![false; l.e]);
    let rest = StateVector::from_bits(SubsystemLayout::new(&parts)?, &bits)?;
    let mut psi = keyed_superposition(input, l.m)?.tensor(&rest)?;
    code.circuit().apply(&mut psi, l.payload());
    attack.apply_dense(&mut psi, &l.channel(), &range(l.eve(), l.e), rng)?;
    code.circuit().apply_inverse(&mut psi, l.payload());
    Ok((psi, l))
}

/// Trace distance between `ρ_{key,eve}` and `ρ_key ⊗ ρ_eve`; zero when Eve
/// holds nothing.
fn eve_key_distance(rho_ke: &DensityMatrix, has_eve: bool) -> Result<f64, ProtocolError> {
    if !has_eve {
        return Ok(0.0);
    }
    let rk = rho_ke.partial_trace(&["key"])?;
    let re = rho_ke.partial_trace(&["eve"])?;
    Ok(trace_distance(rho_ke, &rk.tensor(&re)?)?)
}

/// Coherent-key authentication: the pad index lives in a `2m`-qubit key
/// register in uniform superposition, the payload is encrypted controlled on
/// it, and the register is measured only after Bob accepts. `authkey_yz` is
/// the pre-shared `y|z` (2s bits). The Eve-key product distance is taken
/// after verification and before the key register is measured, on either
/// branch. A rejected run discards the key register unmeasured.
pub fn run_modified_qas(
    params: &SimulationParams,
    input: &InputState,
    authkey_yz: &[bool],
    attack: &AttackModel,
) -> Result<RunRecord, ProtocolError> {
    let (m, s) = (params.m, params.s);
    if params.backend != Backend::Dense {
        return Err(ProtocolError::Unsupported("modified QAS needs the dense backend".into()));
    }
    check(m, s, attack)?;
    if authkey_yz.len() != 2 * s {
        return Err(ProtocolError::Config(format!("authentication key needs {} bits", 2 * s)));
    }
    if input.m() != m {
        return Err(ProtocolError::Config(format!("input has {} qubits, m = {m}", input.m())));
    }
    let (y, z) = authkey_yz.split_at(s);
    let input = input.to_vector()?;
    let mut rng = params.protocol_rng();
    let family = CodeFamily::random(&mut rng);
    let code = family.sample(m, s, z)?;

    let (mut psi, l) = match attack {
        AttackModel::MeasureResend { basis } => measure_resend_state(&input, y, &code, *basis)?,
        _ => channel_state(&input, y, &code, attack, &mut rng)?,
    };
    let syndrome: Vec<bool> = (0..s).map(|i| psi.measure(l.syndrome() + i, rng.gen::<f64>())).collect();
    let accepted = syndrome == y;
    let has_eve = l.e > 0;
    let mut keep = vec!["key"];
    if has_eve {
        keep.push("eve");
    }
    let distance = eve_key_distance(&psi.reduced(&keep)?, has_eve)?;
    let mut analysis = json!({
        "backend": "dense",
        "attack": attack.to_string(),
        "code_family": family.seed,
        "syndrome": bit_string(&syndrome),
    });

    let fidelity = if accepted {
        let phi = keyed_superposition(&input, m)?;
        let overlap = fidelity_pure(&phi, &psi.reduced(&["key", "payload"])?)?;
        let x: Vec<bool> = (0..2 * m).map(|q| psi.measure(q, rng.gen::<f64>())).collect();
        apply_pauli(&mut psi, &range(l.payload(), m), &pauli_from_key(&x)?.adjoint())?;
        analysis["ab_overlap"] = json!(overlap);
        analysis["measured_x"] = json!(bit_string(&x));
        fidelity_pure(&input, &psi.reduced(&["payload"])?)?
    } else {
        fidelity_pure(&input, &psi.reduced(&["payload"])?)?
    };

    let mut record = RunRecord::new(Protocol::ModifiedQas, params.seed);
    record.accepted = accepted;
    record.fidelity_out = fidelity;
    record.qubits_sent = (m + s) as u64;
    record.message_units = m as u64;
    record.key_consumed_bits = (2 * s) as u64;
    record.eve_key_product_distance = Some(distance);
    record.analysis = Some(analysis);
    Ok(record)
}

/// Measure-resend with Eve's outcomes recorded coherently: each channel
/// qubit is copied (in the chosen basis) onto an Eve qubit.
fn measure_resend_state(
    input: &StateVector,
    y: &[bool],
    code: &PurityTestingCode,
    basis: Basis,
) -> Result<(StateVector, Layout), ProtocolError> {
    let n = code.n();
    let l = Layout { m: code.m(), s: code.s(), e: n };
    let mut bits = y.to_vec();
    bits.extend(vec![false; n]);
    let rest = StateVector::from_bits(SubsystemLayout::new(&[("syndrome", l.s), ("eve", n)])?, &bits)?;
    let mut psi = keyed_superposition(input, l.m)?.tensor(&rest)?;
    code.circuit().apply(&mut psi, l.payload());
    for (i, q) in l.channel().into_iter().enumerate() {
        if basis == Basis::X {
            psi.h(q);
        }
        psi.cnot(q, l.eve() + i);
        if basis == Basis::X {
            psi.h(q);
        }
    }
    code.circuit().apply_inverse(&mut psi, l.payload());
    Ok((psi, l))
}

/// Exact statistics of one branch of a modified-QAS run.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BranchStats {
    pub probability: f64,
    /// Distance of `ρ_{key,eve}` from the product of its marginals, before
    /// the key register is measured.
    pub eve_key_product_distance: f64,
    /// Fidelity of `ρ_{key,payload}` with the ideal keyed superposition.
    pub ab_overlap: f64,
    /// Payload fidelity after decrypting with the measured key, averaged
    /// over key outcomes.
    pub fidelity: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ModifiedQasAnalysis {
    pub p_accept: f64,
    pub accept: Option<BranchStats>,
    pub reject: Option<BranchStats>,
}

/// Exact branch enumeration of a modified-QAS run for a fixed code family
/// and deterministic attack (no random Pauli draws or measurements by Eve;
/// measure-resend is handled through its coherent record).
pub fn analyze_modified_qas(
    m: usize,
    s: usize,
    input: &StateVector,
    authkey_yz: &[bool],
    attack: &AttackModel,
    family: CodeFamily,
) -> Result<ModifiedQasAnalysis, ProtocolError> {
    check(m, s, attack)?;
    if matches!(attack, AttackModel::RandomPauli { p } if *p > 0.0) {
        return Err(ProtocolError::Unsupported("exact analysis needs a deterministic attack".into()));
    }
    if authkey_yz.len() != 2 * s || input.num_qubits() != m {
        return Err(ProtocolError::Config("input or authentication key has the wrong size".into()));
    }
    let (y, z) = authkey_yz.split_at(s);
    let code = family.sample(m, s, z)?;
    // No draws are consumed on this path; the RNG only satisfies the API.
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let (psi, l) = match attack {
        AttackModel::MeasureResend { basis } => measure_resend_state(input, y, &code, *basis)?,
        _ => channel_state(input, y, &code, attack, &mut rng)?,
    };
    let phi = keyed_superposition(input, m)?;
    let has_eve = l.e > 0;
    let mut keep_ke = vec!["key"];
    if has_eve {
        keep_ke.push("eve");
    }

    let y_index = bits_to_index(y);
    let mut accept = None;
    let mut reject: Vec<(f64, StateVector)> = Vec::new();
    for syn in 0..1usize << s {
        let fixes: Vec<(usize, bool)> =
            index_to_bits(syn, s).into_iter().enumerate().map(|(i, b)| (l.syndrome() + i, b)).collect();
        let (p, branch) = psi.post_select(&fixes);
        let Some(branch) = branch else { continue };
        if syn == y_index {
            accept = Some((p, branch));
        } else {
            reject.push((p, branch));
        }
    }

    let stats = |branches: &[(f64, StateVector)]| -> Result<Option<BranchStats>, ProtocolError> {
        let total: f64 = branches.iter().map(|(p, _)| p).sum();
        if total <= 1e-15 {
            return Ok(None);
        }
        let weights: Vec<f64> = branches.iter().map(|(p, _)| p / total).collect();
        let mix = |labels: &[&str], decrypt: bool| -> Result<DensityMatrix, ProtocolError> {
            let parts = branches
                .iter()
                .map(|(_, b)| {
                    let mut b = b.clone();
                    if decrypt {
                        controlled_decrypt(&mut b, m, l.payload());
                    }
                    Ok(b.reduced(labels)?)
                })
                .collect::<Result<Vec<_>, ProtocolError>>()?;
            Ok(DensityMatrix::mixture(&weights, &parts)?)
        };
        Ok(Some(BranchStats {
            probability: total,
            eve_key_product_distance: eve_key_distance(&mix(&keep_ke, false)?, has_eve)?,
            ab_overlap: fidelity_pure(&phi, &mix(&["key", "payload"], false)?)?,
            fidelity: fidelity_pure(input, &mix(&["payload"], true)?)?,
        }))
    };
    let accept_stats = match &accept {
        Some(a) => stats(std::slice::from_ref(a))?,
        None => None,
    };
    Ok(ModifiedQasAnalysis {
        p_accept: accept.as_ref().map_or(0.0, |(p, _)| *p),
        accept: accept_stats,
        reject: stats(&reject)?,
    })
}
