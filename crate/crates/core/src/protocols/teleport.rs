use rand::Rng;
use serde_json::json;

use crate::pauli::{bits_to_index, random_bits};
use crate::purity::CodeFamily;
use crate::qcore::{StateVector, SubsystemLayout};

use super::sqas::bit_string;
use super::{check_dense, range, AttackModel, Backend, InputState, Protocol, ProtocolError, RunRecord, SimulationParams};

const MAX_M: usize = 2;

/// Teleportation over purity-tested EPR pairs. Alice prepares `n = m + s`
/// pairs `Φ+` on `(A_i, B_i)` and sends the B halves through the attack.
/// Bob announces a fresh `z`; Bob applies `C†` to B and Alice `C^T` to A,
/// both measure the last `s` qubits, and the run accepts iff all outcomes
/// agree. On accept Alice Bell-measures each payload qubit with `A_i` and
/// Bob corrects with `X^b` then `Z^a`.
///
/// Accounting: `m` qubits sent (the `s` check halves are listed in the
/// analysis), `2m` forward bits on accept, `|z| + s` back bits, no key.
pub fn run_teleport_baseline(
    params: &SimulationParams,
    input: &InputState,
    attack_on_epr: &AttackModel,
) -> Result<RunRecord, ProtocolError> {
    params.validate()?;
    let (m, s, n) = (params.m, params.s, params.n());
    if params.backend != Backend::Dense {
        return Err(ProtocolError::Unsupported("teleportation runs on the dense backend".into()));
    }
    if m > MAX_M {
        return Err(ProtocolError::Config(format!("teleportation baseline supports m <= {MAX_M}")));
    }
    if input.m() != m {
        return Err(ProtocolError::Config(format!("input has {} qubits, m = {m}", input.m())));
    }
    attack_on_epr.validate(n)?;
    let e = attack_on_epr.eve_qubits();
    check_dense(m + 2 * n + e, "teleportation baseline")?;

    // Registers: M (payload), A = Am|As, B = Bm|Bs, eve.
    let (a0, b0, e0) = (m, m + n, m + 2 * n);
    let mut parts = vec![("msg", m), ("a_msg", m), ("a_chk", s), ("b_msg", m), ("b_chk", s)];
    if e > 0 {
        parts.push(("eve", e));
    }
    let payload = input.to_vector()?;
    let zeros = StateVector::basis(SubsystemLayout::qubits(2 * n + e), 0)?;
    let mut psi = payload.tensor(&zeros)?.with_layout(SubsystemLayout::new(&parts)?)?;
    for i in 0..n {
        psi.h(a0 + i);
        psi.cnot(a0 + i, b0 + i);
    }

    let mut rng = params.protocol_rng();
    attack_on_epr.apply_dense(&mut psi, &range(b0, n), &range(e0, e), &mut rng)?;
    let family = CodeFamily::random(&mut rng);
    let z = random_bits(s, &mut rng);
    let code = family.sample(m, s, &z)?;
    code.circuit().apply_inverse(&mut psi, b0);
    code.circuit().transpose().apply(&mut psi, a0);

    let alice: Vec<bool> = (0..s).map(|i| psi.measure(a0 + m + i, rng.gen::<f64>())).collect();
    let bob: Vec<bool> = (0..s).map(|i| psi.measure(b0 + m + i, rng.gen::<f64>())).collect();
    let accepted = alice == bob;

    let mut analysis = json!({
        "backend": "dense",
        "attack": attack_on_epr.to_string(),
        "code_family": family.seed,
        "z": bit_string(&z),
        "check_qubits_sent": s,
    });
    if accepted {
        let mut outcome = Vec::with_capacity(2 * m);
        for i in 0..m {
            psi.cnot(i, a0 + i);
            psi.h(i);
            let a = psi.measure(i, rng.gen::<f64>());
            let b = psi.measure(a0 + i, rng.gen::<f64>());
            if b {
                psi.x(b0 + i);
            }
            if a {
                psi.z(b0 + i);
            }
            outcome.extend([a, b]);
        }
        analysis["bell_outcome"] = json!(bits_to_index(&outcome));
    }
    let fidelity = crate::qcore::fidelity_pure(&payload, &psi.reduced(&["b_msg"])?.with_layout(SubsystemLayout::single("payload", m))?)?;

    let mut record = RunRecord::new(Protocol::Teleport, params.seed);
    record.accepted = accepted;
    record.fidelity_out = fidelity;
    record.qubits_sent = m as u64;
    record.message_units = m as u64;
    record.cbits_forward = if accepted { 2 * m as u64 } else { 0 };
    record.cbits_back = (2 * s) as u64;
    record.analysis = Some(analysis);
    Ok(record)
}
