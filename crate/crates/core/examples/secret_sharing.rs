//! Splits a qubit between Bob (classical pad) and Claire (encrypted state).
//! Claire's share averaged over pads is maximally mixed.

use qotp::pauli::{index_to_bits, random_bits};
use qotp::protocols::{input_rng, key_rng, run_secret_sharing, run_secret_sharing_with_pad, AttackModel, InputState, SimulationParams};
use qotp::qcore::random::random_state;
use qotp::qcore::{trace_distance, DensityMatrix, SubsystemLayout};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (m, s) = (1, 2);
    let input = InputState::Vector(random_state(SubsystemLayout::single("payload", m), &mut input_rng(10))?);
    let mut keys = key_rng(10);
    let (key_ab, key_ac) = (random_bits(2 * m, &mut keys), random_bits(2 * s, &mut keys));
    let params = SimulationParams::new(m, s, 10);

    let out = run_secret_sharing(&params, &input, &key_ab, &key_ac, &AttackModel::None)?;
    println!("joint recovery fidelity {:.12}", out.record.fidelity_out);
    println!("Bob holds {:?}", out.bob_holds.unwrap_or_default());

    let shares = (0..4)
        .map(|j| run_secret_sharing_with_pad(&params, &input, &index_to_bits(j, 2), &key_ab, &key_ac, &AttackModel::None))
        .map(|o| o.map(|o| o.claire_holds.expect("accepted")))
        .collect::<Result<Vec<_>, _>>()?;
    let avg = DensityMatrix::mixture(&[0.25; 4], &shares)?;
    let mixed = DensityMatrix::maximally_mixed(avg.layout().clone())?;
    println!("Claire alone, distance to I/2: {:.1e}", trace_distance(&avg, &mixed)?);
    Ok(())
}
