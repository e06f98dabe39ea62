//! Authenticated transmission with a pre-shared key, clean and under a
//! single bit flip.

use qotp::pauli::{KeyString, PauliString};
use qotp::protocols::{input_rng, key_rng, run_sqas, AttackModel, InputState, SimulationParams};
use qotp::qcore::random::random_state;
use qotp::qcore::SubsystemLayout;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (m, s) = (2, 4);
    let input = InputState::Vector(random_state(SubsystemLayout::single("payload", m), &mut input_rng(3))?);
    let key = KeyString::random(m, s, &mut key_rng(3));
    println!("key {} ({} bits)", key.to_hex(), key.len());

    let attacks = [AttackModel::None, AttackModel::FixedPauli(PauliString::single(m + s, 0, 'X')?)];
    for attack in &attacks {
        for seed in 0..4 {
            let rec = run_sqas(&SimulationParams::new(m, s, seed), &input, &key, attack)?;
            println!(
                "{:<22} seed {seed}: accepted={:<5} fidelity={:.4} recycled={} bits",
                attack.to_string(),
                rec.accepted, rec.fidelity_out, rec.key_recycled_bits
            );
        }
    }
    Ok(())
}
