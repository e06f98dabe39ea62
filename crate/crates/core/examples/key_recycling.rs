//! Recycled key lengths on both branches and a second round run on the key
//! kept after an accept.

use qotp::keyring::{accept_len, recycle_on_accept, recycle_on_reject, reject_len, ToeplitzHash};
use qotp::pauli::KeyString;
use qotp::protocols::{key_rng, run_sqas, run_sqas_full, AttackModel, InputState, SimulationParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("  m   s  total  accept  reject");
    for (m, s) in [(1, 3), (2, 4), (2, 16), (4, 64)] {
        println!("{m:>3} {s:>3} {:>6} {:>7} {:>7}", 2 * m + 2 * s, accept_len(m, s), reject_len(m, s));
    }

    let (m, s) = (2, 5);
    let mut rng = key_rng(5);
    let key = KeyString::random(m, s, &mut rng);
    let kept = recycle_on_accept(&key, m, s, &ToeplitzHash::random(2 * s, s - 2, &mut rng)?)?;
    let rej = recycle_on_reject(&key, m, s, &ToeplitzHash::random(2 * m + 2 * s, m + s - 2, &mut rng)?)?;
    println!("key {} -> accept {} / reject {}", key.to_hex(), kept.to_hex(), rej.to_hex());

    let input = InputState::random_clifford(m, &mut rng);
    let first = run_sqas_full(&SimulationParams::new(m, s, 1), &input, &key, &AttackModel::None)?;
    let recycled = first.recycled.expect("clean runs accept");
    let next = KeyString::pad(recycled.bits(), m, s, &mut rng)?;
    let second = run_sqas(&SimulationParams::new(m, s, 2), &input, &next, &AttackModel::None)?;
    println!(
        "round 1 recycled {} of {} bits; round 2 accepted={} fidelity={:.6}",
        recycled.len(),
        key.len(),
        second.accepted,
        second.fidelity_out
    );
    Ok(())
}
