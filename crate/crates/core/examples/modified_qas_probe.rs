//! Exact accept branch of the coherent-key scheme under a CNOT probe: how
//! far Eve's qubit and the key are from a product state.

use qotp::pauli::index_to_bits;
use qotp::protocols::{analyze_modified_qas, input_rng, AttackModel};
use qotp::purity::CodeFamily;
use qotp::qcore::random::random_state;
use qotp::qcore::SubsystemLayout;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (m, s) = (1, 1);
    let input = random_state(SubsystemLayout::single("payload", m), &mut input_rng(6))?;
    println!("attack         yz  p_accept  F_ab    D       2(1-F_ab)");
    for attack in [AttackModel::None, AttackModel::cnot_probe(0), AttackModel::cnot_probe(1)] {
        for k in 0..4 {
            let a = analyze_modified_qas(m, s, &input, &index_to_bits(k, 2), &attack, CodeFamily::new(7))?;
            if let Some(acc) = a.accept {
                println!(
                    "{:<14} {k:02b}  {:.4}    {:.4}  {:.4}  {:.4}",
                    attack.to_string(),
                    a.p_accept,
                    acc.ab_overlap,
                    acc.eve_key_product_distance,
                    2.0 * (1.0 - acc.ab_overlap)
                );
            }
        }
    }
    Ok(())
}
