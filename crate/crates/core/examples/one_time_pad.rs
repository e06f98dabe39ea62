//! Encrypts a random two-qubit state with every Pauli key and shows that the
//! key-averaged ciphertext is the maximally mixed state.

use qotp::pauli::{index_to_bits, qotp_decrypt, qotp_encrypt, qotp_key_average};
use qotp::protocols::input_rng;
use qotp::qcore::random::random_state;
use qotp::qcore::{trace_distance, DensityMatrix, SubsystemLayout};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let m = 2;
    let layout = SubsystemLayout::single("payload", m);
    let psi = random_state(layout.clone(), &mut input_rng(1))?;
    let rho = psi.to_density()?;

    let key = index_to_bits(0b1011, 2 * m);
    let cipher = qotp_encrypt(&psi, &key)?;
    let back = qotp_decrypt(&cipher, &key)?;
    println!("round trip overlap   {:.12}", back.overlap(&psi));
    println!("ciphertext overlap   {:.6}", cipher.overlap(&psi));

    let mixed = DensityMatrix::maximally_mixed(layout)?;
    let avg = qotp_key_average(&rho)?;
    println!("plaintext to I/4     {:.6}", trace_distance(&rho, &mixed)?);
    println!("key average to I/4   {:.1e}", trace_distance(&avg, &mixed)?);
    Ok(())
}
