//! Toeplitz hashing of a key whose first bits Eve knows: exact distance from
//! ideal against the leftover-hash bound.

use qotp::analysis::{leftover_hash_bound, leftover_instance, prefix_side_info};
use qotp::keyring::{toeplitz_hash, ToeplitzHash};
use qotp::pauli::random_bits;
use qotp::protocols::key_rng;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut rng = key_rng(11);
    let h = ToeplitzHash::random(8, 3, &mut rng)?;
    let key = random_bits(8, &mut rng);
    println!("seed {} hashes {:?} to {:?}", h.seed_hex(), key, toeplitz_hash(&key, &h)?);

    let j = 6;
    println!(" e  t  exact   bound");
    for e in [0, 2, 4] {
        for t in [1, 2, 3] {
            let inst = leftover_instance(j, t, &prefix_side_info(j, e))?;
            let bound = leftover_hash_bound(inst.lambda_max, inst.rank_e, t, 0.0)?;
            println!("{e:>2} {t:>2}  {:.4}  {:.4}", inst.exact, bound);
        }
    }
    Ok(())
}
