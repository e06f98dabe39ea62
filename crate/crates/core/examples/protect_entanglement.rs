//! Bit-flip padding of singlet halves. An unbiased pad leaves the padded
//! state separable; a biased one does not.

use qotp::analysis::{ppt_min_eigenvalue, rel_entropy_ub, DEFAULT_ITERS, DEFAULT_RESTARTS};
use qotp::pauli::{bitflip_average, singlets};
use qotp::protocols::{run_protect_entanglement, AttackModel, SimulationParams};
use qotp::qcore::vn_entropy;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let psi = singlets(1)?.to_density()?;
    println!("flip   PT min     rel entropy ub");
    for p in [0.0, 0.25, 0.4, 0.5] {
        let rho = bitflip_average(&psi, &[p])?;
        println!("{p:<5}  {:+.4}   {:.4}", ppt_min_eigenvalue(&rho, &["A"])?, rel_entropy_ub(&rho, DEFAULT_RESTARTS, DEFAULT_ITERS, 1)?);
    }
    for n in 1..=3 {
        let s_a = vn_entropy(&singlets(n)?.reduced(&["A"])?)?;
        let rec = run_protect_entanglement(&SimulationParams::new(n, 1, 0), &vec![true; n], &AttackModel::None)?;
        println!("n={n}: S(A) = {s_a:.6}, received fidelity {:.6}", rec.fidelity_out);
    }
    Ok(())
}
