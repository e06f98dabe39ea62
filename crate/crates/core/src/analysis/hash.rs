use super::{invalid, AnalysisError};
use crate::keyring::{toeplitz_hash, ToeplitzHash};
use crate::pauli::{bits_to_index, index_to_bits};

/// `2^{½(log₂ λ_max + log₂ rank_E + t)} + 2ε`: bound on the expected trace
/// norm between the hashed key with Eve's side information and the product
/// of marginals.
pub fn leftover_hash_bound(lambda_max: f64, rank_e: u64, t: usize, eps: f64) -> Result<f64, AnalysisError> {
    if !(lambda_max > 0.0 && lambda_max <= 1.0) {
        return invalid(format!("λ_max = {lambda_max} outside (0, 1]"));
    }
    if rank_e == 0 || t == 0 || eps < 0.0 {
        return invalid("need rank_E ≥ 1, t ≥ 1, ε ≥ 0");
    }
    Ok(2f64.powf(0.5 * (lambda_max.log2() + (rank_e as f64).log2() + t as f64)) + 2.0 * eps)
}

/// Eve's side information when she knows the first `e` of `j` key bits.
pub fn prefix_side_info(j: usize, e: usize) -> Vec<usize> {
    (0..1usize << j).map(|k| k >> (j - e)).collect()
}

/// Exact leftover-hash quantities for a uniformly random `j`-bit key with
/// deterministic classical side information.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LeftoverInstance {
    /// `E_G ‖ρ_TE − ρ_T ⊗ ρ_E‖₁` over all Toeplitz seeds.
    pub exact: f64,
    /// The same against a uniform `ρ_T`.
    pub exact_vs_uniform: f64,
    pub lambda_max: f64,
    pub rank_e: u64,
}

/// Enumerates every Toeplitz seed and key. `side[k]` is Eve's value for
/// key `k`.
pub fn leftover_instance(j: usize, t: usize, side: &[usize]) -> Result<LeftoverInstance, AnalysisError> {
    if t == 0 || t > j || j > 16 {
        return invalid(format!("need 1 ≤ t ≤ j ≤ 16, got j={j} t={t}"));
    }
    if side.len() != 1 << j {
        return invalid(format!("side information needs {} entries", 1usize << j));
    }
    let e_values = side.iter().max().map_or(1, |&v| v + 1);
    let mut p_e = vec![0.0; e_values];
    for &v in side {
        p_e[v] += 1.0;
    }
    let keys = (1usize << j) as f64;
    p_e.iter_mut().for_each(|p| *p /= keys);
    let rank_e = p_e.iter().filter(|&&p| p > 0.0).count() as u64;

    let seed_len = j + t - 1;
    let outputs = 1usize << t;
    let uniform = 1.0 / outputs as f64;
    let (mut sum, mut sum_uniform) = (0.0, 0.0);
    let mut joint = vec![0.0; outputs * e_values];
    for s in 0..1usize << seed_len {
        let h = ToeplitzHash::new(j, t, index_to_bits(s, seed_len)).expect("valid shape");
        joint.iter_mut().for_each(|p| *p = 0.0);
        for (k, &ev) in side.iter().enumerate() {
            let out = bits_to_index(&toeplitz_hash(&index_to_bits(k, j), &h).expect("length j"));
            joint[out * e_values + ev] += 1.0 / keys;
        }
        let p_t: Vec<f64> = (0..outputs).map(|o| joint[o * e_values..(o + 1) * e_values].iter().sum()).collect();
        for o in 0..outputs {
            for ev in 0..e_values {
                let p = joint[o * e_values + ev];
                sum += (p - p_t[o] * p_e[ev]).abs();
                sum_uniform += (p - uniform * p_e[ev]).abs();
            }
        }
    }
    let seeds = (1usize << seed_len) as f64;
    Ok(LeftoverInstance { exact: sum / seeds, exact_vs_uniform: sum_uniform / seeds, lambda_max: 1.0 / keys, rank_e })
}
