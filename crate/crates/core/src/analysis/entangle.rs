use super::{invalid, AnalysisError};
use crate::qcore::{eigvalsh, partial_transpose, trace_distance, vn_entropy, DensityMatrix};

/// Distance of `ρ_KE` from the product of its marginals. Registers other
/// than `K` and `E` are traced out first.
pub fn eve_product_distance(joint: &DensityMatrix) -> Result<f64, AnalysisError> {
    let layout = joint.layout();
    if !layout.contains("K") || !layout.contains("E") {
        return invalid("joint state needs registers `K` and `E`");
    }
    let ke = joint.partial_trace(&["K", "E"])?;
    let product = ke.partial_trace(&["K"])?.tensor(&ke.partial_trace(&["E"])?)?;
    Ok(trace_distance(&ke, &product)?)
}

/// Smallest eigenvalue of the partial transpose over `cut`.
pub fn ppt_min_eigenvalue<S: AsRef<str>>(rho: &DensityMatrix, cut: &[S]) -> Result<f64, AnalysisError> {
    check_cut(rho, cut)?;
    Ok(eigvalsh(&partial_transpose(rho, cut)?)?[0])
}

/// Separability decision for two qubits, where a positive partial transpose
/// is necessary and sufficient. Errors on any other shape.
pub fn separable_2x2<S: AsRef<str>>(rho: &DensityMatrix, cut: &[S]) -> Result<bool, AnalysisError> {
    check_cut(rho, cut)?;
    let cut_qubits = rho.layout().qubits_of(cut)?.len();
    if rho.num_qubits() != 2 || cut_qubits != 1 {
        return invalid("exact PPT decision only for a qubit-qubit cut");
    }
    Ok(ppt_min_eigenvalue(rho, cut)? >= -1e-12)
}

/// `S(ρ_AB) ≥ S(ρ_A) − 1e-8` with `A = cut`. Holds for every separable
/// state, so `false` witnesses entanglement.
pub fn entropy_separability_check<S: AsRef<str>>(rho: &DensityMatrix, cut: &[S]) -> Result<bool, AnalysisError> {
    check_cut(rho, cut)?;
    Ok(vn_entropy(rho)? >= vn_entropy(&rho.partial_trace(cut)?)? - 1e-8)
}

fn check_cut<S: AsRef<str>>(rho: &DensityMatrix, cut: &[S]) -> Result<(), AnalysisError> {
    let qubits = rho.layout().qubits_of(cut)?;
    if qubits.is_empty() || qubits.len() == rho.num_qubits() {
        return invalid("cut must be a proper, non-empty set of registers");
    }
    Ok(())
}
