use super::{invalid, AnalysisError};
use crate::qcore::{kron, ComplexMatrix, C64};

/// `Σ_i |i⟩|i⟩ / √d` for `d = 2^m`.
pub fn max_entangled_vector(m: usize) -> Vec<C64> {
    let d = 1usize << m;
    let a = C64::new(1.0 / (d as f64).sqrt(), 0.0);
    let mut v = vec![C64::new(0.0, 0.0); d * d];
    for i in 0..d {
        v[i * d + i] = a;
    }
    v
}

/// `‖(I ⊗ U)|ψ+⟩ − (Uᵀ ⊗ I)|ψ+⟩‖`, zero up to rounding for every matrix.
pub fn lemma1_check(u: &ComplexMatrix) -> Result<f64, AnalysisError> {
    residual(u, &u.transpose())
}

/// The same residual with the complex conjugate `U*` in place of `Uᵀ`. It
/// vanishes when `Uᵀ = U*`, for instance for Hermitian `U`, and not in
/// general.
pub fn lemma1_conjugate_residual(u: &ComplexMatrix) -> Result<f64, AnalysisError> {
    residual(u, &u.conj())
}

fn residual(u: &ComplexMatrix, left: &ComplexMatrix) -> Result<f64, AnalysisError> {
    if !u.is_unitary(1e-9) {
        return invalid("matrix is not unitary");
    }
    let d = u.dim();
    let id = ComplexMatrix::identity(d)?;
    let psi = max_entangled_vector(u.num_qubits());
    let a = kron(&id, u).apply(&psi);
    let b = kron(left, &id).apply(&psi);
    Ok(a.iter().zip(&b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt())
}
