//! Dense linear algebra and quantum-state primitives.
//!
//! Everything here is a pure function over immutable values. Registers are
//! addressed by label through [`SubsystemLayout`]; basis indices are
//! big-endian, so the first label owns the most significant bits.

mod eigen;
pub mod random;
mod layout;
mod matrix;
mod state;

use thiserror::Error;

pub use eigen::{eigh, eigvalsh, hermitian_function};
pub use layout::SubsystemLayout;
pub use matrix::{gates, kron, ComplexMatrix, C64};
pub use state::{partial_trace, partial_transpose, DensityMatrix, StateVector};

#[cfg(test)]
pub(crate) use state::embed;

/// Largest register a state vector may span.
pub const STATEVECTOR_QUBIT_CAP: usize = 22;
/// Largest register a density matrix may span.
pub const DENSITY_QUBIT_CAP: usize = 11;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QcoreError {
    #[error("dimension {0} is not a positive power of two")]
    NotPowerOfTwo(usize),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimMismatch { expected: usize, found: usize },
    #[error("unknown subsystem label `{0}`")]
    UnknownLabel(String),
    #[error("duplicate subsystem label `{0}`")]
    DuplicateLabel(String),
    #[error("layouts span different qubit counts")]
    LayoutMismatch,
    #[error("matrix is not Hermitian (defect {0:.3e})")]
    NotHermitian(f64),
    #[error("Jacobi eigensolver did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("{qubits} qubits exceeds the dense cap of {cap}")]
    SizeCap { qubits: usize, cap: usize },
}

/// Half the trace norm of `a - b`, in `[0, 1]`.
pub fn trace_distance(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64, QcoreError> {
    if a.dim() != b.dim() {
        return Err(QcoreError::DimMismatch { expected: a.dim(), found: b.dim() });
    }
    // Canonical operand order makes the result bit-for-bit symmetric.
    let (a, b) = if lex_less(b.matrix(), a.matrix()) { (b, a) } else { (a, b) };
    Ok(0.5 * trace_norm(&(a.matrix() - b.matrix()))?)
}

fn lex_less(a: &ComplexMatrix, b: &ComplexMatrix) -> bool {
    for (x, y) in a.as_slice().iter().zip(b.as_slice()) {
        match (x.re, x.im).partial_cmp(&(y.re, y.im)) {
            Some(std::cmp::Ordering::Less) => return true,
            Some(std::cmp::Ordering::Greater) => return false,
            _ => {}
        }
    }
    false
}

/// Sum of absolute eigenvalues of a Hermitian matrix.
pub fn trace_norm(h: &ComplexMatrix) -> Result<f64, QcoreError> {
    Ok(eigvalsh(h)?.iter().map(|v| v.abs()).sum())
}

/// Von Neumann entropy in bits.
pub fn vn_entropy(rho: &DensityMatrix) -> Result<f64, QcoreError> {
    Ok(spectrum_entropy(&rho.eigenvalues()?))
}

/// Shannon entropy (bits) of a spectrum; non-positive entries contribute 0.
pub fn spectrum_entropy(values: &[f64]) -> f64 {
    values.iter().filter(|&&l| l > 0.0).map(|&l| -l * l.log2()).sum::<f64>().max(0.0)
}

/// `⟨ψ|ρ|ψ⟩`, clamped to `[0, 1]`.
pub fn fidelity_pure(psi: &StateVector, rho: &DensityMatrix) -> Result<f64, QcoreError> {
    if psi.dim() != rho.dim() {
        return Err(QcoreError::DimMismatch { expected: rho.dim(), found: psi.dim() });
    }
    let a = psi.amplitudes();
    Ok(rho.matrix().sandwich(a, a).re.clamp(0.0, 1.0))
}
