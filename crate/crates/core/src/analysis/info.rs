use rand::Rng;

use super::{invalid, AnalysisError};
use crate::qcore::random::haar_unitary;
use crate::qcore::{eigvalsh, spectrum_entropy, vn_entropy, ComplexMatrix, DensityMatrix};

/// Weighted family of states `{p_i, ρ_i}`.
#[derive(Clone, Debug)]
pub struct Ensemble {
    probs: Vec<f64>,
    states: Vec<DensityMatrix>,
}

impl Ensemble {
    pub fn new(probs: Vec<f64>, states: Vec<DensityMatrix>) -> Result<Self, AnalysisError> {
        if probs.is_empty() || probs.len() != states.len() {
            return invalid("ensemble needs one probability per state");
        }
        if probs.iter().any(|&p| p < 0.0) || (probs.iter().sum::<f64>() - 1.0).abs() > 1e-12 {
            return invalid("ensemble probabilities must be non-negative and sum to 1");
        }
        let dim = states[0].dim();
        if states.iter().any(|s| s.dim() != dim) {
            return invalid("ensemble states differ in dimension");
        }
        Ok(Self { probs, states })
    }

    pub fn uniform(states: Vec<DensityMatrix>) -> Result<Self, AnalysisError> {
        let n = states.len().max(1);
        Self::new(vec![1.0 / n as f64; states.len()], states)
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn states(&self) -> &[DensityMatrix] {
        &self.states
    }

    pub fn dim(&self) -> usize {
        self.states[0].dim()
    }

    pub fn average(&self) -> Result<DensityMatrix, AnalysisError> {
        Ok(DensityMatrix::mixture(&self.probs, &self.states)?)
    }
}

/// Positive operators summing to the identity.
#[derive(Clone, Debug)]
pub struct Povm {
    elements: Vec<ComplexMatrix>,
}

const POVM_TOL: f64 = 1e-9;

impl Povm {
    pub fn new(elements: Vec<ComplexMatrix>) -> Result<Self, AnalysisError> {
        let Some(first) = elements.first() else {
            return invalid("POVM needs at least one element");
        };
        let dim = first.dim();
        let mut total = ComplexMatrix::zeros(dim)?;
        for e in &elements {
            if e.dim() != dim {
                return invalid("POVM elements differ in dimension");
            }
            if !e.is_hermitian(POVM_TOL) || eigvalsh(e)?[0] < -POVM_TOL {
                return invalid("POVM element is not positive semidefinite");
            }
            total = &total + e;
        }
        if total.max_abs_diff(&ComplexMatrix::identity(dim)?) > POVM_TOL {
            return invalid("POVM elements do not sum to the identity");
        }
        Ok(Self { elements })
    }

    /// The trivial single-outcome measurement.
    pub fn trivial(dim: usize) -> Result<Self, AnalysisError> {
        Self::new(vec![ComplexMatrix::identity(dim)?])
    }

    /// Projective measurement onto the columns of unitary `u`.
    pub fn projective(u: &ComplexMatrix) -> Result<Self, AnalysisError> {
        let d = u.dim();
        let elements = (0..d)
            .map(|k| ComplexMatrix::from_fn(d, |i, j| u[(i, k)] * u[(j, k)].conj()))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(elements)
    }

    pub fn computational(dim: usize) -> Result<Self, AnalysisError> {
        Self::projective(&ComplexMatrix::identity(dim)?)
    }

    /// Projective measurement in a Haar-random basis.
    pub fn random_projective(dim: usize, rng: &mut impl Rng) -> Result<Self, AnalysisError> {
        Self::projective(&haar_unitary(dim, rng)?)
    }

    pub fn elements(&self) -> &[ComplexMatrix] {
        &self.elements
    }

    pub fn dim(&self) -> usize {
        self.elements[0].dim()
    }
}

/// `S(Σ p_i ρ_i) − Σ p_i S(ρ_i)`.
pub fn holevo(e: &Ensemble) -> Result<f64, AnalysisError> {
    let mut chi = vn_entropy(&e.average()?)?;
    for (p, rho) in e.probs.iter().zip(&e.states) {
        chi -= p * vn_entropy(rho)?;
    }
    Ok(chi.max(0.0))
}

/// Classical mutual information of `p(i, v) = p_i Tr(M_v ρ_i)`.
pub fn mutual_info_measurement(e: &Ensemble, m: &Povm) -> Result<f64, AnalysisError> {
    if e.dim() != m.dim() {
        return invalid(format!("ensemble dimension {} vs POVM dimension {}", e.dim(), m.dim()));
    }
    let joint: Vec<Vec<f64>> = e
        .probs
        .iter()
        .zip(&e.states)
        .map(|(p, rho)| m.elements.iter().map(|mv| p * (rho.matrix() * mv).trace().re.max(0.0)).collect())
        .collect();
    let pi: Vec<f64> = joint.iter().map(|row| row.iter().sum()).collect();
    let pv: Vec<f64> = (0..m.elements.len()).map(|v| joint.iter().map(|row| row[v]).sum()).collect();
    let flat: Vec<f64> = joint.into_iter().flatten().collect();
    Ok((spectrum_entropy(&pi) + spectrum_entropy(&pv) - spectrum_entropy(&flat)).max(0.0))
}
