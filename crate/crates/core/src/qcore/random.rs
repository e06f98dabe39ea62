//! Seeded random states and unitaries for tests, examples, and Monte Carlo inputs.

use rand::Rng;

use super::{ComplexMatrix, DensityMatrix, QcoreError, StateVector, SubsystemLayout, C64};

/// Standard normal draw (Box–Muller).
pub fn normal(rng: &mut impl Rng) -> f64 {
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

fn complex_normal(rng: &mut impl Rng) -> C64 {
    C64::new(normal(rng), normal(rng))
}

/// Unitarily invariant random pure state.
pub fn random_state(layout: SubsystemLayout, rng: &mut impl Rng) -> Result<StateVector, QcoreError> {
    let amps = (0..layout.dim()).map(|_| complex_normal(rng)).collect();
    StateVector::normalized(amps, layout)
}

/// Random mixed state of the given rank (mixture of random pure states with
/// random weights).
pub fn random_density(
    layout: SubsystemLayout,
    rank: usize,
    rng: &mut impl Rng,
) -> Result<DensityMatrix, QcoreError> {
    let rank = rank.max(1);
    let raw: Vec<f64> = (0..rank).map(|_| rng.gen_range(0.05..1.0)).collect();
    let total: f64 = raw.iter().sum();
    let weights: Vec<f64> = raw.iter().map(|w| w / total).collect();
    let states = (0..rank)
        .map(|_| random_state(layout.clone(), rng).and_then(|s| s.to_density()))
        .collect::<Result<Vec<_>, _>>()?;
    DensityMatrix::mixture(&weights, &states)
}

/// Haar-distributed unitary via Gram–Schmidt on a complex Ginibre matrix.
pub fn haar_unitary(dim: usize, rng: &mut impl Rng) -> Result<ComplexMatrix, QcoreError> {
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(dim);
    while cols.len() < dim {
        let mut v: Vec<C64> = (0..dim).map(|_| complex_normal(rng)).collect();
        for c in &cols {
            let proj: C64 = c.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            v.iter_mut().zip(c).for_each(|(x, y)| *x -= proj * y);
        }
        let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-8 {
            continue;
        }
        v.iter_mut().for_each(|x| *x /= norm);
        cols.push(v);
    }
    ComplexMatrix::from_fn(dim, |i, j| cols[j][i])
}
