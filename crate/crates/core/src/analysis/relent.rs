use std::f64::consts::PI;

use rand::Rng;
use rayon::prelude::*;

use super::{invalid, AnalysisError};
use crate::qcore::{eigh, vn_entropy, ComplexMatrix, DensityMatrix, SubsystemLayout, C64};
use crate::seeds::trial_rng;

pub const DEFAULT_RESTARTS: usize = 20;
pub const DEFAULT_ITERS: usize = 500;

const COMPONENTS: usize = 16;
const PARAMS_PER: usize = 5;
const MIN_STEP: f64 = 1e-7;
/// A full pass improving the objective by less than this ends the descent.
const PASS_TOL: f64 = 1e-10;

/// Upper bound on the relative entropy of entanglement of a two-qubit state:
/// the smallest `Tr ρ (log ρ − log σ)` found over separable `σ` that mix 16
/// pure product states. Each restart runs coordinate descent on the Bloch
/// angles and softmax weights, halving a coordinate's step whenever neither
/// direction improves. Restart 0 starts from the product of the marginals;
/// the rest start at random. The result is the minimum over restarts, so it
/// never increases with more restarts.
pub fn rel_entropy_ub(rho: &DensityMatrix, restarts: usize, iters: usize, seed: u64) -> Result<f64, AnalysisError> {
    if rho.num_qubits() != 2 {
        return invalid("relative entropy bound is implemented for two qubits");
    }
    if restarts == 0 {
        return invalid("need at least one restart");
    }
    let neg_entropy = -vn_entropy(rho)?;
    let marginals = product_start(rho)?;
    let results: Vec<f64> = (0..restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = trial_rng(seed, r as u64);
            let start = if r == 0 { marginals.clone() } else { random_start(&mut rng) };
            descend(rho.matrix(), neg_entropy, start, iters)
        })
        .collect();
    // Reduce in restart order so ties resolve to the lowest index.
    Ok(results.into_iter().fold(f64::INFINITY, f64::min).max(0.0))
}

fn descend(rho: &ComplexMatrix, neg_entropy: f64, mut p: Vec<f64>, iters: usize) -> f64 {
    let mut best = objective(rho, neg_entropy, &p);
    let mut steps: Vec<f64> = (0..p.len()).map(|i| if i % PARAMS_PER == 4 { 1.0 } else { 0.5 }).collect();
    for _ in 0..iters {
        if steps.iter().all(|&s| s < MIN_STEP) {
            break;
        }
        let before = best;
        for c in 0..p.len() {
            if steps[c] < MIN_STEP {
                continue;
            }
            let orig = p[c];
            let mut improved = false;
            for dir in [1.0, -1.0] {
                p[c] = orig + dir * steps[c];
                let v = objective(rho, neg_entropy, &p);
                if v < best {
                    best = v;
                    improved = true;
                    break;
                }
            }
            if !improved {
                p[c] = orig;
                steps[c] *= 0.5;
            }
        }
        // The objective is non-negative, so a value this small cannot improve.
        if best < PASS_TOL || (before.is_finite() && before - best < PASS_TOL) {
            break;
        }
    }
    best
}

/// `Tr ρ log ρ − Tr ρ log σ(p)` in bits; infinite when `σ` misses part of
/// the support of `ρ`.
fn objective(rho: &ComplexMatrix, neg_entropy: f64, p: &[f64]) -> f64 {
    let sigma = separable_candidate(p);
    let Ok((vals, vecs)) = eigh(&sigma) else { return f64::INFINITY };
    let mut cross = 0.0;
    for (k, &lambda) in vals.iter().enumerate() {
        let v: Vec<C64> = (0..4).map(|i| vecs[(i, k)]).collect();
        let weight = rho.sandwich(&v, &v).re;
        if weight <= 1e-14 {
            continue;
        }
        if lambda <= 1e-300 {
            return f64::INFINITY;
        }
        cross += weight * lambda.log2();
    }
    neg_entropy - cross
}

fn qubit(theta: f64, phi: f64) -> [C64; 2] {
    [C64::new((theta / 2.0).cos(), 0.0), C64::from_polar((theta / 2.0).sin(), phi)]
}

fn separable_candidate(p: &[f64]) -> ComplexMatrix {
    let logits: Vec<f64> = (0..COMPONENTS).map(|k| p[k * PARAMS_PER + 4]).collect();
    let top = logits.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = logits.iter().map(|l| (l - top).exp()).collect();
    let total: f64 = exps.iter().sum();
    let mut data = vec![C64::new(0.0, 0.0); 16];
    for k in 0..COMPONENTS {
        let w = exps[k] / total;
        if w < 1e-300 {
            continue;
        }
        let q = &p[k * PARAMS_PER..];
        let (a, b) = (qubit(q[0], q[1]), qubit(q[2], q[3]));
        let v = [a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]];
        for i in 0..4 {
            for j in 0..4 {
                data[i * 4 + j] += v[i] * v[j].conj() * w;
            }
        }
    }
    ComplexMatrix::from_vec(4, data).expect("4x4")
}

fn random_start(rng: &mut impl Rng) -> Vec<f64> {
    (0..COMPONENTS)
        .flat_map(|_| {
            [
                (2.0 * rng.gen::<f64>() - 1.0).acos(),
                2.0 * PI * rng.gen::<f64>(),
                (2.0 * rng.gen::<f64>() - 1.0).acos(),
                2.0 * PI * rng.gen::<f64>(),
                rng.gen::<f64>() - 0.5,
            ]
        })
        .collect()
}

/// Eigenbases of the two marginals, weighted as in `ρ_A ⊗ ρ_B`; unused
/// components get negligible weight.
fn product_start(rho: &DensityMatrix) -> Result<Vec<f64>, AnalysisError> {
    let ab = rho.clone().with_layout(SubsystemLayout::new(&[("a", 1), ("b", 1)])?)?;
    let (first, second) = (ab.partial_trace(&["a"])?, ab.partial_trace(&["b"])?);
    let (va, ua) = eigh(first.matrix())?;
    let (vb, ub) = eigh(second.matrix())?;
    let mut p = vec![0.0; COMPONENTS * PARAMS_PER];
    for k in 0..COMPONENTS {
        p[k * PARAMS_PER + 4] = -40.0;
    }
    for i in 0..2 {
        for j in 0..2 {
            let k = 2 * i + j;
            let (ta, pa) = bloch(ua[(0, i)], ua[(1, i)]);
            let (tb, pb) = bloch(ub[(0, j)], ub[(1, j)]);
            let w = (va[i] * vb[j]).max(1e-300);
            p[k * PARAMS_PER..(k + 1) * PARAMS_PER].copy_from_slice(&[ta, pa, tb, pb, w.ln()]);
        }
    }
    Ok(p)
}

/// Bloch angles of the normalized qubit `(a, b)` up to global phase.
fn bloch(a: C64, b: C64) -> (f64, f64) {
    let theta = 2.0 * b.norm().atan2(a.norm());
    let phi = b.arg() - a.arg();
    (theta, phi)
}
