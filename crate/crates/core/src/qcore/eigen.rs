//! Cyclic Jacobi eigensolver for complex Hermitian matrices.

use super::matrix::{ComplexMatrix, C64, ZERO};
use super::QcoreError;

/// Sweep cap before giving up.
pub const MAX_SWEEPS: usize = 100;
/// Relative off-diagonal threshold (against the Frobenius norm).
pub const OFF_DIAGONAL_TOL: f64 = 1e-13;
/// Hermiticity tolerance on input.
pub const HERMITIAN_TOL: f64 = 1e-9;

/// Eigen-decomposition of a Hermitian matrix.
///
/// Eigenvalues are returned in ascending order; column `k` of the returned
/// matrix is the unit eigenvector for eigenvalue `k`.
pub fn eigh(h: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix), QcoreError> {
    let defect = h.hermitian_defect();
    if defect > HERMITIAN_TOL * h.max_abs().max(1.0) {
        return Err(QcoreError::NotHermitian(defect));
    }
    let n = h.dim();
    // Work on the exactly-Hermitian part.
    let mut a = h.clone();
    for i in 0..n {
        a[(i, i)] = C64::new(a[(i, i)].re, 0.0);
        for j in (i + 1)..n {
            let avg = (a[(i, j)] + a[(j, i)].conj()) * 0.5;
            a[(i, j)] = avg;
            a[(j, i)] = avg.conj();
        }
    }
    let mut v = ComplexMatrix::identity(n)?;
    let threshold = OFF_DIAGONAL_TOL * a.frobenius_norm();

    let mut converged = n == 1;
    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&a) <= threshold {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }
    if !converged && off_diagonal_norm(&a) > threshold {
        return Err(QcoreError::NoConvergence { sweeps: MAX_SWEEPS });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vecs = ComplexMatrix::from_fn(n, |r, c| v[(r, order[c])])?;
    Ok((values, vecs))
}

/// Eigenvalues only, ascending.
pub fn eigvalsh(h: &ComplexMatrix) -> Result<Vec<f64>, QcoreError> {
    eigh(h).map(|(vals, _)| vals)
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.dim();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// One complex Jacobi rotation annihilating `a[p][q]`.
///
/// With `a[p][q] = |c| e^{iφ}`, the phase matrix `diag(1, e^{-iφ})` makes the
/// pivot real; a real symmetric rotation then zeroes it. The combined unitary
/// `G` is applied as `A ← G† A G`, `V ← V G`.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let c = a[(p, q)];
    let abs_c = c.norm();
    if abs_c == 0.0 {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let phase = c / abs_c;
    let phase_conj = phase.conj();

    let theta = (aqq - app) / (2.0 * abs_c);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let t = if theta == 0.0 { 1.0 } else { t };
    let cs = 1.0 / (t * t + 1.0).sqrt();
    let sn = t * cs;

    // G = [[cs, sn], [-sn e^{-iφ}, cs e^{-iφ}]] on (p, q).
    let g_pp = C64::new(cs, 0.0);
    let g_pq = C64::new(sn, 0.0);
    let g_qp = phase_conj * (-sn);
    let g_qq = phase_conj * cs;

    let n = a.dim();
    // A ← A G (columns p, q)
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * g_pp + akq * g_qp;
        a[(k, q)] = akp * g_pq + akq * g_qq;
    }
    // A ← G† A (rows p, q)
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = g_pp.conj() * apk + g_qp.conj() * aqk;
        a[(q, k)] = g_pq.conj() * apk + g_qq.conj() * aqk;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = C64::new(a[(q, q)].re, 0.0);
    // V ← V G
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * g_pp + vkq * g_qp;
        v[(k, q)] = vkp * g_pq + vkq * g_qq;
    }
}

/// Applies a real function to the spectrum: `V f(Λ) V†`.
pub fn hermitian_function(
    h: &ComplexMatrix,
    f: impl Fn(f64) -> f64,
) -> Result<ComplexMatrix, QcoreError> {
    let (vals, vecs) = eigh(h)?;
    let n = h.dim();
    ComplexMatrix::from_fn(n, |i, j| {
        (0..n).map(|k| vecs[(i, k)] * vecs[(j, k)].conj() * f(vals[k])).sum()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::matrix::gates;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_hermitian(n: usize, rng: &mut impl Rng) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(n).unwrap();
        for i in 0..n {
            m[(i, i)] = C64::new(rng.gen_range(-1.0..1.0), 0.0);
            for j in (i + 1)..n {
                let z = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                m[(i, j)] = z;
                m[(j, i)] = z.conj();
            }
        }
        m
    }

    fn reconstruct(vals: &[f64], vecs: &ComplexMatrix) -> ComplexMatrix {
        let lam = ComplexMatrix::diagonal(vals).unwrap();
        vecs.matmul(&lam).matmul(&vecs.adjoint())
    }

    #[test]
    fn diagonal_input_is_returned_sorted() {
        let d = ComplexMatrix::diagonal(&[3.0, -1.0, 0.5, 2.0]).unwrap();
        let (vals, vecs) = eigh(&d).unwrap();
        assert_eq!(vals, vec![-1.0, 0.5, 2.0, 3.0]);
        // columns are permuted unit vectors
        for c in 0..4 {
            let nonzero: Vec<_> = (0..4).filter(|&r| vecs[(r, c)].norm() > 0.5).collect();
            assert_eq!(nonzero.len(), 1);
        }
    }

    #[test]
    fn pauli_x_spectrum() {
        let vals = eigvalsh(&gates::pauli_x()).unwrap();
        assert!((vals[0] + 1.0).abs() < 1e-14);
        assert!((vals[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn pauli_y_spectrum_has_complex_vectors() {
        let (vals, vecs) = eigh(&gates::pauli_y()).unwrap();
        assert!((vals[0] + 1.0).abs() < 1e-14 && (vals[1] - 1.0).abs() < 1e-14);
        assert!(reconstruct(&vals, &vecs).max_abs_diff(&gates::pauli_y()) < 1e-13);
    }

    #[test]
    fn random_hermitian_reconstructs() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in [2, 4, 8, 16, 32] {
            for _ in 0..5 {
                let h = random_hermitian(n, &mut rng);
                let (vals, vecs) = eigh(&h).unwrap();
                assert!(reconstruct(&vals, &vecs).max_abs_diff(&h) <= 1e-9);
                assert!(vecs.is_unitary(1e-10));
                let tr: f64 = vals.iter().sum();
                assert!((tr - h.trace().re).abs() <= 1e-9);
                assert!(vals.windows(2).all(|w| w[0] <= w[1]));
            }
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut m = gates::pauli_x();
        m[(0, 1)] = C64::new(2.0, 0.0);
        assert!(matches!(eigh(&m), Err(QcoreError::NotHermitian(_))));
    }

    #[test]
    fn degenerate_spectrum() {
        let id = ComplexMatrix::identity(8).unwrap();
        let (vals, vecs) = eigh(&id).unwrap();
        assert!(vals.iter().all(|v| (v - 1.0).abs() < 1e-15));
        assert!(vecs.max_abs_diff(&id) < 1e-15);
    }
}
