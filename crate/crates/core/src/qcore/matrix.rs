use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use super::QcoreError;

pub type C64 = Complex64;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

/// Dense square complex matrix, row-major, with a power-of-two dimension.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Result<Self, QcoreError> {
        check_dim(dim)?;
        Ok(Self { dim, data: vec![ZERO; dim * dim] })
    }

    pub fn identity(dim: usize) -> Result<Self, QcoreError> {
        let mut m = Self::zeros(dim)?;
        for i in 0..dim {
            m.data[i * dim + i] = ONE;
        }
        Ok(m)
    }

    /// Builds a matrix from row-major entries.
    pub fn from_vec(dim: usize, data: Vec<C64>) -> Result<Self, QcoreError> {
        check_dim(dim)?;
        if data.len() != dim * dim {
            return Err(QcoreError::DimMismatch { expected: dim * dim, found: data.len() });
        }
        Ok(Self { dim, data })
    }

    pub fn from_real(dim: usize, data: &[f64]) -> Result<Self, QcoreError> {
        Self::from_vec(dim, data.iter().map(|&v| C64::new(v, 0.0)).collect())
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> C64) -> Result<Self, QcoreError> {
        check_dim(dim)?;
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Ok(Self { dim, data })
    }

    /// Diagonal matrix from real entries.
    pub fn diagonal(values: &[f64]) -> Result<Self, QcoreError> {
        let dim = values.len();
        let mut m = Self::zeros(dim)?;
        for (i, &v) in values.iter().enumerate() {
            m.data[i * dim + i] = C64::new(v, 0.0);
        }
        Ok(m)
    }

    /// `|v⟩⟨v|` for an arbitrary (not necessarily normalised) vector.
    pub fn outer(v: &[C64]) -> Result<Self, QcoreError> {
        Self::from_fn(v.len(), |i, j| v[i] * v[j].conj())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_qubits(&self) -> usize {
        self.dim.trailing_zeros() as usize
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub(crate) fn as_mut_slice(&mut self) -> &mut [C64] {
        &mut self.data
    }

    pub fn adjoint(&self) -> Self {
        let d = self.dim;
        let mut out = self.clone();
        for i in 0..d {
            for j in 0..d {
                out.data[i * d + j] = self.data[j * d + i].conj();
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let d = self.dim;
        let mut out = self.clone();
        for i in 0..d {
            for j in 0..d {
                out.data[i * d + j] = self.data[j * d + i];
            }
        }
        out
    }

    pub fn conj(&self) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|z| z.conj()).collect() }
    }

    pub fn scale(&self, k: C64) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|z| z * k).collect() }
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self.data[i * self.dim + i]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise deviation from Hermiticity.
    pub fn hermitian_defect(&self) -> f64 {
        let d = self.dim;
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in i..d {
                let e = (self.data[i * d + j] - self.data[j * d + i].conj()).norm();
                worst = worst.max(e);
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_defect() <= tol
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        let prod = self.adjoint().matmul(self);
        let id = Self::identity(self.dim).expect("dim already validated");
        prod.max_abs_diff(&id) <= tol
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let d = self.dim;
        let mut out = vec![ZERO; d * d];
        for i in 0..d {
            for k in 0..d {
                let a = self.data[i * d + k];
                if a == ZERO {
                    continue;
                }
                let row = &other.data[k * d..(k + 1) * d];
                let dst = &mut out[i * d..(i + 1) * d];
                for (o, b) in dst.iter_mut().zip(row) {
                    *o += a * b;
                }
            }
        }
        Self { dim: d, data: out }
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.dim, "dimension mismatch");
        let d = self.dim;
        (0..d)
            .map(|i| self.data[i * d..(i + 1) * d].iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `⟨u| self |v⟩`
    pub fn sandwich(&self, u: &[C64], v: &[C64]) -> C64 {
        let mv = self.apply(v);
        u.iter().zip(&mv).map(|(a, b)| a.conj() * b).sum()
    }

    /// `U · self · U†`
    pub fn conjugate_by(&self, u: &Self) -> Self {
        u.matmul(self).matmul(&u.adjoint())
    }
}

fn check_dim(dim: usize) -> Result<(), QcoreError> {
    if dim == 0 || !dim.is_power_of_two() {
        Err(QcoreError::NotPowerOfTwo(dim))
    } else {
        Ok(())
    }
}

/// Tensor product `a ⊗ b`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (da, db) = (a.dim, b.dim);
    let d = da * db;
    let mut data = vec![ZERO; d * d];
    for i in 0..da {
        for j in 0..da {
            let aij = a.data[i * da + j];
            if aij == ZERO {
                continue;
            }
            for k in 0..db {
                let row = (i * db + k) * d + j * db;
                for l in 0..db {
                    data[row + l] = aij * b.data[k * db + l];
                }
            }
        }
    }
    ComplexMatrix { dim: d, data }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.dim + j]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs)
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{})", self.dim, self.dim)?;
        for i in 0..self.dim {
            let row: Vec<String> = (0..self.dim)
                .map(|j| {
                    let z = self.data[i * self.dim + j];
                    format!("{:+.4}{:+.4}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Single-qubit Pauli and Clifford matrices used throughout the crate.
pub mod gates {
    use super::{ComplexMatrix, C64, ONE, ZERO};

    const I: C64 = C64::new(0.0, 1.0);

    pub fn id2() -> ComplexMatrix {
        ComplexMatrix::from_vec(2, vec![ONE, ZERO, ZERO, ONE]).unwrap()
    }

    pub fn pauli_x() -> ComplexMatrix {
        ComplexMatrix::from_vec(2, vec![ZERO, ONE, ONE, ZERO]).unwrap()
    }

    pub fn pauli_y() -> ComplexMatrix {
        ComplexMatrix::from_vec(2, vec![ZERO, -I, I, ZERO]).unwrap()
    }

    pub fn pauli_z() -> ComplexMatrix {
        ComplexMatrix::from_vec(2, vec![ONE, ZERO, ZERO, -ONE]).unwrap()
    }

    pub fn hadamard() -> ComplexMatrix {
        let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        ComplexMatrix::from_vec(2, vec![h, h, h, -h]).unwrap()
    }

    pub fn phase_s() -> ComplexMatrix {
        ComplexMatrix::from_vec(2, vec![ONE, ZERO, ZERO, I]).unwrap()
    }

    /// CNOT with the control on the more significant qubit.
    pub fn cnot() -> ComplexMatrix {
        ComplexMatrix::from_real(
            4,
            &[1., 0., 0., 0., 0., 1., 0., 0., 0., 0., 0., 1., 0., 0., 1., 0.],
        )
        .unwrap()
    }
}
