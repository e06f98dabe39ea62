use crate::qcore::{DensityMatrix, StateVector, SubsystemLayout, C64};

use super::{PauliError, PauliString};

/// States a Pauli operator can act on.
pub trait PauliTarget: Sized {
    fn num_qubits(&self) -> usize;
    /// `P` applied on global qubits `qubits` (Pauli qubit `i` → `qubits[i]`).
    fn pauli_applied(&self, qubits: &[usize], p: &PauliString) -> Result<Self, PauliError>;
}

impl PauliTarget for StateVector {
    fn num_qubits(&self) -> usize {
        StateVector::num_qubits(self)
    }

    fn pauli_applied(&self, qubits: &[usize], p: &PauliString) -> Result<Self, PauliError> {
        let mut out = self.clone();
        apply_pauli(&mut out, qubits, p)?;
        Ok(out)
    }
}

impl PauliTarget for DensityMatrix {
    fn num_qubits(&self) -> usize {
        DensityMatrix::num_qubits(self)
    }

    fn pauli_applied(&self, qubits: &[usize], p: &PauliString) -> Result<Self, PauliError> {
        check_qubits(self.num_qubits(), qubits, p)?;
        let (xm, zm) = p.index_masks(self.num_qubits(), qubits);
        let d = self.dim();
        let src = self.matrix();
        let mut mat = src.clone();
        // P ρ P†: the global phase cancels.
        for i in 0..d {
            let si = sign(i & zm);
            for j in 0..d {
                mat[(i ^ xm, j ^ xm)] = src[(i, j)] * (si * sign(j & zm));
            }
        }
        Ok(DensityMatrix::from_parts(mat, self.layout().clone()))
    }
}

#[inline]
fn sign(masked: usize) -> f64 {
    if masked.count_ones().is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

fn check_qubits(nq: usize, qubits: &[usize], p: &PauliString) -> Result<(), PauliError> {
    if qubits.len() != p.num_qubits() {
        return Err(PauliError::LengthMismatch { expected: qubits.len(), found: p.num_qubits() });
    }
    if let Some(&q) = qubits.iter().find(|&&q| q >= nq) {
        return Err(PauliError::QubitOutOfRange { qubit: q, n: nq });
    }
    Ok(())
}

/// In-place `|ψ⟩ ← P|ψ⟩` on the listed global qubits.
pub fn apply_pauli(psi: &mut StateVector, qubits: &[usize], p: &PauliString) -> Result<(), PauliError> {
    check_qubits(psi.num_qubits(), qubits, p)?;
    let (xm, zm) = p.index_masks(psi.num_qubits(), qubits);
    let ph = p.phase().value();
    let amps = psi.amplitudes_mut();
    let factor = |i: usize| -> C64 { ph * sign(i & zm) };
    if xm == 0 {
        for (i, a) in amps.iter_mut().enumerate() {
            *a *= factor(i);
        }
    } else {
        // X^x Z^z |b⟩ = (-1)^{z·b} |b ⊕ x⟩
        for i in 0..amps.len() {
            let j = i ^ xm;
            if i < j {
                let (a, b) = (amps[i], amps[j]);
                amps[j] = factor(i) * a;
                amps[i] = factor(j) * b;
            }
        }
    }
    Ok(())
}

/// Encryption operator for a `2m`-bit key: qubit `i` receives `Z^{b_{2i}}`
/// followed by `X^{b_{2i+1}}`, so the factor is `X^{b_{2i+1}} Z^{b_{2i}}`
/// with phase +1.
pub fn pauli_from_key(xseg: &[bool]) -> Result<PauliString, PauliError> {
    if !xseg.len().is_multiple_of(2) {
        return Err(PauliError::OddKeyLength(xseg.len()));
    }
    let m = xseg.len() / 2;
    let mut p = PauliString::identity(m);
    for i in 0..m {
        p.set_z(i, xseg[2 * i]);
        p.set_x(i, xseg[2 * i + 1]);
    }
    Ok(p)
}

fn whole_register<T: PauliTarget>(state: &T, xseg: &[bool]) -> Result<(Vec<usize>, PauliString), PauliError> {
    let p = pauli_from_key(xseg)?;
    if p.num_qubits() != state.num_qubits() {
        return Err(PauliError::LengthMismatch { expected: 2 * state.num_qubits(), found: xseg.len() });
    }
    Ok(((0..p.num_qubits()).collect(), p))
}

/// Quantum one-time pad: `P_x` on every qubit of `state`.
pub fn qotp_encrypt<T: PauliTarget>(state: &T, xseg: &[bool]) -> Result<T, PauliError> {
    let (qubits, p) = whole_register(state, xseg)?;
    state.pauli_applied(&qubits, &p)
}

/// Exact inverse of [`qotp_encrypt`]: `P_x†`.
pub fn qotp_decrypt<T: PauliTarget>(state: &T, xseg: &[bool]) -> Result<T, PauliError> {
    let (qubits, p) = whole_register(state, xseg)?;
    state.pauli_applied(&qubits, &p.adjoint())
}

/// Uniform average of `P_x ρ P_x†` over all `2^{2m}` keys.
pub fn qotp_key_average(rho: &DensityMatrix) -> Result<DensityMatrix, PauliError> {
    let m = rho.num_qubits();
    let keys = 1usize << (2 * m);
    let images = (0..keys)
        .map(|k| qotp_encrypt(rho, &super::index_to_bits(k, 2 * m)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(DensityMatrix::mixture(&vec![1.0 / keys as f64; keys], &images)?)
}

/// Conditional bit flips on register `A`: `X` on Alice qubit `i` iff key bit
/// `i` is set. The rest of the joint state is untouched.
pub fn bitflip_protect(rho: &DensityMatrix, key: &[bool]) -> Result<DensityMatrix, PauliError> {
    let qubits = rho.layout().qubits_of(&["A"])?;
    if key.len() != qubits.len() {
        return Err(PauliError::LengthMismatch { expected: qubits.len(), found: key.len() });
    }
    let zeros = vec![false; key.len()];
    let p = PauliString::from_bits(key, &zeros, super::Phase::PlusOne)?;
    rho.pauli_applied(&qubits, &p)
}

/// Average of [`bitflip_protect`] over independent key bits, bit `i` set
/// with probability `flip[i]`.
pub fn bitflip_average(rho: &DensityMatrix, flip: &[f64]) -> Result<DensityMatrix, PauliError> {
    let n = flip.len();
    let mut weights = Vec::with_capacity(1 << n);
    let mut images = Vec::with_capacity(1 << n);
    for k in 0..1usize << n {
        let key = super::index_to_bits(k, n);
        let w: f64 = key.iter().zip(flip).map(|(&b, &p)| if b { p } else { 1.0 - p }).product();
        if w > 0.0 {
            weights.push(w);
            images.push(bitflip_protect(rho, &key)?);
        }
    }
    Ok(DensityMatrix::mixture(&weights, &images)?)
}

/// The four two-qubit Bell states.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bell {
    /// `(|00⟩ + |11⟩)/√2`
    PhiPlus,
    /// `(|00⟩ − |11⟩)/√2`
    PhiMinus,
    /// `(|01⟩ + |10⟩)/√2`
    PsiPlus,
    /// `(|01⟩ − |10⟩)/√2`, the singlet.
    PsiMinus,
}

impl Bell {
    pub fn state(self, first: &str, second: &str) -> Result<StateVector, PauliError> {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let z = C64::new(0.0, 0.0);
        let (p, m) = (C64::new(r, 0.0), C64::new(-r, 0.0));
        let amps = match self {
            Bell::PhiPlus => vec![p, z, z, p],
            Bell::PhiMinus => vec![p, z, z, m],
            Bell::PsiPlus => vec![z, p, p, z],
            Bell::PsiMinus => vec![z, p, m, z],
        };
        let layout = SubsystemLayout::new(&[(first, 1), (second, 1)])?;
        Ok(StateVector::new(amps, layout)?)
    }
}

/// `n` singlets with halves in registers `A` and `C`; pair `i` is
/// `(A_i, C_i)`.
pub fn singlets(n: usize) -> Result<StateVector, PauliError> {
    let layout = SubsystemLayout::new(&[("A", n), ("C", n)])?;
    let mut psi = StateVector::basis(layout, 0)?;
    for i in 0..n {
        psi.h(i);
        psi.cnot(i, n + i);
        psi.x(n + i);
        psi.z(i);
    }
    Ok(psi)
}

/// `Σ_i |i⟩|i⟩ / √2^m` over registers `first` and `second` of `m` qubits.
pub fn max_entangled(m: usize, first: &str, second: &str) -> Result<StateVector, PauliError> {
    let layout = SubsystemLayout::new(&[(first, m), (second, m)])?;
    let mut psi = StateVector::basis(layout, 0)?;
    for i in 0..m {
        psi.h(i);
        psi.cnot(i, m + i);
    }
    Ok(psi)
}
