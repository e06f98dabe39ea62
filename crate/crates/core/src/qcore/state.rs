use super::eigen::eigvalsh;
use super::layout::{qubit_shift, IndexSplit, SubsystemLayout};
use super::matrix::{kron, ComplexMatrix, C64, ONE, ZERO};
use super::{QcoreError, DENSITY_QUBIT_CAP, STATEVECTOR_QUBIT_CAP};

const NORM_TOL: f64 = 1e-12;
const DENSITY_TOL: f64 = 1e-9;

/// Normalised pure state over a labelled register layout.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    amps: Vec<C64>,
    layout: SubsystemLayout,
}

impl StateVector {
    pub fn new(amps: Vec<C64>, layout: SubsystemLayout) -> Result<Self, QcoreError> {
        check_cap(layout.total_qubits(), STATEVECTOR_QUBIT_CAP)?;
        if amps.len() != layout.dim() {
            return Err(QcoreError::DimMismatch { expected: layout.dim(), found: amps.len() });
        }
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(QcoreError::InvalidState(format!("state norm {norm} differs from 1")));
        }
        Ok(Self { amps, layout })
    }

    /// Rescales `amps` to unit norm; fails on the zero vector.
    pub fn normalized(mut amps: Vec<C64>, layout: SubsystemLayout) -> Result<Self, QcoreError> {
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(QcoreError::InvalidState("cannot normalise a zero vector".into()));
        }
        amps.iter_mut().for_each(|a| *a /= norm);
        Self::new(amps, layout)
    }

    pub fn basis(layout: SubsystemLayout, index: usize) -> Result<Self, QcoreError> {
        check_cap(layout.total_qubits(), STATEVECTOR_QUBIT_CAP)?;
        let dim = layout.dim();
        if index >= dim {
            return Err(QcoreError::DimMismatch { expected: dim, found: index });
        }
        let mut amps = vec![ZERO; dim];
        amps[index] = ONE;
        Ok(Self { amps, layout })
    }

    /// Computational basis state from bits, qubit 0 first.
    pub fn from_bits(layout: SubsystemLayout, bits: &[bool]) -> Result<Self, QcoreError> {
        if bits.len() != layout.total_qubits() {
            return Err(QcoreError::DimMismatch { expected: layout.total_qubits(), found: bits.len() });
        }
        let index = bits.iter().fold(0usize, |acc, &b| (acc << 1) | b as usize);
        Self::basis(layout, index)
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [C64] {
        &mut self.amps
    }

    pub fn layout(&self) -> &SubsystemLayout {
        &self.layout
    }

    pub fn num_qubits(&self) -> usize {
        self.layout.total_qubits()
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn with_layout(mut self, layout: SubsystemLayout) -> Result<Self, QcoreError> {
        if layout.total_qubits() != self.layout.total_qubits() {
            return Err(QcoreError::LayoutMismatch);
        }
        self.layout = layout;
        Ok(self)
    }

    pub fn inner(&self, other: &Self) -> C64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }

    /// `|⟨self|other⟩|²`
    pub fn overlap(&self, other: &Self) -> f64 {
        self.inner(other).norm_sqr()
    }

    pub fn tensor(&self, other: &Self) -> Result<Self, QcoreError> {
        let layout = self.layout.concat(&other.layout)?;
        check_cap(layout.total_qubits(), STATEVECTOR_QUBIT_CAP)?;
        let mut amps = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        Ok(Self { amps, layout })
    }

    /// Applies a 2×2 matrix to global qubit `q`.
    pub fn apply_single(&mut self, q: usize, u: &ComplexMatrix) {
        let (a, b, c, d) = (u[(0, 0)], u[(0, 1)], u[(1, 0)], u[(1, 1)]);
        let bit = 1usize << qubit_shift(self.num_qubits(), q);
        for i in 0..self.amps.len() {
            if i & bit == 0 {
                let (x, y) = (self.amps[i], self.amps[i | bit]);
                self.amps[i] = a * x + b * y;
                self.amps[i | bit] = c * x + d * y;
            }
        }
    }

    pub fn h(&mut self, q: usize) {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let bit = 1usize << qubit_shift(self.num_qubits(), q);
        for i in 0..self.amps.len() {
            if i & bit == 0 {
                let (x, y) = (self.amps[i], self.amps[i | bit]);
                self.amps[i] = (x + y) * s;
                self.amps[i | bit] = (x - y) * s;
            }
        }
    }

    fn phase_on_one(&mut self, q: usize, phase: C64) {
        let bit = 1usize << qubit_shift(self.num_qubits(), q);
        for (i, a) in self.amps.iter_mut().enumerate() {
            if i & bit != 0 {
                *a *= phase;
            }
        }
    }

    pub fn s(&mut self, q: usize) {
        self.phase_on_one(q, C64::new(0.0, 1.0));
    }

    pub fn sdg(&mut self, q: usize) {
        self.phase_on_one(q, C64::new(0.0, -1.0));
    }

    pub fn z(&mut self, q: usize) {
        self.phase_on_one(q, -ONE);
    }

    pub fn x(&mut self, q: usize) {
        let bit = 1usize << qubit_shift(self.num_qubits(), q);
        for i in 0..self.amps.len() {
            if i & bit == 0 {
                self.amps.swap(i, i | bit);
            }
        }
    }

    pub fn y(&mut self, q: usize) {
        // Y = i X Z
        self.z(q);
        self.x(q);
        self.amps.iter_mut().for_each(|a| *a *= C64::new(0.0, 1.0));
    }

    pub fn cnot(&mut self, control: usize, target: usize) {
        assert_ne!(control, target, "CNOT needs distinct qubits");
        let nq = self.num_qubits();
        let cb = 1usize << qubit_shift(nq, control);
        let tb = 1usize << qubit_shift(nq, target);
        for i in 0..self.amps.len() {
            if i & cb != 0 && i & tb == 0 {
                self.amps.swap(i, i | tb);
            }
        }
    }

    pub fn cz(&mut self, a: usize, b: usize) {
        let nq = self.num_qubits();
        let ab = 1usize << qubit_shift(nq, a);
        let bb = 1usize << qubit_shift(nq, b);
        for (i, amp) in self.amps.iter_mut().enumerate() {
            if i & ab != 0 && i & bb != 0 {
                *amp = -*amp;
            }
        }
    }

    pub fn swap(&mut self, a: usize, b: usize) {
        if a != b {
            self.cnot(a, b);
            self.cnot(b, a);
            self.cnot(a, b);
        }
    }

    /// Applies a unitary on the listed global qubits (first listed = most
    /// significant within `u`).
    pub fn apply_unitary(&mut self, qubits: &[usize], u: &ComplexMatrix) -> Result<(), QcoreError> {
        if u.dim() != 1 << qubits.len() {
            return Err(QcoreError::DimMismatch { expected: 1 << qubits.len(), found: u.dim() });
        }
        let split = IndexSplit::new(self.num_qubits(), qubits);
        let mut local = vec![ZERO; split.keep_dim];
        for r in 0..split.rest_dim {
            for (k, slot) in local.iter_mut().enumerate() {
                *slot = self.amps[split.full(k, r)];
            }
            let out = u.apply(&local);
            for (k, v) in out.into_iter().enumerate() {
                self.amps[split.full(k, r)] = v;
            }
        }
        Ok(())
    }

    /// Probability that qubit `q` reads 1.
    pub fn prob_one(&self, q: usize) -> f64 {
        let bit = 1usize << qubit_shift(self.num_qubits(), q);
        self.amps.iter().enumerate().filter(|(i, _)| i & bit != 0).map(|(_, a)| a.norm_sqr()).sum()
    }

    /// Projective Z measurement of qubit `q`, choosing the outcome from a
    /// uniform draw `u ∈ [0,1)` by cumulative probability (0 first).
    pub fn measure(&mut self, q: usize, u: f64) -> bool {
        let p0 = 1.0 - self.prob_one(q);
        let outcome = u >= p0;
        self.collapse(q, outcome);
        outcome
    }

    /// Post-selects qubit `q` on `outcome`; returns the branch probability.
    /// A zero-probability branch leaves the state untouched.
    pub fn collapse(&mut self, q: usize, outcome: bool) -> f64 {
        let bit = 1usize << qubit_shift(self.num_qubits(), q);
        let p: f64 = self
            .amps
            .iter()
            .enumerate()
            .filter(|(i, _)| (i & bit != 0) == outcome)
            .map(|(_, a)| a.norm_sqr())
            .sum();
        if p <= 0.0 {
            return 0.0;
        }
        let scale = 1.0 / p.sqrt();
        for (i, a) in self.amps.iter_mut().enumerate() {
            if (i & bit != 0) == outcome {
                *a *= scale;
            } else {
                *a = ZERO;
            }
        }
        p
    }

    /// Branch with qubits fixed to given values: probability and the
    /// normalised post-selected state (if the branch is possible).
    pub fn post_select(&self, fixes: &[(usize, bool)]) -> (f64, Option<StateVector>) {
        let nq = self.num_qubits();
        let mut amps = self.amps.clone();
        for (i, a) in amps.iter_mut().enumerate() {
            let keep = fixes.iter().all(|&(q, b)| ((i >> qubit_shift(nq, q)) & 1 == 1) == b);
            if !keep {
                *a = ZERO;
            }
        }
        let p: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if p <= 1e-300 {
            return (0.0, None);
        }
        let s = 1.0 / p.sqrt();
        amps.iter_mut().for_each(|a| *a *= s);
        (p, Some(StateVector { amps, layout: self.layout.clone() }))
    }

    pub fn to_density(&self) -> Result<DensityMatrix, QcoreError> {
        check_cap(self.num_qubits(), DENSITY_QUBIT_CAP)?;
        Ok(DensityMatrix { mat: ComplexMatrix::outer(&self.amps)?, layout: self.layout.clone() })
    }

    /// Reduced density matrix on `keep`, contracted directly from the
    /// amplitudes (the full density matrix is never formed).
    pub fn reduced<S: AsRef<str>>(&self, keep: &[S]) -> Result<DensityMatrix, QcoreError> {
        let qubits = self.layout.qubits_of(keep)?;
        check_cap(qubits.len(), DENSITY_QUBIT_CAP)?;
        let layout = self.layout.select(keep)?;
        let split = IndexSplit::new(self.num_qubits(), &qubits);
        let d = split.keep_dim;
        let mut mat = ComplexMatrix::zeros(d)?;
        let data = mat.as_mut_slice();
        for r in 0..split.rest_dim {
            for a in 0..d {
                let va = self.amps[split.full(a, r)];
                if va == ZERO {
                    continue;
                }
                for b in 0..d {
                    data[a * d + b] += va * self.amps[split.full(b, r)].conj();
                }
            }
        }
        Ok(DensityMatrix { mat, layout })
    }
}

/// Mixed state with trace one, Hermitian and positive semidefinite.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
    layout: SubsystemLayout,
}

impl DensityMatrix {
    /// Validating constructor.
    pub fn new(mat: ComplexMatrix, layout: SubsystemLayout) -> Result<Self, QcoreError> {
        check_cap(layout.total_qubits(), DENSITY_QUBIT_CAP)?;
        if mat.dim() != layout.dim() {
            return Err(QcoreError::DimMismatch { expected: layout.dim(), found: mat.dim() });
        }
        let tr = mat.trace();
        if (tr.re - 1.0).abs() > DENSITY_TOL || tr.im.abs() > DENSITY_TOL {
            return Err(QcoreError::InvalidState(format!("trace {tr} differs from 1")));
        }
        let defect = mat.hermitian_defect();
        if defect > DENSITY_TOL {
            return Err(QcoreError::NotHermitian(defect));
        }
        let min = eigvalsh(&mat)?[0];
        if min < -DENSITY_TOL {
            return Err(QcoreError::InvalidState(format!("negative eigenvalue {min}")));
        }
        Ok(Self { mat, layout })
    }

    /// Skips validation; callers guarantee the invariants by construction.
    pub(crate) fn from_parts(mat: ComplexMatrix, layout: SubsystemLayout) -> Self {
        debug_assert_eq!(mat.dim(), layout.dim());
        Self { mat, layout }
    }

    pub fn from_pure(psi: &StateVector) -> Result<Self, QcoreError> {
        psi.to_density()
    }

    pub fn maximally_mixed(layout: SubsystemLayout) -> Result<Self, QcoreError> {
        check_cap(layout.total_qubits(), DENSITY_QUBIT_CAP)?;
        let d = layout.dim();
        let mat = ComplexMatrix::identity(d)?.scale(C64::new(1.0 / d as f64, 0.0));
        Ok(Self { mat, layout })
    }

    /// Convex combination `Σ w_i ρ_i`; weights must be non-negative and sum to 1.
    pub fn mixture(weights: &[f64], states: &[DensityMatrix]) -> Result<Self, QcoreError> {
        if weights.len() != states.len() || states.is_empty() {
            return Err(QcoreError::InvalidState("weights and states differ in length".into()));
        }
        if weights.iter().any(|&w| w < 0.0) || (weights.iter().sum::<f64>() - 1.0).abs() > 1e-12 {
            return Err(QcoreError::InvalidState("mixture weights must form a distribution".into()));
        }
        let layout = states[0].layout.clone();
        let mut acc = ComplexMatrix::zeros(layout.dim())?;
        for (w, s) in weights.iter().zip(states) {
            if s.layout.total_qubits() != layout.total_qubits() {
                return Err(QcoreError::LayoutMismatch);
            }
            acc = &acc + &s.mat.scale(C64::new(*w, 0.0));
        }
        Ok(Self { mat: acc, layout })
    }

    /// Uniform mixture of pure states.
    pub fn uniform_pure_mixture(states: &[StateVector]) -> Result<Self, QcoreError> {
        let first = states.first().ok_or_else(|| QcoreError::InvalidState("empty mixture".into()))?;
        let layout = first.layout().clone();
        check_cap(layout.total_qubits(), DENSITY_QUBIT_CAP)?;
        let d = layout.dim();
        let w = 1.0 / states.len() as f64;
        let mut mat = ComplexMatrix::zeros(d)?;
        {
            let data = mat.as_mut_slice();
            for s in states {
                let a = s.amplitudes();
                for i in 0..d {
                    if a[i] == ZERO {
                        continue;
                    }
                    for j in 0..d {
                        data[i * d + j] += a[i] * a[j].conj() * w;
                    }
                }
            }
        }
        Ok(Self { mat, layout })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn layout(&self) -> &SubsystemLayout {
        &self.layout
    }

    pub fn num_qubits(&self) -> usize {
        self.layout.total_qubits()
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    pub fn with_layout(mut self, layout: SubsystemLayout) -> Result<Self, QcoreError> {
        if layout.total_qubits() != self.layout.total_qubits() {
            return Err(QcoreError::LayoutMismatch);
        }
        self.layout = layout;
        Ok(self)
    }

    pub fn tensor(&self, other: &Self) -> Result<Self, QcoreError> {
        let layout = self.layout.concat(&other.layout)?;
        check_cap(layout.total_qubits(), DENSITY_QUBIT_CAP)?;
        Ok(Self { mat: kron(&self.mat, &other.mat), layout })
    }

    /// `U ρ U†` with `u` acting on the listed global qubits.
    pub fn apply_unitary(&self, qubits: &[usize], u: &ComplexMatrix) -> Result<Self, QcoreError> {
        if u.dim() != 1 << qubits.len() {
            return Err(QcoreError::DimMismatch { expected: 1 << qubits.len(), found: u.dim() });
        }
        let full = embed(self.num_qubits(), qubits, u)?;
        Ok(Self { mat: self.mat.conjugate_by(&full), layout: self.layout.clone() })
    }

    pub fn trace(&self) -> f64 {
        self.mat.trace().re
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>, QcoreError> {
        eigvalsh(&self.mat)
    }

    pub fn purity(&self) -> f64 {
        self.mat.matmul(&self.mat).trace().re
    }

    pub fn partial_trace<S: AsRef<str>>(&self, keep: &[S]) -> Result<Self, QcoreError> {
        partial_trace(self, keep)
    }
}

/// Embeds a k-qubit operator on `qubits` into the full register.
pub(crate) fn embed(nq: usize, qubits: &[usize], u: &ComplexMatrix) -> Result<ComplexMatrix, QcoreError> {
    let split = IndexSplit::new(nq, qubits);
    let d = 1usize << nq;
    let mut full = ComplexMatrix::zeros(d)?;
    for r in 0..split.rest_dim {
        for a in 0..split.keep_dim {
            for b in 0..split.keep_dim {
                let v = u[(a, b)];
                if v != ZERO {
                    full[(split.full(a, r), split.full(b, r))] = v;
                }
            }
        }
    }
    Ok(full)
}

/// Reduced state on the `keep` registers.
pub fn partial_trace<S: AsRef<str>>(rho: &DensityMatrix, keep: &[S]) -> Result<DensityMatrix, QcoreError> {
    let qubits = rho.layout.qubits_of(keep)?;
    let layout = rho.layout.select(keep)?;
    let split = IndexSplit::new(rho.num_qubits(), &qubits);
    let d = split.keep_dim;
    let mut mat = ComplexMatrix::zeros(d)?;
    for a in 0..d {
        for b in 0..d {
            let mut acc = ZERO;
            for r in 0..split.rest_dim {
                acc += rho.mat[(split.full(a, r), split.full(b, r))];
            }
            mat[(a, b)] = acc;
        }
    }
    Ok(DensityMatrix { mat, layout })
}

/// Partial transpose on the listed registers.
pub fn partial_transpose<S: AsRef<str>>(
    rho: &DensityMatrix,
    transpose_part: &[S],
) -> Result<ComplexMatrix, QcoreError> {
    let qubits = rho.layout.qubits_of(transpose_part)?;
    let nq = rho.num_qubits();
    let mask: usize = qubits.iter().map(|&q| 1usize << qubit_shift(nq, q)).sum();
    let d = rho.dim();
    let mut out = ComplexMatrix::zeros(d)?;
    for i in 0..d {
        for j in 0..d {
            let i2 = (i & !mask) | (j & mask);
            let j2 = (j & !mask) | (i & mask);
            out[(i2, j2)] = rho.mat[(i, j)];
        }
    }
    Ok(out)
}

fn check_cap(qubits: usize, cap: usize) -> Result<(), QcoreError> {
    if qubits > cap {
        Err(QcoreError::SizeCap { qubits, cap })
    } else {
        Ok(())
    }
}
