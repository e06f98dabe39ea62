use std::fmt;

use crate::qcore::{gates, kron, ComplexMatrix, C64};

use super::PauliError;

const WORD: usize = 64;

fn words_for(n: usize) -> usize {
    n.div_ceil(WORD).max(1)
}

/// Fourth root of unity `i^k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Phase {
    PlusOne,
    PlusI,
    MinusOne,
    MinusI,
}

impl Phase {
    pub fn from_exponent(k: u8) -> Self {
        match k & 3 {
            0 => Phase::PlusOne,
            1 => Phase::PlusI,
            2 => Phase::MinusOne,
            _ => Phase::MinusI,
        }
    }

    pub fn exponent(self) -> u8 {
        match self {
            Phase::PlusOne => 0,
            Phase::PlusI => 1,
            Phase::MinusOne => 2,
            Phase::MinusI => 3,
        }
    }

    pub fn value(self) -> C64 {
        match self {
            Phase::PlusOne => C64::new(1.0, 0.0),
            Phase::PlusI => C64::new(0.0, 1.0),
            Phase::MinusOne => C64::new(-1.0, 0.0),
            Phase::MinusI => C64::new(0.0, -1.0),
        }
    }
}

/// `i^k · ⊗_q X^{x_q} Z^{z_q}` on `n` qubits, with bit-packed masks.
///
/// Every factor is written X-part first, so `Y = i·XZ` is stored as
/// `x = z = 1` with phase exponent 1.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    n: usize,
    xs: Vec<u64>,
    zs: Vec<u64>,
    k: u8,
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        let w = words_for(n);
        Self { n, xs: vec![0; w], zs: vec![0; w], k: 0 }
    }

    pub fn from_bits(xs: &[bool], zs: &[bool], phase: Phase) -> Result<Self, PauliError> {
        if xs.len() != zs.len() {
            return Err(PauliError::LengthMismatch { expected: xs.len(), found: zs.len() });
        }
        let mut p = Self::identity(xs.len());
        for (q, (&x, &z)) in xs.iter().zip(zs).enumerate() {
            p.set_x(q, x);
            p.set_z(q, z);
        }
        p.k = phase.exponent();
        Ok(p)
    }

    /// Single-qubit `X`, `Y` or `Z` on qubit `q`.
    pub fn single(n: usize, q: usize, letter: char) -> Result<Self, PauliError> {
        if q >= n {
            return Err(PauliError::QubitOutOfRange { qubit: q, n });
        }
        let mut p = Self::identity(n);
        p.set_letter(q, letter)?;
        Ok(p)
    }

    /// Parses either a dense word (`"XIZY"`, optional sign prefix `+ - i -i`)
    /// or a sparse list such as `"X0"`, `"X0 Z3"`, `"Y1,Z2"` on `n` qubits.
    pub fn parse(text: &str, n: usize) -> Result<Self, PauliError> {
        let t = text.trim();
        let (k, body) = if let Some(rest) = t.strip_prefix("-i") {
            (3, rest)
        } else if let Some(rest) = t.strip_prefix("+i") {
            (1, rest)
        } else if let Some(rest) = t.strip_prefix('i') {
            (1, rest)
        } else if let Some(rest) = t.strip_prefix('-') {
            (2, rest)
        } else if let Some(rest) = t.strip_prefix('+') {
            (0, rest)
        } else {
            (0, t)
        };
        let bad = || PauliError::Parse(text.to_string());
        let mut p = Self::identity(n);
        if body.chars().any(|c| c.is_ascii_digit()) {
            for tok in body.split(|c: char| c == ',' || c.is_whitespace()).filter(|s| !s.is_empty()) {
                let mut chars = tok.chars();
                let letter = chars.next().ok_or_else(bad)?;
                let q: usize = chars.as_str().parse().map_err(|_| bad())?;
                if q >= n {
                    return Err(PauliError::QubitOutOfRange { qubit: q, n });
                }
                let single = Self::single(n, q, letter)?;
                p = p.mul(&single)?;
            }
        } else {
            let letters: Vec<char> = body.chars().filter(|c| !c.is_whitespace()).collect();
            if letters.len() != n {
                return Err(PauliError::LengthMismatch { expected: n, found: letters.len() });
            }
            for (q, &c) in letters.iter().enumerate() {
                p.set_letter(q, c)?;
            }
        }
        p.k = (p.k + k) & 3;
        Ok(p)
    }

    fn set_letter(&mut self, q: usize, letter: char) -> Result<(), PauliError> {
        let (x, z, dk) = match letter.to_ascii_uppercase() {
            'I' => (false, false, 0),
            'X' => (true, false, 0),
            'Z' => (false, true, 0),
            'Y' => (true, true, 1),
            other => return Err(PauliError::Parse(other.to_string())),
        };
        self.set_x(q, x);
        self.set_z(q, z);
        self.k = (self.k + dk) & 3;
        Ok(())
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn phase(&self) -> Phase {
        Phase::from_exponent(self.k)
    }

    pub fn phase_exponent(&self) -> u8 {
        self.k
    }

    pub fn with_phase(mut self, phase: Phase) -> Self {
        self.k = phase.exponent();
        self
    }

    pub(crate) fn add_phase(&mut self, dk: u8) {
        self.k = (self.k + dk) & 3;
    }

    #[inline]
    pub fn x(&self, q: usize) -> bool {
        (self.xs[q / WORD] >> (q % WORD)) & 1 == 1
    }

    #[inline]
    pub fn z(&self, q: usize) -> bool {
        (self.zs[q / WORD] >> (q % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set_x(&mut self, q: usize, v: bool) {
        let m = 1u64 << (q % WORD);
        if v {
            self.xs[q / WORD] |= m;
        } else {
            self.xs[q / WORD] &= !m;
        }
    }

    #[inline]
    pub fn set_z(&mut self, q: usize, v: bool) {
        let m = 1u64 << (q % WORD);
        if v {
            self.zs[q / WORD] |= m;
        } else {
            self.zs[q / WORD] &= !m;
        }
    }

    pub fn x_bits(&self) -> Vec<bool> {
        (0..self.n).map(|q| self.x(q)).collect()
    }

    pub fn z_bits(&self) -> Vec<bool> {
        (0..self.n).map(|q| self.z(q)).collect()
    }

    /// Number of non-identity factors.
    pub fn weight(&self) -> usize {
        self.xs.iter().zip(&self.zs).map(|(x, z)| (x | z).count_ones() as usize).sum()
    }

    /// True when the operator is a multiple of the identity.
    pub fn is_scalar(&self) -> bool {
        self.weight() == 0
    }

    /// Number of qubits carrying both X and Z (the `Y` factors).
    pub(crate) fn xz_overlap(&self) -> u32 {
        self.xs.iter().zip(&self.zs).map(|(x, z)| (x & z).count_ones()).sum()
    }

    /// `self · other`.
    pub fn mul(&self, other: &Self) -> Result<Self, PauliError> {
        self.check_len(other)?;
        // Z^{z1} X^{x2} = (-1)^{z1·x2} X^{x2} Z^{z1}
        let swaps: u32 = self.zs.iter().zip(&other.xs).map(|(z, x)| (z & x).count_ones()).sum();
        let k = (self.k as u32 + other.k as u32 + 2 * swaps) & 3;
        Ok(Self {
            n: self.n,
            xs: self.xs.iter().zip(&other.xs).map(|(a, b)| a ^ b).collect(),
            zs: self.zs.iter().zip(&other.zs).map(|(a, b)| a ^ b).collect(),
            k: k as u8,
        })
    }

    /// Symplectic commutation test.
    pub fn commutes_with(&self, other: &Self) -> Result<bool, PauliError> {
        self.check_len(other)?;
        let s: u32 = (0..self.xs.len())
            .map(|w| ((self.xs[w] & other.zs[w]) ^ (self.zs[w] & other.xs[w])).count_ones())
            .sum();
        Ok(s.is_multiple_of(2))
    }

    pub fn adjoint(&self) -> Self {
        // (i^k X^x Z^z)† = i^{-k} Z^z X^x = i^{-k} (-1)^{x·z} X^x Z^z
        let k = (4 - self.k as u32 + 2 * self.xz_overlap()) & 3;
        Self { k: k as u8, ..self.clone() }
    }

    /// Factors on qubits `start..start+len`, phase reset to +1.
    pub fn slice(&self, start: usize, len: usize) -> Self {
        let mut p = Self::identity(len);
        for q in 0..len {
            p.set_x(q, self.x(start + q));
            p.set_z(q, self.z(start + q));
        }
        p
    }

    /// Factors placed at qubits `start..start+self.n` of an `n`-qubit string.
    pub fn embed(&self, n: usize, start: usize) -> Result<Self, PauliError> {
        if start + self.n > n {
            return Err(PauliError::QubitOutOfRange { qubit: start + self.n - 1, n });
        }
        let mut p = Self::identity(n);
        for q in 0..self.n {
            p.set_x(start + q, self.x(q));
            p.set_z(start + q, self.z(q));
        }
        p.k = self.k;
        Ok(p)
    }

    /// Dense `2^n × 2^n` matrix, qubit 0 most significant.
    pub fn to_matrix(&self) -> Result<ComplexMatrix, PauliError> {
        let (x, z) = (gates::pauli_x(), gates::pauli_z());
        let id = gates::id2();
        let mut acc = ComplexMatrix::identity(1)?;
        for q in 0..self.n {
            let factor = match (self.x(q), self.z(q)) {
                (false, false) => id.clone(),
                (true, false) => x.clone(),
                (false, true) => z.clone(),
                (true, true) => x.matmul(&z),
            };
            acc = kron(&acc, &factor);
        }
        Ok(acc.scale(self.phase().value()))
    }

    /// Letter form (`Y` for `x = z = 1`), with the sign that makes the
    /// product of letters equal the operator.
    pub fn label(&self) -> String {
        let k = (self.k as u32 + 4 - (self.xz_overlap() & 3)) & 3;
        let sign = ["+", "+i", "-", "-i"][k as usize];
        let body: String = (0..self.n)
            .map(|q| match (self.x(q), self.z(q)) {
                (false, false) => 'I',
                (true, false) => 'X',
                (false, true) => 'Z',
                (true, true) => 'Y',
            })
            .collect();
        format!("{sign}{body}")
    }

    fn check_len(&self, other: &Self) -> Result<(), PauliError> {
        if self.n != other.n {
            return Err(PauliError::LengthMismatch { expected: self.n, found: other.n });
        }
        Ok(())
    }

    /// Global X and Z masks in a basis index over `nq` qubits, where Pauli
    /// qubit `i` sits at global qubit `qubits[i]`.
    pub(crate) fn index_masks(&self, nq: usize, qubits: &[usize]) -> (usize, usize) {
        let mut xm = 0usize;
        let mut zm = 0usize;
        for (i, &q) in qubits.iter().enumerate() {
            let bit = 1usize << (nq - 1 - q);
            if self.x(i) {
                xm |= bit;
            }
            if self.z(i) {
                zm |= bit;
            }
        }
        (xm, zm)
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliString({})", self.label())
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}
