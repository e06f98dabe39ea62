use std::fmt::Write as _;

use rand::Rng;

use crate::pauli::PauliString;
use crate::qcore::StateVector;

use super::{PurityError, Tableau};

/// Elementary Clifford gate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Gate {
    H(usize),
    S(usize),
    CX(usize, usize),
}

/// Ordered gate list on `n` qubits; applied first gate first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CliffordCircuit {
    n: usize,
    gates: Vec<Gate>,
}

impl CliffordCircuit {
    pub fn new(n: usize, gates: Vec<Gate>) -> Result<Self, PurityError> {
        for g in &gates {
            let ok = match *g {
                Gate::H(q) | Gate::S(q) => q < n,
                Gate::CX(c, t) => c < n && t < n && c != t,
            };
            if !ok {
                return Err(PurityError::BadGate(format!("{g:?} on {n} qubits")));
            }
        }
        Ok(Self { n, gates })
    }

    pub fn identity(n: usize) -> Self {
        Self { n, gates: Vec::new() }
    }

    /// `len` gates drawn uniformly from {H, S, CX} on uniformly chosen qubits.
    pub fn random(n: usize, len: usize, rng: &mut impl Rng) -> Self {
        let kinds = if n >= 2 { 3 } else { 2 };
        let gates = (0..len)
            .map(|_| match rng.gen_range(0..kinds) {
                0 => Gate::H(rng.gen_range(0..n)),
                1 => Gate::S(rng.gen_range(0..n)),
                _ => {
                    let c = rng.gen_range(0..n);
                    let mut t = rng.gen_range(0..n - 1);
                    if t >= c {
                        t += 1;
                    }
                    Gate::CX(c, t)
                }
            })
            .collect();
        Self { n, gates }
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Exact inverse using only {H, S, CX} (`S† = S³`).
    pub fn inverse(&self) -> Self {
        let mut gates = Vec::with_capacity(self.gates.len());
        for g in self.gates.iter().rev() {
            match *g {
                Gate::S(q) => gates.extend([Gate::S(q); 3]),
                other => gates.push(other),
            }
        }
        Self { n: self.n, gates }
    }

    /// Matrix transpose: every gate in the set is symmetric, so the order
    /// simply reverses.
    pub fn transpose(&self) -> Self {
        Self { n: self.n, gates: self.gates.iter().rev().copied().collect() }
    }

    /// Runs the circuit on qubits `offset..offset+n` of `psi`.
    pub fn apply(&self, psi: &mut StateVector, offset: usize) {
        for g in &self.gates {
            match *g {
                Gate::H(q) => psi.h(offset + q),
                Gate::S(q) => psi.s(offset + q),
                Gate::CX(c, t) => psi.cnot(offset + c, offset + t),
            }
        }
    }

    /// Runs the inverse circuit on qubits `offset..offset+n` of `psi`.
    pub fn apply_inverse(&self, psi: &mut StateVector, offset: usize) {
        for g in self.gates.iter().rev() {
            match *g {
                Gate::H(q) => psi.h(offset + q),
                Gate::S(q) => psi.sdg(offset + q),
                Gate::CX(c, t) => psi.cnot(offset + c, offset + t),
            }
        }
    }

    pub fn apply_tableau(&self, t: &mut Tableau, offset: usize) {
        for g in &self.gates {
            match *g {
                Gate::H(q) => t.h(offset + q),
                Gate::S(q) => t.s(offset + q),
                Gate::CX(c, tg) => t.cnot(offset + c, offset + tg),
            }
        }
    }

    pub fn apply_inverse_tableau(&self, t: &mut Tableau, offset: usize) {
        for g in self.gates.iter().rev() {
            match *g {
                Gate::H(q) => t.h(offset + q),
                Gate::S(q) => t.sdg(offset + q),
                Gate::CX(c, tg) => t.cnot(offset + c, offset + tg),
            }
        }
    }

    /// `C P C†`.
    pub fn conjugate(&self, p: &PauliString) -> Result<PauliString, PurityError> {
        self.check_width(p)?;
        let mut out = p.clone();
        for g in &self.gates {
            forward(&mut out, *g);
        }
        Ok(out)
    }

    /// `C† P C`.
    pub fn heisenberg(&self, p: &PauliString) -> Result<PauliString, PurityError> {
        self.check_width(p)?;
        let mut out = p.clone();
        for g in self.gates.iter().rev() {
            backward(&mut out, *g);
        }
        Ok(out)
    }

    fn check_width(&self, p: &PauliString) -> Result<(), PurityError> {
        if p.num_qubits() != self.n {
            return Err(PurityError::SizeMismatch { expected: self.n, found: p.num_qubits() });
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("CLIFF n={}\n", self.n);
        for g in &self.gates {
            let _ = match *g {
                Gate::H(q) => writeln!(out, "H {q}"),
                Gate::S(q) => writeln!(out, "S {q}"),
                Gate::CX(c, t) => writeln!(out, "CX {c} {t}"),
            };
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self, PurityError> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| PurityError::Parse("empty circuit text".into()))?;
        let n: usize = header
            .strip_prefix("CLIFF n=")
            .and_then(|v| v.trim().parse().ok())
            .ok_or_else(|| PurityError::Parse(format!("bad header `{header}`")))?;
        let mut gates = Vec::new();
        for line in lines {
            let parts: Vec<&str> = line.split_whitespace().collect();
            let num = |i: usize| -> Result<usize, PurityError> {
                parts
                    .get(i)
                    .and_then(|v| v.parse().ok())
                    .ok_or_else(|| PurityError::Parse(format!("bad gate line `{line}`")))
            };
            let g = match (parts[0], parts.len()) {
                ("H", 2) => Gate::H(num(1)?),
                ("S", 2) => Gate::S(num(1)?),
                ("CX", 3) => Gate::CX(num(1)?, num(2)?),
                _ => return Err(PurityError::Parse(format!("bad gate line `{line}`"))),
            };
            gates.push(g);
        }
        Self::new(n, gates)
    }
}

/// `P ← G P G†` in the `i^k X^x Z^z` convention.
fn forward(p: &mut PauliString, g: Gate) {
    match g {
        Gate::H(q) => {
            let (x, z) = (p.x(q), p.z(q));
            p.set_x(q, z);
            p.set_z(q, x);
            if x && z {
                p.add_phase(2);
            }
        }
        Gate::S(q) => {
            let x = p.x(q);
            if x {
                p.add_phase(1);
                p.set_z(q, !p.z(q));
            }
        }
        Gate::CX(c, t) => cx_rule(p, c, t),
    }
}

/// `P ← G† P G`.
fn backward(p: &mut PauliString, g: Gate) {
    match g {
        Gate::S(q) => {
            if p.x(q) {
                p.add_phase(3);
                p.set_z(q, !p.z(q));
            }
        }
        // H and CX are self-inverse
        other => forward(p, other),
    }
}

fn cx_rule(p: &mut PauliString, c: usize, t: usize) {
    // X_c → X_c X_t, Z_t → Z_c Z_t; all X factors stay left of all Z factors,
    // so no phase arises.
    if p.x(c) {
        p.set_x(t, !p.x(t));
    }
    if p.z(t) {
        p.set_z(c, !p.z(c));
    }
}
