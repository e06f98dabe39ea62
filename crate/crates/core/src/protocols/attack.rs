use std::fmt;

use rand::Rng;

use crate::pauli::{apply_pauli, PauliString};
use crate::purity::Tableau;
use crate::qcore::{gates, ComplexMatrix, StateVector};

use super::ProtocolError;

/// Largest Eve ancilla register on the dense backend.
pub const EVE_QUBIT_BUDGET: usize = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Basis {
    Z,
    X,
}

/// What the adversary does to qubits in flight.
#[derive(Clone, Debug, PartialEq)]
pub enum AttackModel {
    None,
    /// The same Pauli on the channel every run.
    FixedPauli(PauliString),
    /// Each channel qubit independently hit with probability `p` by a
    /// uniformly chosen X, Y or Z.
    RandomPauli { p: f64 },
    /// Channel qubits swapped into fresh Eve ancillas; Bob receives `|0⟩`.
    StealReplace { qubits: Vec<usize> },
    /// Every channel qubit measured in `basis` and the outcome state resent.
    MeasureResend { basis: Basis },
    /// `unitary` acts on the channel `targets` followed by `eve_qubits`
    /// fresh Eve ancillas (dense backend only).
    EntanglingProbe { unitary: ComplexMatrix, targets: Vec<usize>, eve_qubits: usize, label: String },
}

impl AttackModel {
    /// CNOT from channel qubit `target` onto a single Eve ancilla.
    pub fn cnot_probe(target: usize) -> Self {
        AttackModel::EntanglingProbe {
            unitary: gates::cnot(),
            targets: vec![target],
            eve_qubits: 1,
            label: format!("probe_cnot:{target}"),
        }
    }

    /// Parses `none`, `fixed_pauli:<pauli>`, `random_pauli:<p>`,
    /// `steal:<q>[,<q>]`, `measure_resend[:z|x]`, `probe_cnot:<q>`. `n` is
    /// the number of channel qubits.
    pub fn parse(spec: &str, n: usize) -> Result<Self, ProtocolError> {
        let (kind, arg) = match spec.split_once(':') {
            Some((k, a)) => (k.trim(), Some(a.trim())),
            None => (spec.trim(), None),
        };
        let bad = |msg: &str| ProtocolError::Config(format!("attack `{spec}`: {msg}"));
        let attack = match (kind, arg) {
            ("none", None) => AttackModel::None,
            ("fixed_pauli", Some(a)) => AttackModel::FixedPauli(PauliString::parse(a, n)?),
            ("random_pauli", Some(a)) => {
                let p: f64 = a.parse().map_err(|_| bad("probability expected"))?;
                AttackModel::RandomPauli { p }
            }
            ("steal", Some(a)) | ("steal_replace", Some(a)) => {
                let qubits = a
                    .split(',')
                    .map(|q| q.trim().parse::<usize>().map_err(|_| bad("qubit list expected")))
                    .collect::<Result<Vec<_>, _>>()?;
                AttackModel::StealReplace { qubits }
            }
            ("measure_resend", None) => AttackModel::MeasureResend { basis: Basis::Z },
            ("measure_resend", Some(b)) => match b.to_ascii_lowercase().as_str() {
                "z" => AttackModel::MeasureResend { basis: Basis::Z },
                "x" => AttackModel::MeasureResend { basis: Basis::X },
                _ => return Err(bad("basis must be z or x")),
            },
            ("probe_cnot", Some(a)) => {
                AttackModel::cnot_probe(a.parse().map_err(|_| bad("qubit index expected"))?)
            }
            _ => return Err(bad("unknown attack")),
        };
        attack.validate(n)?;
        Ok(attack)
    }

    /// Checks the attack fits `n` channel qubits and the Eve budget.
    pub fn validate(&self, n: usize) -> Result<(), ProtocolError> {
        let err = |msg: String| Err(ProtocolError::Config(msg));
        match self {
            AttackModel::FixedPauli(p) if p.num_qubits() != n => {
                err(format!("Pauli acts on {} qubits, channel has {n}", p.num_qubits()))
            }
            AttackModel::RandomPauli { p } if !(0.0..=1.0).contains(p) => {
                err(format!("probability {p} outside [0, 1]"))
            }
            AttackModel::StealReplace { qubits } => {
                if qubits.is_empty() || qubits.len() > EVE_QUBIT_BUDGET {
                    return err(format!("steal needs 1..={EVE_QUBIT_BUDGET} qubits"));
                }
                if qubits.iter().any(|&q| q >= n) {
                    return err(format!("steal target outside the {n}-qubit channel"));
                }
                let mut sorted = qubits.clone();
                sorted.dedup();
                if sorted.len() != qubits.len() {
                    return err("steal targets must be distinct".into());
                }
                Ok(())
            }
            AttackModel::EntanglingProbe { unitary, targets, eve_qubits, .. } => {
                if *eve_qubits > EVE_QUBIT_BUDGET {
                    return err(format!("probe uses {eve_qubits} Eve qubits, budget is {EVE_QUBIT_BUDGET}"));
                }
                if targets.iter().any(|&q| q >= n) {
                    return err(format!("probe target outside the {n}-qubit channel"));
                }
                if unitary.dim() != 1 << (targets.len() + eve_qubits) || !unitary.is_unitary(1e-9) {
                    return err("probe matrix must be unitary on targets plus Eve qubits".into());
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// Eve ancillas the attack needs.
    pub fn eve_qubits(&self) -> usize {
        match self {
            AttackModel::StealReplace { qubits } => qubits.len(),
            AttackModel::EntanglingProbe { eve_qubits, .. } => *eve_qubits,
            _ => 0,
        }
    }

    /// True for attacks that are a (possibly random) Pauli on the channel.
    pub fn is_pauli(&self) -> bool {
        matches!(self, AttackModel::None | AttackModel::FixedPauli(_) | AttackModel::RandomPauli { .. })
    }

    /// True for attacks the stabilizer backend can simulate.
    pub fn is_clifford(&self) -> bool {
        !matches!(self, AttackModel::EntanglingProbe { .. })
    }

    /// Pauli realized in this run, for Pauli attacks. Draw order: per
    /// channel qubit one uniform for the hit, and one letter draw on a hit.
    pub fn sample_pauli(&self, n: usize, rng: &mut impl Rng) -> Option<PauliString> {
        match self {
            AttackModel::None => Some(PauliString::identity(n)),
            AttackModel::FixedPauli(p) => Some(p.clone()),
            AttackModel::RandomPauli { p } => {
                let mut out = PauliString::identity(n);
                for q in 0..n {
                    if rng.gen::<f64>() < *p {
                        let letter = ['X', 'Y', 'Z'][rng.gen_range(0..3)];
                        out = out.mul(&PauliString::single(n, q, letter).expect("q < n")).expect("same width");
                    }
                }
                Some(out)
            }
            _ => None,
        }
    }

    /// Applies the attack to a state vector. `channel[i]` is the global index
    /// of channel qubit `i`, `eve` the global indices of Eve's fresh ancillas.
    pub fn apply_dense(
        &self,
        psi: &mut StateVector,
        channel: &[usize],
        eve: &[usize],
        rng: &mut impl Rng,
    ) -> Result<(), ProtocolError> {
        if let Some(p) = self.sample_pauli(channel.len(), rng) {
            apply_pauli(psi, channel, &p)?;
            return Ok(());
        }
        match self {
            AttackModel::StealReplace { qubits } => {
                for (i, &q) in qubits.iter().enumerate() {
                    psi.swap(channel[q], eve[i]);
                }
            }
            AttackModel::MeasureResend { basis } => {
                for &q in channel {
                    let u = rng.gen::<f64>();
                    if *basis == Basis::X {
                        psi.h(q);
                    }
                    psi.measure(q, u);
                    if *basis == Basis::X {
                        psi.h(q);
                    }
                }
            }
            AttackModel::EntanglingProbe { unitary, targets, eve_qubits, .. } => {
                let mut qubits: Vec<usize> = targets.iter().map(|&t| channel[t]).collect();
                qubits.extend(&eve[..*eve_qubits]);
                psi.apply_unitary(&qubits, unitary)?;
            }
            _ => unreachable!("Pauli attacks handled above"),
        }
        Ok(())
    }

    /// Tableau counterpart of [`AttackModel::apply_dense`], consuming the
    /// same random draws.
    pub fn apply_tableau(
        &self,
        t: &mut Tableau,
        channel: &[usize],
        eve: &[usize],
        rng: &mut impl Rng,
    ) -> Result<(), ProtocolError> {
        if let Some(p) = self.sample_pauli(channel.len(), rng) {
            t.apply_pauli(channel, &p);
            return Ok(());
        }
        match self {
            AttackModel::StealReplace { qubits } => {
                for (i, &q) in qubits.iter().enumerate() {
                    t.swap(channel[q], eve[i]);
                }
            }
            AttackModel::MeasureResend { basis } => {
                for &q in channel {
                    let u = rng.gen::<f64>();
                    if *basis == Basis::X {
                        t.h(q);
                    }
                    t.measure(q, None, u);
                    if *basis == Basis::X {
                        t.h(q);
                    }
                }
            }
            AttackModel::EntanglingProbe { .. } => {
                return Err(ProtocolError::Unsupported("entangling probes need the dense backend".into()))
            }
            _ => unreachable!("Pauli attacks handled above"),
        }
        Ok(())
    }
}

impl fmt::Display for AttackModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AttackModel::None => write!(f, "none"),
            AttackModel::FixedPauli(p) => write!(f, "fixed_pauli:{}", p.label()),
            AttackModel::RandomPauli { p } => write!(f, "random_pauli:{p}"),
            AttackModel::StealReplace { qubits } => {
                let list: Vec<String> = qubits.iter().map(|q| q.to_string()).collect();
                write!(f, "steal:{}", list.join(","))
            }
            AttackModel::MeasureResend { basis: Basis::Z } => write!(f, "measure_resend:z"),
            AttackModel::MeasureResend { basis: Basis::X } => write!(f, "measure_resend:x"),
            AttackModel::EntanglingProbe { label, .. } => f.write_str(label),
        }
    }
}
