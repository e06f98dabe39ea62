use std::io::Write;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;

use rayon::prelude::*;
use serde::Serialize;

use super::CliError;
use crate::keyring::{audit_law, ledger_record, AuditReport, Ledger};
use crate::pauli::{random_bits, KeyString};
use crate::protocols::{
    input_rng, key_rng, run_interactive, run_modified_qas, run_protect_entanglement, run_secret_sharing, run_sqas,
    run_teleport_baseline, AttackModel, Backend, InputState, Protocol, ProtocolError, RunRecord, SimulationParams,
};
use crate::qcore::random::random_state;
use crate::qcore::{SubsystemLayout, STATEVECTOR_QUBIT_CAP};
use crate::seeds::trial_seed;
use crate::stats::{wilson, Interval, Z95};

/// Fidelity below which an accepted run counts as a successful forgery.
pub const DAMAGE_THRESHOLD: f64 = 0.99;

/// One parameter point of an experiment.
#[derive(Clone, Debug)]
pub struct TrialConfig {
    pub protocol: Protocol,
    pub m: usize,
    pub s: usize,
    pub attack: AttackModel,
    pub backend: Backend,
    pub seed: u64,
}

impl TrialConfig {
    /// Rejects points whose dense simulation would exceed the statevector
    /// cap before any trial allocates.
    pub fn check_size(&self) -> Result<(), CliError> {
        if self.backend != Backend::Dense {
            return Ok(());
        }
        let (m, s, e) = (self.m, self.s, self.attack.eve_qubits());
        let qubits = match self.protocol {
            Protocol::Sqas | Protocol::Interactive | Protocol::SecretSharing => m + s + e,
            Protocol::ModifiedQas => 3 * m + s + e,
            Protocol::Teleport => 3 * m + 2 * s + e,
            Protocol::ProtectEntanglement => 2 * m + e,
        };
        if qubits > STATEVECTOR_QUBIT_CAP {
            return Err(CliError::Protocol(ProtocolError::SizeCap {
                what: "dense statevector",
                qubits,
                cap: STATEVECTOR_QUBIT_CAP,
            }));
        }
        Ok(())
    }

    /// Runs trial `index`. Its seed is derived from the point seed and the
    /// index only; keys and inputs come from independent streams of it.
    pub fn run_trial(&self, index: u64) -> Result<RunRecord, ProtocolError> {
        let (m, s) = (self.m, self.s);
        let seed = trial_seed(self.seed, index);
        let params = SimulationParams::new(m, s, seed).with_backend(self.backend);
        let mut keys = key_rng(seed);
        let mut inputs = input_rng(seed);
        let mut input = || -> Result<InputState, ProtocolError> {
            Ok(match self.backend {
                Backend::Stabilizer => InputState::random_clifford(m, &mut inputs),
                Backend::Dense => {
                    InputState::Vector(random_state(SubsystemLayout::single("payload", m), &mut inputs)?)
                }
            })
        };
        match self.protocol {
            Protocol::Sqas => {
                let key = KeyString::random(m, s, &mut keys);
                run_sqas(&params, &input()?, &key, &self.attack)
            }
            Protocol::Interactive => run_interactive(&params, &input()?, &self.attack),
            Protocol::ModifiedQas => {
                let yz = random_bits(2 * s, &mut keys);
                run_modified_qas(&params, &input()?, &yz, &self.attack)
            }
            Protocol::Teleport => run_teleport_baseline(&params, &input()?, &self.attack),
            Protocol::SecretSharing => {
                let key_ab = random_bits(2 * m, &mut keys);
                let key_ac = random_bits(2 * s, &mut keys);
                Ok(run_secret_sharing(&params, &input()?, &key_ab, &key_ac, &self.attack)?.record)
            }
            Protocol::ProtectEntanglement => {
                let key = random_bits(m, &mut keys);
                run_protect_entanglement(&params, &key, &self.attack)
            }
        }
    }
}

/// Runs trials `0..trials` on `jobs` threads (0 means all cores). Records
/// come back in trial order whatever the schedule. Progress lines go to
/// `progress` when given.
pub fn run_trials(
    cfg: &TrialConfig,
    trials: u64,
    jobs: usize,
    progress: Option<&Mutex<Box<dyn Write + Send>>>,
) -> Result<Vec<RunRecord>, CliError> {
    cfg.check_size()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::Config(format!("cannot start worker pool: {e}")))?;
    let done = AtomicU64::new(0);
    let step = (trials / 10).max(1);
    let results: Vec<Result<RunRecord, ProtocolError>> = pool.install(|| {
        (0..trials)
            .into_par_iter()
            .map(|i| {
                let r = cfg.run_trial(i);
                let n = done.fetch_add(1, Ordering::Relaxed) + 1;
                if let Some(out) = progress {
                    if n.is_multiple_of(step) || n == trials {
                        if let Ok(mut w) = out.lock() {
                            let _ = writeln!(w, "[{} m={} s={}] {n}/{trials} trials", cfg.protocol, cfg.m, cfg.s);
                        }
                    }
                }
                r
            })
            .collect()
    });
    results.into_iter().map(|r| r.map_err(CliError::from)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LedgerTotals {
    pub delta_q: i64,
    pub delta_m: i64,
    pub delta_k: i64,
}

/// Aggregate of one parameter point.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PointSummary {
    pub protocol: Protocol,
    pub m: usize,
    pub s: usize,
    pub attack: String,
    pub backend: Backend,
    pub seed: u64,
    pub trials: u64,
    pub accepted: u64,
    /// Wilson 95% interval on the accept rate.
    pub accept_rate: Interval,
    /// Accepted runs with fidelity below [`DAMAGE_THRESHOLD`], over all trials.
    pub damaged_accept_rate: f64,
    pub mean_fidelity: f64,
    pub mean_fidelity_accepted: Option<f64>,
    pub ledger: LedgerTotals,
    pub audit: AuditReport,
}

pub fn ledger_of(records: &[RunRecord]) -> Ledger {
    let mut ledger = Ledger::new();
    for r in records {
        ledger_record(&mut ledger, r);
    }
    ledger
}

pub fn summarize(cfg: &TrialConfig, records: &[RunRecord]) -> PointSummary {
    let trials = records.len() as u64;
    let accepted = records.iter().filter(|r| r.accepted).count() as u64;
    let damaged = records.iter().filter(|r| r.accepted && r.fidelity_out < DAMAGE_THRESHOLD).count();
    let mean = |it: &mut dyn Iterator<Item = f64>| {
        let (sum, n) = it.fold((0.0, 0usize), |(s, n), f| (s + f, n + 1));
        (n > 0).then(|| sum / n as f64)
    };
    let ledger = ledger_of(records);
    let (delta_q, delta_m, delta_k) = ledger.totals();
    PointSummary {
        protocol: cfg.protocol,
        m: cfg.m,
        s: cfg.s,
        attack: cfg.attack.to_string(),
        backend: cfg.backend,
        seed: cfg.seed,
        trials,
        accepted,
        accept_rate: wilson(accepted, trials, Z95),
        damaged_accept_rate: damaged as f64 / trials.max(1) as f64,
        mean_fidelity: mean(&mut records.iter().map(|r| r.fidelity_out)).unwrap_or(0.0),
        mean_fidelity_accepted: mean(&mut records.iter().filter(|r| r.accepted).map(|r| r.fidelity_out)),
        ledger: LedgerTotals { delta_q, delta_m, delta_k },
        audit: audit_law(&ledger),
    }
}
