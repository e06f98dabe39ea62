use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::KeyringError;
use crate::protocols::{Protocol, RunRecord};

/// One run's resource changes: qubits sent, private message delivered, and
/// net key gained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LedgerEntry {
    pub protocol: Protocol,
    pub seed: u64,
    pub delta_q: i64,
    pub delta_m: i64,
    pub delta_k: i64,
}

impl LedgerEntry {
    pub fn satisfies_law(&self) -> bool {
        self.delta_k <= self.delta_q - self.delta_m
    }
}

/// Append-only list of ledger entries.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Ledger {
    entries: Vec<LedgerEntry>,
}

impl Ledger {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, entry: LedgerEntry) {
        self.entries.push(entry);
    }

    pub fn entries(&self) -> &[LedgerEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Column sums `(δQ, δM, δK)`.
    pub fn totals(&self) -> (i64, i64, i64) {
        self.entries.iter().fold((0, 0, 0), |(q, m, k), e| (q + e.delta_q, m + e.delta_m, k + e.delta_k))
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), KeyringError> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
        if self.entries.is_empty() {
            w.write_record(["protocol", "seed", "delta_q", "delta_m", "delta_k"])
                .map_err(|e| KeyringError::Csv(e.to_string()))?;
        }
        for e in &self.entries {
            w.serialize(e).map_err(|e| KeyringError::Csv(e.to_string()))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory cannot fail");
        String::from_utf8(buf).expect("CSV output is UTF-8")
    }

    pub fn read_csv<R: Read>(input: R) -> Result<Self, KeyringError> {
        let mut r = csv::ReaderBuilder::new().from_reader(input);
        let headers = r.headers().map_err(|e| KeyringError::Csv(e.to_string()))?.clone();
        if headers.iter().collect::<Vec<_>>() != ["protocol", "seed", "delta_q", "delta_m", "delta_k"] {
            return Err(KeyringError::Csv(format!("unexpected header {:?}", headers)));
        }
        let mut ledger = Ledger::new();
        for (i, row) in r.deserialize().enumerate() {
            let entry: LedgerEntry = row.map_err(|e| KeyringError::Csv(format!("row {i}: {e}")))?;
            ledger.push(entry);
        }
        Ok(ledger)
    }
}

/// Appends the deltas of a finished run.
pub fn ledger_record(ledger: &mut Ledger, run: &RunRecord) {
    let (delta_q, delta_m, delta_k) = run.deltas();
    ledger.push(LedgerEntry { protocol: run.protocol, seed: run.seed, delta_q, delta_m, delta_k });
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationScope {
    Entry,
    /// The running totals up to and including `index` violate the law.
    Prefix,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub index: usize,
    pub scope: ViolationScope,
    pub protocol: Protocol,
    pub seed: u64,
    pub delta_q: i64,
    pub delta_m: i64,
    pub delta_k: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    pub ok: bool,
    pub entries: usize,
    pub violations: Vec<Violation>,
}

/// Checks `δK ≤ δQ − δM` for every entry and for every prefix of running
/// totals. Reports all violating entries and the first violating prefix.
pub fn audit_law(ledger: &Ledger) -> AuditReport {
    let mut violations = Vec::new();
    let (mut q, mut m, mut k) = (0i64, 0i64, 0i64);
    let mut prefix_reported = false;
    for (index, e) in ledger.entries.iter().enumerate() {
        if !e.satisfies_law() {
            violations.push(Violation {
                index,
                scope: ViolationScope::Entry,
                protocol: e.protocol,
                seed: e.seed,
                delta_q: e.delta_q,
                delta_m: e.delta_m,
                delta_k: e.delta_k,
            });
        }
        q += e.delta_q;
        m += e.delta_m;
        k += e.delta_k;
        if !prefix_reported && k > q - m {
            prefix_reported = true;
            violations.push(Violation {
                index,
                scope: ViolationScope::Prefix,
                protocol: e.protocol,
                seed: e.seed,
                delta_q: q,
                delta_m: m,
                delta_k: k,
            });
        }
    }
    AuditReport { ok: violations.is_empty(), entries: ledger.len(), violations }
}
