//! Ledger over several protocols, audited against δK ≤ δQ − δM, then a
//! forged entry that breaks it.

use qotp::cli::{ledger_of, run_trials, TrialConfig};
use qotp::keyring::{audit_law, LedgerEntry};
use qotp::protocols::{AttackModel, Backend, Protocol};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut records = Vec::new();
    for (protocol, m, s, backend) in [
        (Protocol::Sqas, 2, 3, Backend::Stabilizer),
        (Protocol::Interactive, 2, 3, Backend::Stabilizer),
        (Protocol::Teleport, 1, 2, Backend::Dense),
        (Protocol::SecretSharing, 1, 2, Backend::Dense),
        (Protocol::ModifiedQas, 1, 2, Backend::Dense),
    ] {
        let cfg = TrialConfig { protocol, m, s, attack: AttackModel::None, backend, seed: 13 };
        records.extend(run_trials(&cfg, 200, 0, None)?);
    }
    let mut ledger = ledger_of(&records);
    let (q, m, k) = ledger.totals();
    println!("{} runs: δQ={q} δM={m} δK={k}, ok={}", ledger.len(), audit_law(&ledger).ok);

    ledger.push(LedgerEntry { protocol: Protocol::Sqas, seed: 0, delta_q: 6, delta_m: 2, delta_k: 8 });
    let report = audit_law(&ledger);
    println!("after forged entry: ok={} violations={:?}", report.ok, report.violations.iter().map(|v| (v.index, v.scope)).collect::<Vec<_>>());
    print!("{}", ledger.to_csv_string().lines().take(3).collect::<Vec<_>>().join("\n"));
    println!();
    Ok(())
}
