//! Key cost of the pre-shared and the interactive variants over the same
//! trials.

use qotp::cli::{run_trials, summarize, TrialConfig};
use qotp::protocols::{AttackModel, Backend, Protocol};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (m, s) = (2, 4);
    for protocol in [Protocol::Sqas, Protocol::Interactive] {
        let cfg = TrialConfig { protocol, m, s, attack: AttackModel::RandomPauli { p: 0.2 }, backend: Backend::Stabilizer, seed: 8 };
        let recs = run_trials(&cfg, 2000, 0, None)?;
        let sum = summarize(&cfg, &recs);
        let back: u64 = recs.iter().map(|r| r.cbits_back).sum();
        println!(
            "{:<12} accept {:.3}  δQ {:>6}  δM {:>5}  δK {:>7}  back-channel bits {back}",
            protocol.to_string(),
            sum.accept_rate.estimate, sum.ledger.delta_q, sum.ledger.delta_m, sum.ledger.delta_k
        );
    }
    Ok(())
}
