//! Miss rate of a fixed bit flip as the security parameter grows.

use qotp::cli::{run_trials, summarize, TrialConfig};
use qotp::pauli::PauliString;
use qotp::protocols::{AttackModel, Backend, Protocol};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let m = 2;
    println!(" s  miss rate  95% interval       2^-s");
    for s in 2..=8 {
        let attack = AttackModel::FixedPauli(PauliString::single(m + s, 0, 'X')?);
        let cfg = TrialConfig { protocol: Protocol::Sqas, m, s, attack, backend: Backend::Stabilizer, seed: 12 };
        let sum = summarize(&cfg, &run_trials(&cfg, 5000, 0, None)?);
        let ci = sum.accept_rate;
        println!("{s:>2}  {:.4}     [{:.4}, {:.4}]  {:.4}", ci.estimate, ci.lo, ci.hi, 2f64.powi(-(s as i32)));
    }
    Ok(())
}
