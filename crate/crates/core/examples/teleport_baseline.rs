//! Teleportation over shared pairs: no key used, every run sits exactly on
//! the resource law.

use qotp::protocols::{input_rng, run_teleport_baseline, AttackModel, InputState, SimulationParams};
use qotp::qcore::random::random_state;
use qotp::qcore::SubsystemLayout;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (m, s) = (1, 2);
    let input = InputState::Vector(random_state(SubsystemLayout::single("payload", m), &mut input_rng(9))?);
    for seed in 0..6 {
        let rec = run_teleport_baseline(&SimulationParams::new(m, s, seed), &input, &AttackModel::None)?;
        let (dq, dm, dk) = rec.deltas();
        let outcome = rec.analysis.as_ref().map(|a| a["bell_outcome"].clone()).unwrap_or_default();
        println!("seed {seed}: bell outcome {outcome} fidelity {:.6}  δQ={dq} δM={dm} δK={dk}", rec.fidelity_out);
    }
    Ok(())
}
