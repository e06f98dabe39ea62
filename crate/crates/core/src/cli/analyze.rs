use clap::{Args, Subcommand};
use serde_json::{json, Value};

use super::CliError;
use crate::analysis::{
    entropy_separability_check, holevo, leftover_hash_bound, leftover_instance, lemma1_check, mutual_info_measurement,
    ppt_min_eigenvalue, prefix_side_info, rel_entropy_ub, Ensemble, Povm, DEFAULT_ITERS, DEFAULT_RESTARTS,
};
use crate::pauli::{bitflip_average, qotp_key_average, random_bits, singlets};
use crate::protocols::{analyze_modified_qas, input_rng, key_rng, AttackModel, SimulationParams};
use crate::purity::CodeFamily;
use crate::qcore::random::{haar_unitary, random_state};
use crate::qcore::{vn_entropy, SubsystemLayout};

#[derive(Debug, Subcommand)]
pub enum AnalyzeCommand {
    /// Entanglement left after padding Alice's halves of `pairs` singlets.
    Protect(ProtectArgs),
    /// Exact leftover-hash distance against the bound for a small key.
    Leftover(LeftoverArgs),
    /// Largest transpose-trick residual over random unitaries.
    Transpose(TransposeArgs),
    /// Information a measurement extracts from padded states.
    PadLeakage(PadLeakageArgs),
    /// Exact accept/reject branches of the coherent-key scheme.
    Modified(ModifiedArgs),
}

#[derive(Debug, Args)]
pub struct ProtectArgs {
    #[arg(long, default_value_t = 1)]
    pub pairs: usize,
    /// Probability that each pad bit flips Alice's qubit.
    #[arg(long, default_value_t = 0.5)]
    pub flip: f64,
    #[arg(long, env = "QOTP_SEED", default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct LeftoverArgs {
    /// Key length.
    #[arg(long)]
    pub j: usize,
    /// Key bits known to Eve.
    #[arg(long)]
    pub e: usize,
    /// Output length.
    #[arg(long)]
    pub t: usize,
}

#[derive(Debug, Args)]
pub struct TransposeArgs {
    #[arg(long, default_value_t = 1)]
    pub m: usize,
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
    #[arg(long, env = "QOTP_SEED", default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct PadLeakageArgs {
    #[arg(long, default_value_t = 1)]
    pub m: usize,
    /// Number of states in the ensemble.
    #[arg(long, default_value_t = 4)]
    pub states: usize,
    /// Random projective measurements tried.
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
    #[arg(long, env = "QOTP_SEED", default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct ModifiedArgs {
    #[arg(long, default_value_t = 1)]
    pub m: usize,
    #[arg(long, default_value_t = 1)]
    pub s: usize,
    #[arg(long, default_value = "probe_cnot:0")]
    pub attack: String,
    #[arg(long, env = "QOTP_SEED", default_value_t = 0)]
    pub seed: u64,
}

pub fn analyze(cmd: &AnalyzeCommand) -> Result<Value, CliError> {
    match cmd {
        AnalyzeCommand::Protect(a) => protect(a),
        AnalyzeCommand::Leftover(a) => leftover(a),
        AnalyzeCommand::Transpose(a) => transpose(a),
        AnalyzeCommand::PadLeakage(a) => pad_leakage(a),
        AnalyzeCommand::Modified(a) => modified(a),
    }
}

fn protect(a: &ProtectArgs) -> Result<Value, CliError> {
    if a.pairs == 0 || a.pairs > 3 {
        return Err(CliError::Config("protect analysis supports 1..=3 pairs".into()));
    }
    if !(0.0..=1.0).contains(&a.flip) {
        return Err(CliError::Config(format!("flip probability {} outside [0, 1]", a.flip)));
    }
    let psi = singlets(a.pairs)?.to_density()?;
    let padded = bitflip_average(&psi, &vec![a.flip; a.pairs])?;
    let mut out = json!({
        "pairs": a.pairs,
        "flip": a.flip,
        "entropy_a": vn_entropy(&psi.partial_trace(&["A"])?)?,
        "ppt_min_eigenvalue": ppt_min_eigenvalue(&padded, &["A"])?,
        "entropy_check": entropy_separability_check(&padded, &["A"])?,
    });
    if a.pairs == 1 {
        out["rel_entropy_ub"] = json!(rel_entropy_ub(&padded, DEFAULT_RESTARTS, DEFAULT_ITERS, a.seed)?);
    }
    Ok(out)
}

fn leftover(a: &LeftoverArgs) -> Result<Value, CliError> {
    if a.e > a.j {
        return Err(CliError::Config("Eve cannot know more bits than the key has".into()));
    }
    let inst = leftover_instance(a.j, a.t, &prefix_side_info(a.j, a.e))?;
    let bound = leftover_hash_bound(inst.lambda_max, inst.rank_e, a.t, 0.0)?;
    Ok(json!({
        "j": a.j,
        "e": a.e,
        "t": a.t,
        "exact": inst.exact,
        "exact_vs_uniform": inst.exact_vs_uniform,
        "bound": bound,
        "within_bound": inst.exact <= bound,
    }))
}

fn transpose(a: &TransposeArgs) -> Result<Value, CliError> {
    if a.m == 0 || a.m > 5 {
        return Err(CliError::Config("transpose analysis supports 1..=5 qubits".into()));
    }
    let mut rng = input_rng(a.seed);
    let mut worst: f64 = 0.0;
    for _ in 0..a.samples {
        worst = worst.max(lemma1_check(&haar_unitary(1 << a.m, &mut rng)?)?);
    }
    Ok(json!({ "m": a.m, "samples": a.samples, "max_residual": worst }))
}

fn pad_leakage(a: &PadLeakageArgs) -> Result<Value, CliError> {
    if a.m == 0 || a.m > 3 || a.states == 0 {
        return Err(CliError::Config("pad leakage supports 1..=3 qubits and at least one state".into()));
    }
    let mut rng = input_rng(a.seed);
    let layout = SubsystemLayout::single("payload", a.m);
    let mut plain = Vec::with_capacity(a.states);
    for _ in 0..a.states {
        plain.push(random_state(layout.clone(), &mut rng)?.to_density()?);
    }
    let padded = plain.iter().map(qotp_key_average).collect::<Result<Vec<_>, _>>()?;
    let plain = Ensemble::uniform(plain)?;
    let padded = Ensemble::uniform(padded)?;
    let mut worst: f64 = 0.0;
    for _ in 0..a.samples {
        worst = worst.max(mutual_info_measurement(&padded, &Povm::random_projective(1 << a.m, &mut rng)?)?);
    }
    Ok(json!({
        "m": a.m,
        "states": a.states,
        "samples": a.samples,
        "holevo_plain": holevo(&plain)?,
        "holevo_padded": holevo(&padded)?,
        "max_mutual_info_padded": worst,
    }))
}

fn modified(a: &ModifiedArgs) -> Result<Value, CliError> {
    SimulationParams::new(a.m, a.s, a.seed).validate()?;
    let attack = AttackModel::parse(&a.attack, a.m + a.s)?;
    let input = random_state(SubsystemLayout::single("payload", a.m), &mut input_rng(a.seed))?;
    let yz = random_bits(2 * a.s, &mut key_rng(a.seed));
    let family = CodeFamily::random(&mut SimulationParams::new(a.m, a.s, a.seed).protocol_rng());
    let result = analyze_modified_qas(a.m, a.s, &input, &yz, &attack, family)?;
    let mut out = serde_json::to_value(result).map_err(|e| CliError::Config(e.to_string()))?;
    out["m"] = json!(a.m);
    out["s"] = json!(a.s);
    out["attack"] = json!(attack.to_string());
    out["code_family"] = json!(family.seed);
    Ok(out)
}
