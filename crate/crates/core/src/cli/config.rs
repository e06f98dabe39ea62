use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::CliError;
use crate::protocols::{AttackModel, Backend, Protocol};

/// A single value, an inclusive range `a..b`, or a comma list.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RangeSpec {
    One(usize),
    List(Vec<usize>),
    Text(String),
}

impl RangeSpec {
    pub fn values(&self) -> Result<Vec<usize>, CliError> {
        match self {
            RangeSpec::One(v) => Ok(vec![*v]),
            RangeSpec::List(v) => Ok(v.clone()),
            RangeSpec::Text(t) => parse_range(t),
        }
    }
}

impl std::str::FromStr for RangeSpec {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_range(s)?;
        Ok(RangeSpec::Text(s.to_string()))
    }
}

fn parse_range(text: &str) -> Result<Vec<usize>, CliError> {
    let bad = || CliError::Config(format!("cannot parse range `{text}` (use N, A..B or A,B,C)"));
    let text = text.trim();
    if let Some((a, b)) = text.split_once("..") {
        let a: usize = a.trim().parse().map_err(|_| bad())?;
        let b: usize = b.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
        return Ok((a..=b).collect());
    }
    if text.is_empty() {
        return Ok(Vec::new());
    }
    text.split(',').map(|p| p.trim().parse().map_err(|_| bad())).collect()
}

/// Experiment description as read from a JSON file. Every field is optional
/// so command-line flags can fill or override it.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub protocol: Option<Protocol>,
    pub m: Option<RangeSpec>,
    pub s: Option<RangeSpec>,
    pub attack: Option<String>,
    pub trials: Option<u64>,
    pub seed: Option<u64>,
    pub backend: Option<Backend>,
    pub output_path: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("bad config {}: {e}", path.display())))
    }

    /// Fields set in `over` replace those in `self`.
    pub fn overridden_by(self, over: ExperimentConfig) -> Self {
        Self {
            protocol: over.protocol.or(self.protocol),
            m: over.m.or(self.m),
            s: over.s.or(self.s),
            attack: over.attack.or(self.attack),
            trials: over.trials.or(self.trials),
            seed: over.seed.or(self.seed),
            backend: over.backend.or(self.backend),
            output_path: over.output_path.or(self.output_path),
        }
    }

    pub fn resolve(self) -> Result<Resolved, CliError> {
        let ms = self.m.unwrap_or(RangeSpec::One(1)).values()?;
        let ss = self.s.unwrap_or(RangeSpec::One(2)).values()?;
        if ms.is_empty() || ss.is_empty() {
            return Err(CliError::Config("sweep ranges must be non-empty".into()));
        }
        if ms.contains(&0) || ss.contains(&0) {
            return Err(CliError::Config("m and s must be at least 1".into()));
        }
        let trials = self.trials.unwrap_or(1);
        if trials == 0 {
            return Err(CliError::Config("trials must be at least 1".into()));
        }
        Ok(Resolved {
            protocol: self.protocol.unwrap_or(Protocol::Sqas),
            ms,
            ss,
            attack: self.attack.unwrap_or_else(|| "none".into()),
            trials,
            seed: self.seed.unwrap_or(0),
            backend: self.backend.unwrap_or_default(),
            output_path: self.output_path,
        })
    }
}

/// Configuration with defaults applied and ranges expanded.
#[derive(Clone, Debug, PartialEq)]
pub struct Resolved {
    pub protocol: Protocol,
    pub ms: Vec<usize>,
    pub ss: Vec<usize>,
    pub attack: String,
    pub trials: u64,
    pub seed: u64,
    pub backend: Backend,
    pub output_path: Option<PathBuf>,
}

impl Resolved {
    /// Channel width the attack acts on.
    pub fn channel_qubits(protocol: Protocol, m: usize, s: usize) -> usize {
        match protocol {
            Protocol::ProtectEntanglement => m,
            _ => m + s,
        }
    }

    pub fn attack_for(&self, m: usize, s: usize) -> Result<AttackModel, CliError> {
        AttackModel::parse(&self.attack, Self::channel_qubits(self.protocol, m, s)).map_err(CliError::from)
    }
}
