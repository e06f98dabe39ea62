//! Information-theoretic and entanglement diagnostics. Entropies and mutual
//! informations are in bits.

mod entangle;
mod hash;
mod info;
mod lemma;
mod relent;

use thiserror::Error;

use crate::qcore::QcoreError;

pub use entangle::{entropy_separability_check, eve_product_distance, ppt_min_eigenvalue, separable_2x2};
pub use hash::{leftover_hash_bound, leftover_instance, prefix_side_info, LeftoverInstance};
pub use info::{holevo, mutual_info_measurement, Ensemble, Povm};
pub use lemma::{lemma1_check, lemma1_conjugate_residual, max_entangled_vector};
pub use relent::{rel_entropy_ub, DEFAULT_ITERS, DEFAULT_RESTARTS};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalysisError {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error(transparent)]
    Qcore(#[from] QcoreError),
}

fn invalid<T>(msg: impl Into<String>) -> Result<T, AnalysisError> {
    Err(AnalysisError::Invalid(msg.into()))
}
