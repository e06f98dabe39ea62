pub mod qcore;
pub mod pauli;
pub mod seeds;
pub mod stats;
pub mod purity;
pub mod keyring;
pub mod protocols;
pub mod analysis;
pub mod cli;
