//! Exact state-vector runs of the noiseless protocols: teleportation, dense
//! coding, entanglement distribution, the cobit and its coherent protocols.
//!
//! Measurements are enumerated branch by branch rather than sampled. Parties
//! only own qubits; gates spanning Alice and Bob are rejected, so quantum
//! information crosses only through [`Lab`] resources, which are counted.

mod demos;
mod ledger;
mod protocols;
mod state;
mod verify;

use thiserror::Error;

use crate::entropy::EntropyError;

pub use demos::{demo_rule_i_on_tp, demo_rule_o_on_sd, RuleIDemo, RuleODemo};
pub use ledger::{ideal_cobit, Lab, ResourceLedger};
pub use protocols::{
    bell_pairs, coherent_tp_target, double_cobit_oracle, run_cobit, run_coherent_sd, run_coherent_tp, run_qe,
    run_superdense, run_teleportation, verify_cobit_equivalence, CobitEquivalence, CobitRun, CoherentSdRun,
    CoherentTpRun, QeRun, Qubit, SuperdenseRun, TeleportBranch, TeleportRun,
};
pub use state::{expectation, normalize, overlap, Branch, StateVector};
pub use verify::{verify, ProtocolReport, VerifyReport};

/// Norm tolerance for state vectors.
pub const NORM_TOL: f64 = 1e-12;
/// Minimum fidelity for a protocol run to pass.
pub const FIDELITY_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Party {
    Alice,
    Bob,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CircuitError {
    #[error("gate {gate} spans both parties on qubits {qubits:?}")]
    CrossParty { gate: &'static str, qubits: alloc::vec::Vec<usize> },
    #[error("qubit {qubit} is not owned by {party:?}")]
    NotOwnedBy { qubit: usize, party: Party },
    #[error("no qubit {0}")]
    NoSuchQubit(usize),
    #[error("control and target are both qubit {0}")]
    SameQubit(usize),
    #[error("{got} amplitudes for {qubits} qubits")]
    Length { got: usize, qubits: usize },
    #[error("state norm is {0}, expected 1 within 1e-12")]
    NotNormalized(f64),
    #[error(transparent)]
    Entropy(#[from] EntropyError),
}
