//! Two-prover XOR games and their single-quantum-prover simulation.
//!
//! The crate computes three values of an XOR game: the trivial value (both
//! players answer at random), the classical value (brute force over
//! deterministic strategies), and the quantum value (players share an
//! entangled state), the last via a Gram-matrix relaxation solved by
//! projected gradient ascent. On top of that it converts optimal vector
//! strategies into explicit shared-state observables and back
//! ([`tsirelson`]), simulates the resulting two-prover measurements
//! ([`entangled`]), and simulates a one-round protocol in which a single
//! quantum prover answers a superposition of both questions ([`protocol`]),
//! checking numerically that the simulated game value matches the quantum
//! value.
//!
//! All randomness is driven by explicit 64-bit seeds through a SplitMix64
//! stream, so every computation in this crate is reproducible bit for bit.

pub mod complex;
pub mod entangled;
pub mod game;
pub mod gram;
pub mod linalg;
pub mod protocol;
pub mod rng;
pub mod tsirelson;

pub use entangled::{
    entangled_win_probability, joint_outcome_distribution, projectors_from_observable,
    EntangledError, JointOutcomeDistribution,
};
pub use game::{
    classical_value, classical_win_probability, cost_matrix, trivial_value, validate_game,
    ClassicalStrategy, GameError, XorGame,
};
pub use gram::{
    bias_objective, extract_vectors, project_psd, quantum_value, quantum_value_detailed,
    GramMatrix, QuantumSolve, SolverConfig, SolverError, VectorStrategy,
};
pub use protocol::{
    apply_honest_prover, apply_prover, build_initial_state, outcome_distribution,
    simulated_value, verifier_measurement, verify_simulation, GameReport, MessageIndex,
    OutcomeProbabilities, ProtocolError, ProtocolState, ProverAction, VerifierMeasurement,
};
pub use tsirelson::{
    clifford_generators, observables_from_vectors, vectors_from_observables, EntangledStrategy,
    Observable, TsirelsonError,
};
