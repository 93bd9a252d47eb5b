//! Desk-scale workbench for studying damping-factor error mitigation in
//! variational quantum eigensolving.
//!
//! The crate simulates the full measurement pipeline of a VQE experiment on
//! the 1D mixed-field Ising model: alternating-layered ansatz circuits, a
//! loop-topology device model with depolarizing and readout noise, shot
//! sampling via stochastic Pauli trajectories, and a family of mitigation
//! methods that predict or remove the multiplicative damping the noise
//! inflicts on measured energies.
//!
//! Modules map onto the pipeline stages:
//!
//! - [`circuit`] — gate-list IR, ansatz construction, circuit transforms
//!   (basis decomposition, light-cone filtering, CNOT folding, randomized
//!   compiling, qubit assignments).
//! - [`hamiltonian`] — Ising term expansion, matrix-free exact spectrum,
//!   perturbative energy formulas.
//! - [`device`] — loop device profiles and assignment scoring.
//! - [`simulator`] — exact statevector evaluation and noisy shot sampling.
//! - [`readout`] — closed-form readout-bias algebra and its inversion.
//! - [`estimator`] — the end-to-end energy measurement pipeline.
//! - [`mitigation`] — damping predictors, ZNE, and effectiveness grading.
//! - [`vqe`] — SPSA optimization of ansatz parameters.
//!
//! Trajectory sampling, estimator cells, and sweep evaluation are data
//! parallel; the `parallel` feature (default) runs them on rayon, and
//! disabling it falls back to sequential loops with identical results.

pub mod circuit;
pub mod device;
pub mod digest;
pub mod error;
pub mod estimator;
pub mod exec;
pub mod hamiltonian;
pub mod mitigation;
pub mod readout;
pub mod simulator;
pub mod vqe;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
