//! Error type shared across the crate.

use crate::estimator::EnergyEstimate;

/// Failure modes of circuit construction, simulation, and mitigation.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Parameter vector length does not match the declared ansatz shape.
    #[error("parameter shape mismatch: expected {expected} angles, got {got}")]
    ParameterShape { expected: usize, got: usize },

    /// The requested construction is only defined on an even-length loop.
    #[error("unsupported topology: {0}")]
    UnsupportedTopology(String),

    /// A gate outside the decomposable set was encountered.
    #[error("cannot decompose gate at index {index}: {reason}")]
    Decomposition { index: usize, reason: String },

    /// An argument fell outside its mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// Statevector size cap exceeded.
    #[error("qubit count {n} exceeds the simulator cap of {cap}")]
    SizeCap { n: usize, cap: usize },

    /// Iterative eigensolver ran out of iterations.
    #[error("eigensolver did not converge: residual {residual:.3e} after {iterations} iterations")]
    Convergence { residual: f64, iterations: usize },

    /// A perturbative formula's denominator vanished.
    #[error("singular denominator in perturbative formula: {0}")]
    SingularDenominator(String),

    /// Perturbation theory hit an untreatable near-degeneracy.
    #[error("near-degenerate levels outside the treated multiplet (gap {gap:.3e})")]
    Degeneracy { gap: f64 },

    /// Observable support does not fit the circuit.
    #[error("support mismatch: {0}")]
    SupportMismatch(String),

    /// An operation precondition was violated.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Parity expectation of an empty shot table.
    #[error("empty shot table")]
    EmptyShotTable,

    /// Readout mitigation factor too close to zero to invert.
    #[error("readout mitigation not invertible: scale factor {factor:.3e}")]
    NonInvertible { factor: f64 },

    /// Exponential fit rejected its inputs or failed.
    ///
    /// For ZNE the raw unfolded-scale energy is attached so callers can
    /// fall back to reporting the unmitigated value.
    #[error("exponential fit failed: {reason}")]
    FitFailure {
        reason: String,
        fallback: Option<Box<EnergyEstimate>>,
    },

    /// Shot budget cannot cover the requested estimator cells.
    #[error("shot budget {shots} smaller than {cells} estimator cells")]
    ShotBudget { shots: u64, cells: usize },

    /// Damping factor undefined because the exact reference is zero.
    #[error("damping undefined: exact reference energy is {0:.3e}")]
    UndefinedDamping(f64),

    /// Device profile failed validation.
    #[error("invalid device profile: {0}")]
    DeviceProfile(String),

    /// Objective evaluation inside an optimizer failed.
    #[error("objective evaluation failed at iteration {iteration}: {source}")]
    Objective {
        iteration: usize,
        #[source]
        source: Box<Error>,
    },
}
