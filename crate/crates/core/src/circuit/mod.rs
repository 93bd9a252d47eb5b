//! Circuit intermediate representation and transforms.
//!
//! A [`Circuit`] is an ordered gate list over `n` qubits arranged on a
//! loop, plus the list of qubits read out at the end. Circuits are
//! immutable after construction; every transform returns a new circuit, so
//! values can be shared freely across threads.

mod ansatz;
mod assignment;
mod text;
mod transform;

pub use ansatz::{build_alt_ansatz, expand_symmetric, AnsatzParams};
pub use assignment::{enumerate_assignments, QubitAssignment};
pub use transform::{
    decompose_to_basis, fold_cnots, light_cone_filter, light_cone_window, randomized_compile,
    LightConeWindow,
};

use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// Single-qubit Pauli label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PauliAxis {
    X,
    Y,
    Z,
}

impl PauliAxis {
    /// Pauli product modulo phase: `self * other` as a Pauli label, `None`
    /// when the product is the identity.
    pub fn mul(self, other: PauliAxis) -> Option<PauliAxis> {
        use PauliAxis::*;
        match (self, other) {
            (a, b) if a == b => None,
            (X, Y) | (Y, X) => Some(Z),
            (X, Z) | (Z, X) => Some(Y),
            (Y, Z) | (Z, Y) => Some(X),
            _ => unreachable!(),
        }
    }
}

/// One gate of the supported set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Gate {
    /// Controlled-NOT between adjacent loop qubits.
    Cnot { control: usize, target: usize },
    /// Y-rotation by `angle` radians.
    Ry { qubit: usize, angle: f64 },
    /// Z-rotation by `angle` radians.
    Rz { qubit: usize, angle: f64 },
    /// Square root of X (basis gate).
    SqrtX { qubit: usize },
    /// Pauli frame gate (from randomized compiling).
    Pauli { qubit: usize, axis: PauliAxis },
    /// Hadamard; only legal as a basis change merged into a preceding RY.
    H { qubit: usize },
}

impl Gate {
    /// Qubits the gate acts on, in (control, target) order for CNOT.
    pub fn qubits(&self) -> (usize, Option<usize>) {
        match *self {
            Gate::Cnot { control, target } => (control, Some(target)),
            Gate::Ry { qubit, .. }
            | Gate::Rz { qubit, .. }
            | Gate::SqrtX { qubit }
            | Gate::Pauli { qubit, .. }
            | Gate::H { qubit } => (qubit, None),
        }
    }

    /// True for the hardware-native set emitted by basis decomposition.
    pub fn is_basis(&self) -> bool {
        matches!(
            self,
            Gate::Cnot { .. } | Gate::Rz { .. } | Gate::SqrtX { .. } | Gate::Pauli { .. }
        )
    }
}

/// Ordered gate list over `n_qubits` loop qubits with a measured subset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    n_qubits: usize,
    gates: Vec<Gate>,
    measured_qubits: Vec<usize>,
}

impl Circuit {
    /// Validates indices and builds the circuit.
    ///
    /// Measured qubits must be distinct and in range; CNOT control and
    /// target must differ. Loop adjacency of CNOTs is a property of the
    /// ansatz constructors, not enforced here, because filtered circuits
    /// live on a relabeled window.
    pub fn new(n_qubits: usize, gates: Vec<Gate>, measured_qubits: Vec<usize>) -> Result<Self> {
        for (i, g) in gates.iter().enumerate() {
            let (a, b) = g.qubits();
            if a >= n_qubits || b.is_some_and(|b| b >= n_qubits) {
                return Err(Error::Precondition(format!(
                    "gate {i} acts on qubit outside [0, {n_qubits})"
                )));
            }
            if let Gate::Cnot { control, target } = g {
                if control == target {
                    return Err(Error::Precondition(format!(
                        "gate {i}: CNOT control equals target ({control})"
                    )));
                }
            }
        }
        let mut seen = vec![false; n_qubits];
        for &q in &measured_qubits {
            if q >= n_qubits {
                return Err(Error::Precondition(format!(
                    "measured qubit {q} outside [0, {n_qubits})"
                )));
            }
            if std::mem::replace(&mut seen[q], true) {
                return Err(Error::Precondition(format!("measured qubit {q} repeated")));
            }
        }
        Ok(Self {
            n_qubits,
            gates,
            measured_qubits,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn measured_qubits(&self) -> &[usize] {
        &self.measured_qubits
    }

    /// Same circuit with a different measured set.
    pub fn with_measured(&self, measured_qubits: Vec<usize>) -> Result<Self> {
        Self::new(self.n_qubits, self.gates.clone(), measured_qubits)
    }

    /// Same circuit with extra gates appended.
    pub fn with_appended(&self, extra: impl IntoIterator<Item = Gate>) -> Result<Self> {
        let mut gates = self.gates.clone();
        gates.extend(extra);
        Self::new(self.n_qubits, gates, self.measured_qubits.clone())
    }

    pub fn cnot_count(&self) -> usize {
        self.gates
            .iter()
            .filter(|g| matches!(g, Gate::Cnot { .. }))
            .count()
    }

    /// True when every CNOT couples adjacent qubits mod `n_qubits`.
    pub fn is_loop_local(&self) -> bool {
        self.gates.iter().all(|g| match *g {
            Gate::Cnot { control, target } => {
                let n = self.n_qubits;
                (control + 1) % n == target || (target + 1) % n == control
            }
            _ => true,
        })
    }

    /// Content digest of the serialized form, for caching and provenance.
    pub fn digest(&self) -> String {
        crate::digest::digest_bytes(self.to_text().as_bytes())
    }
}
