//! Statevector simulation: exact evaluation and noisy shot sampling.

mod noise;
mod shot_table;
mod state;

pub use noise::{sample_noisy, sample_noisy_with_policy, NoiseConfig};
pub use shot_table::{parity_expectation, ShotTable};
pub use state::{State, MAX_STATE_QUBITS};

use crate::circuit::Circuit;
use crate::hamiltonian::PauliTerm;
use crate::Result;
use num_complex::Complex64;

/// Runs `c` on |0…0⟩ and returns the final amplitudes.
pub fn exact_state(c: &Circuit) -> Result<Vec<Complex64>> {
    let mut state = State::zero(c.n_qubits())?;
    state.apply_circuit(c);
    Ok(state.into_amplitudes())
}

/// Exact ⟨ψ|P|ψ⟩ of a Pauli term on the circuit's output state.
pub fn exact_expectation(c: &Circuit, t: &PauliTerm) -> Result<f64> {
    let mut state = State::zero(c.n_qubits())?;
    state.apply_circuit(c);
    state.pauli_expectation(t.kind, &t.support)
}

/// Exact energy `Σ coef·⟨term⟩` of a term list on the circuit's output
/// state, evaluated from a single statevector pass.
pub fn exact_energy(c: &Circuit, terms: &[PauliTerm]) -> Result<f64> {
    let mut state = State::zero(c.n_qubits())?;
    state.apply_circuit(c);
    let mut energy = 0.0;
    for t in terms {
        energy += t.coefficient * state.pauli_expectation(t.kind, &t.support)?;
    }
    Ok(energy)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{Circuit, Gate};
    use crate::hamiltonian::{PauliTerm, TermKind};
    use std::f64::consts::PI;

    #[test]
    fn empty_circuit_is_basis_state() {
        let c = Circuit::new(3, vec![], vec![]).unwrap();
        let amps = exact_state(&c).unwrap();
        assert_eq!(amps.len(), 8);
        assert!((amps[0] - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!(amps[1..].iter().all(|a| a.norm() < 1e-15));
    }

    #[test]
    fn ry_pi_flips_the_qubit() {
        let c = Circuit::new(1, vec![Gate::Ry { qubit: 0, angle: PI }], vec![0]).unwrap();
        let amps = exact_state(&c).unwrap();
        assert!(amps[0].norm() < 1e-15);
        assert!((amps[1].norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn basic_expectations() {
        let c = Circuit::new(2, vec![], vec![0, 1]).unwrap();
        let zz = PauliTerm {
            coefficient: 1.0,
            support: vec![0, 1],
            kind: TermKind::Zz,
        };
        assert!((exact_expectation(&c, &zz).unwrap() - 1.0).abs() < 1e-15);

        // |++⟩ via two RY(π/2): ⟨X⟩ = 1 on each qubit.
        let c = Circuit::new(
            2,
            vec![
                Gate::Ry {
                    qubit: 0,
                    angle: PI / 2.0,
                },
                Gate::Ry {
                    qubit: 1,
                    angle: PI / 2.0,
                },
            ],
            vec![0, 1],
        )
        .unwrap();
        let x0 = PauliTerm {
            coefficient: 1.0,
            support: vec![0],
            kind: TermKind::X,
        };
        assert!((exact_expectation(&c, &x0).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn support_outside_circuit_rejected() {
        let c = Circuit::new(2, vec![], vec![0]).unwrap();
        let t = PauliTerm {
            coefficient: 1.0,
            support: vec![2],
            kind: TermKind::Z,
        };
        assert!(exact_expectation(&c, &t).is_err());
    }
}
