//! In-place statevector gate kernels.

use crate::circuit::{Circuit, Gate, PauliAxis};
use crate::hamiltonian::TermKind;
use crate::{Error, Result};
use num_complex::Complex64;

/// Hard cap on simulated qubits (2^26 amplitudes ≈ 1 GiB).
pub const MAX_STATE_QUBITS: usize = 26;

/// `2^n` complex amplitudes evolved gate by gate.
///
/// Kernels are sequential; parallelism in this crate lives one level up,
/// across independent trajectories and estimator cells.
#[derive(Debug, Clone)]
pub struct State {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl State {
    /// |0…0⟩ on `n` qubits.
    pub fn zero(n: usize) -> Result<Self> {
        if n > MAX_STATE_QUBITS {
            return Err(Error::SizeCap {
                n,
                cap: MAX_STATE_QUBITS,
            });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(Self { n_qubits: n, amps })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn apply_circuit(&mut self, c: &Circuit) {
        debug_assert_eq!(c.n_qubits(), self.n_qubits);
        for g in c.gates() {
            self.apply_gate(g);
        }
    }

    pub fn apply_gate(&mut self, g: &Gate) {
        match *g {
            Gate::Cnot { control, target } => self.apply_cnot(control, target),
            Gate::Ry { qubit, angle } => {
                let c = (angle / 2.0).cos();
                let s = (angle / 2.0).sin();
                self.apply_1q(
                    qubit,
                    [
                        Complex64::new(c, 0.0),
                        Complex64::new(-s, 0.0),
                        Complex64::new(s, 0.0),
                        Complex64::new(c, 0.0),
                    ],
                );
            }
            Gate::Rz { qubit, angle } => {
                let half = angle / 2.0;
                self.apply_phase(qubit, Complex64::new(0.0, -half).exp(), Complex64::new(0.0, half).exp());
            }
            Gate::SqrtX { qubit } => {
                let a = Complex64::new(0.5, 0.5);
                let b = Complex64::new(0.5, -0.5);
                self.apply_1q(qubit, [a, b, b, a]);
            }
            Gate::Pauli { qubit, axis } => self.apply_pauli(qubit, axis),
            Gate::H { qubit } => {
                let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
                self.apply_1q(qubit, [h, h, h, -h]);
            }
        }
    }

    pub fn apply_pauli(&mut self, qubit: usize, axis: PauliAxis) {
        match axis {
            PauliAxis::X => {
                let z = Complex64::new(1.0, 0.0);
                self.apply_offdiag(qubit, z, z);
            }
            PauliAxis::Y => {
                self.apply_offdiag(qubit, Complex64::new(0.0, -1.0), Complex64::new(0.0, 1.0));
            }
            PauliAxis::Z => {
                self.apply_phase(qubit, Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0));
            }
        }
    }

    /// General single-qubit gate, matrix row-major [m00, m01, m10, m11].
    fn apply_1q(&mut self, qubit: usize, m: [Complex64; 4]) {
        let stride = 1usize << qubit;
        for block in self.amps.chunks_mut(2 * stride) {
            let (lo, hi) = block.split_at_mut(stride);
            for (a0, a1) in lo.iter_mut().zip(hi.iter_mut()) {
                let x0 = *a0;
                let x1 = *a1;
                *a0 = m[0] * x0 + m[1] * x1;
                *a1 = m[2] * x0 + m[3] * x1;
            }
        }
    }

    /// Diagonal gate diag(d0, d1) on one qubit.
    fn apply_phase(&mut self, qubit: usize, d0: Complex64, d1: Complex64) {
        let stride = 1usize << qubit;
        for block in self.amps.chunks_mut(2 * stride) {
            let (lo, hi) = block.split_at_mut(stride);
            for a in lo.iter_mut() {
                *a *= d0;
            }
            for a in hi.iter_mut() {
                *a *= d1;
            }
        }
    }

    /// Anti-diagonal gate [[0, c01], [c10, 0]] on one qubit.
    fn apply_offdiag(&mut self, qubit: usize, c01: Complex64, c10: Complex64) {
        let stride = 1usize << qubit;
        for block in self.amps.chunks_mut(2 * stride) {
            let (lo, hi) = block.split_at_mut(stride);
            for (a0, a1) in lo.iter_mut().zip(hi.iter_mut()) {
                let x0 = *a0;
                *a0 = c01 * *a1;
                *a1 = c10 * x0;
            }
        }
    }

    fn apply_cnot(&mut self, control: usize, target: usize) {
        let cbit = 1usize << control;
        let tbit = 1usize << target;
        // Swap each control=1, target=0 amplitude with its target-flipped
        // partner; visiting only target=0 indices touches each pair once.
        for i in 0..self.amps.len() {
            if i & cbit != 0 && i & tbit == 0 {
                self.amps.swap(i, i | tbit);
            }
        }
    }

    /// ⟨P⟩ for a ZZ, X, or Z string on `support`.
    pub fn pauli_expectation(&self, kind: TermKind, support: &[usize]) -> Result<f64> {
        for &q in support {
            if q >= self.n_qubits {
                return Err(Error::SupportMismatch(format!(
                    "term qubit {q} outside circuit with {} qubits",
                    self.n_qubits
                )));
            }
        }
        let expected_len = match kind {
            TermKind::Zz => 2,
            TermKind::X | TermKind::Z => 1,
        };
        if support.len() != expected_len {
            return Err(Error::SupportMismatch(format!(
                "{kind:?} term needs support of {expected_len}, got {}",
                support.len()
            )));
        }
        let value = match kind {
            TermKind::Zz => {
                let b0 = 1usize << support[0];
                let b1 = 1usize << support[1];
                self.det_sum(|i, a| {
                    let sign = ((i & b0 != 0) ^ (i & b1 != 0)) as i32;
                    (1 - 2 * sign) as f64 * a.norm_sqr()
                })
            }
            TermKind::Z => {
                let b = 1usize << support[0];
                self.det_sum(|i, a| {
                    let sign = (i & b != 0) as i32;
                    (1 - 2 * sign) as f64 * a.norm_sqr()
                })
            }
            TermKind::X => {
                let b = 1usize << support[0];
                let amps = &self.amps;
                self.det_sum(|i, a| (a.conj() * amps[i ^ b]).re)
            }
        };
        Ok(value)
    }

    /// Probability of each outcome over `measured` qubits, in measured-bit
    /// order (bit j of the outcome index is qubit `measured[j]`).
    pub fn marginal_distribution(&self, measured: &[usize]) -> Vec<f64> {
        let mut probs = vec![0.0; 1 << measured.len()];
        for (i, a) in self.amps.iter().enumerate() {
            let p = a.norm_sqr();
            if p == 0.0 {
                continue;
            }
            let mut outcome = 0usize;
            for (j, &q) in measured.iter().enumerate() {
                if i & (1 << q) != 0 {
                    outcome |= 1 << j;
                }
            }
            probs[outcome] += p;
        }
        probs
    }

    /// Chunked sum with a fixed association order, so results do not depend
    /// on the execution policy.
    fn det_sum<F: Fn(usize, &Complex64) -> f64>(&self, f: F) -> f64 {
        const CHUNK: usize = 1 << 12;
        let partials: Vec<f64> = self
            .amps
            .chunks(CHUNK)
            .enumerate()
            .map(|(ci, chunk)| {
                let base = ci * CHUNK;
                chunk
                    .iter()
                    .enumerate()
                    .map(|(off, a)| f(base + off, a))
                    .sum()
            })
            .collect();
        partials.iter().sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn norm_is_preserved_by_every_gate() {
        let gates = [
            Gate::Ry {
                qubit: 1,
                angle: 0.7,
            },
            Gate::Rz {
                qubit: 0,
                angle: -1.3,
            },
            Gate::SqrtX { qubit: 2 },
            Gate::H { qubit: 0 },
            Gate::Pauli {
                qubit: 1,
                axis: PauliAxis::Y,
            },
            Gate::Cnot {
                control: 0,
                target: 1,
            },
            Gate::Cnot {
                control: 2,
                target: 1,
            },
        ];
        let mut s = State::zero(3).unwrap();
        // Scramble first so gates act on a generic state.
        s.apply_gate(&Gate::Ry {
            qubit: 0,
            angle: 0.4,
        });
        s.apply_gate(&Gate::Ry {
            qubit: 2,
            angle: 2.1,
        });
        for g in &gates {
            s.apply_gate(g);
            let norm: f64 = s.amplitudes().iter().map(|a| a.norm_sqr()).sum();
            assert!((norm - 1.0).abs() < 1e-12, "gate {g:?} broke the norm");
        }
    }

    #[test]
    fn cnot_truth_table() {
        // |10⟩ (qubit 0 = 1) → CNOT(0,1) → |11⟩
        let mut s = State::zero(2).unwrap();
        s.apply_pauli(0, PauliAxis::X);
        s.apply_gate(&Gate::Cnot {
            control: 0,
            target: 1,
        });
        assert!((s.amplitudes()[3].norm() - 1.0).abs() < 1e-15);
        // control 0 stays put
        let mut s = State::zero(2).unwrap();
        s.apply_gate(&Gate::Cnot {
            control: 0,
            target: 1,
        });
        assert!((s.amplitudes()[0].norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn marginal_orders_bits_by_measured_list() {
        let mut s = State::zero(2).unwrap();
        s.apply_pauli(0, PauliAxis::X); // state |01⟩ in (q1 q0) order, index 1
        let probs = s.marginal_distribution(&[0, 1]);
        assert!((probs[0b01] - 1.0).abs() < 1e-15);
        let probs = s.marginal_distribution(&[1, 0]);
        assert!((probs[0b10] - 1.0).abs() < 1e-15);
        let probs = s.marginal_distribution(&[0]);
        assert!((probs[1] - 1.0).abs() < 1e-15);
    }
}
