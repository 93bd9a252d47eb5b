//! Shared test oracles: dense complex matrices, a density-matrix noise
//! channel for up to two qubits, and a confusion-matrix readout model.
//!
//! Everything here is written against the math directly and never calls
//! into the statevector or trajectory code paths it is used to check.

#![allow(dead_code)]

use mitiq_forge_core::circuit::{Circuit, Gate, PauliAxis};
use mitiq_forge_core::device::DeviceModel;
use num_complex::Complex64;
use std::f64::consts::{FRAC_1_SQRT_2, PI};

pub type C64 = Complex64;

/// Dense square complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMat {
    pub n: usize,
    pub a: Vec<C64>,
}

impl CMat {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            a: vec![C64::new(0.0, 0.0); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_rows(rows: &[&[C64]]) -> Self {
        let n = rows.len();
        let mut m = Self::zeros(n);
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        m
    }

    pub fn mul(&self, other: &CMat) -> CMat {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = CMat::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let aik = self[(i, k)];
                if aik.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += aik * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn dagger(&self) -> CMat {
        let n = self.n;
        let mut out = CMat::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = self[(j, i)].conj();
            }
        }
        out
    }

    /// Kronecker product with `self` on the high bits.
    pub fn kron(&self, low: &CMat) -> CMat {
        let n = self.n * low.n;
        let mut out = CMat::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let (ih, il) = (i / low.n, i % low.n);
                let (jh, jl) = (j / low.n, j % low.n);
                out[(i, j)] = self[(ih, jh)] * low[(il, jl)];
            }
        }
        out
    }

    /// Equality up to a global phase, normalized on the largest entry.
    pub fn phase_equal(&self, other: &CMat, tol: f64) -> bool {
        assert_eq!(self.n, other.n);
        let (mut best, mut idx) = (0.0, 0);
        for (k, v) in other.a.iter().enumerate() {
            if v.norm() > best {
                best = v.norm();
                idx = k;
            }
        }
        if best < 1e-14 {
            return self.a.iter().all(|v| v.norm() < tol);
        }
        let phase = self.a[idx] / other.a[idx];
        if (phase.norm() - 1.0).abs() > 1e-9 {
            return false;
        }
        self.a
            .iter()
            .zip(&other.a)
            .all(|(s, o)| (s - phase * o).norm() < tol)
    }
}

impl std::ops::Index<(usize, usize)> for CMat {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.a[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.a[i * self.n + j]
    }
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn mat_ry(theta: f64) -> CMat {
    let (co, si) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    CMat::from_rows(&[&[c(co, 0.0), c(-si, 0.0)], &[c(si, 0.0), c(co, 0.0)]])
}

pub fn mat_rz(theta: f64) -> CMat {
    CMat::from_rows(&[
        &[c(0.0, -theta / 2.0).exp(), c(0.0, 0.0)],
        &[c(0.0, 0.0), c(0.0, theta / 2.0).exp()],
    ])
}

pub fn mat_sx() -> CMat {
    CMat::from_rows(&[&[c(0.5, 0.5), c(0.5, -0.5)], &[c(0.5, -0.5), c(0.5, 0.5)]])
}

pub fn mat_h() -> CMat {
    CMat::from_rows(&[
        &[c(FRAC_1_SQRT_2, 0.0), c(FRAC_1_SQRT_2, 0.0)],
        &[c(FRAC_1_SQRT_2, 0.0), c(-FRAC_1_SQRT_2, 0.0)],
    ])
}

pub fn mat_pauli(axis: PauliAxis) -> CMat {
    match axis {
        PauliAxis::X => CMat::from_rows(&[&[c(0.0, 0.0), c(1.0, 0.0)], &[c(1.0, 0.0), c(0.0, 0.0)]]),
        PauliAxis::Y => CMat::from_rows(&[&[c(0.0, 0.0), c(0.0, -1.0)], &[c(0.0, 1.0), c(0.0, 0.0)]]),
        PauliAxis::Z => CMat::from_rows(&[&[c(1.0, 0.0), c(0.0, 0.0)], &[c(0.0, 0.0), c(-1.0, 0.0)]]),
    }
}

/// CNOT on two qubits with the given control/target bit positions
/// (bit 0 is the low index of the amplitude).
pub fn mat_cnot(control_bit: usize, target_bit: usize, n_qubits: usize) -> CMat {
    let dim = 1 << n_qubits;
    let mut m = CMat::zeros(dim);
    for i in 0..dim {
        let j = if i & (1 << control_bit) != 0 {
            i ^ (1 << target_bit)
        } else {
            i
        };
        m[(j, i)] = c(1.0, 0.0);
    }
    m
}

/// Full unitary of a circuit on `n_qubits` (≤ 3 for sanity) as a dense
/// matrix, composed gate by gate.
pub fn circuit_unitary(circuit: &Circuit) -> CMat {
    let n = circuit.n_qubits();
    let mut u = CMat::identity(1 << n);
    for g in circuit.gates() {
        let gm = gate_matrix(g, n);
        u = gm.mul(&u);
    }
    u
}

pub fn gate_matrix(g: &Gate, n_qubits: usize) -> CMat {
    match *g {
        Gate::Cnot { control, target } => mat_cnot(control, target, n_qubits),
        Gate::Ry { qubit, angle } => embed_1q(&mat_ry(angle), qubit, n_qubits),
        Gate::Rz { qubit, angle } => embed_1q(&mat_rz(angle), qubit, n_qubits),
        Gate::SqrtX { qubit } => embed_1q(&mat_sx(), qubit, n_qubits),
        Gate::Pauli { qubit, axis } => embed_1q(&mat_pauli(axis), qubit, n_qubits),
        Gate::H { qubit } => embed_1q(&mat_h(), qubit, n_qubits),
    }
}

pub fn embed_1q(m: &CMat, qubit: usize, n_qubits: usize) -> CMat {
    let mut out = CMat::identity(1);
    for q in (0..n_qubits).rev() {
        let f = if q == qubit { m.clone() } else { CMat::identity(2) };
        out = out.kron(&f);
    }
    out
}

/// Density-matrix evolution of a basis-gate circuit on ≤ 2 qubits with
/// local depolarizing channels after each noisy gate, exactly as the
/// trajectory sampler models them but solved in closed form.
///
/// Returns the outcome distribution over the measured qubits after
/// optional per-bit readout confusion.
pub fn channel_distribution(
    circuit: &Circuit,
    device: &DeviceModel,
    window: &[usize],
    readout: bool,
) -> Vec<f64> {
    let n = circuit.n_qubits();
    assert!(n <= 2, "oracle is sized for two qubits");
    let dim = 1 << n;
    let mut rho = CMat::zeros(dim);
    rho[(0, 0)] = c(1.0, 0.0);

    for g in circuit.gates() {
        let u = gate_matrix(g, n);
        rho = u.mul(&rho).mul(&u.dagger());
        let rate = match *g {
            Gate::Cnot { control, target } => device.cnot_error(window[control], window[target]),
            Gate::Rz { qubit, .. } | Gate::SqrtX { qubit } => {
                device.single_qubit_error(window[qubit])
            }
            Gate::Pauli { .. } => 0.0,
            Gate::Ry { .. } | Gate::H { .. } => panic!("oracle needs decomposed circuits"),
        };
        if rate > 0.0 {
            rho = depolarize(&rho, g, n, rate);
        }
    }

    // Diagonal is the outcome distribution over all qubits; marginalize to
    // the measured set.
    let measured = circuit.measured_qubits();
    let mut probs = vec![0.0; 1 << measured.len()];
    for i in 0..dim {
        let p = rho[(i, i)].re;
        let mut outcome = 0usize;
        for (j, &q) in measured.iter().enumerate() {
            if i & (1 << q) != 0 {
                outcome |= 1 << j;
            }
        }
        probs[outcome] += p;
    }

    if readout {
        probs = confusion_apply(&probs, measured, device, window);
    }
    probs
}

/// Applies per-bit readout confusion to an outcome distribution.
pub fn confusion_apply(
    probs: &[f64],
    measured: &[usize],
    device: &DeviceModel,
    window: &[usize],
) -> Vec<f64> {
    let m = measured.len();
    let mut out = vec![0.0; probs.len()];
    for (from, &p) in probs.iter().enumerate() {
        if p == 0.0 {
            continue;
        }
        for to in 0..probs.len() {
            let mut w = p;
            for (j, &q) in measured.iter().enumerate() {
                let phys = window[q];
                let (e0, e1) = (device.readout_e0(phys), device.readout_e1(phys));
                let bit_from = from & (1 << j) != 0;
                let bit_to = to & (1 << j) != 0;
                w *= match (bit_from, bit_to) {
                    (false, false) => 1.0 - e0,
                    (false, true) => e0,
                    (true, true) => 1.0 - e1,
                    (true, false) => e1,
                };
            }
            out[to] += w;
        }
    }
    let _ = m;
    out
}

/// Parity expectation of a distribution over all its bits.
pub fn distribution_parity(probs: &[f64]) -> f64 {
    probs
        .iter()
        .enumerate()
        .map(|(i, p)| if i.count_ones() % 2 == 0 { *p } else { -*p })
        .sum()
}

fn depolarize(rho: &CMat, g: &Gate, n: usize, rate: f64) -> CMat {
    let paulis: Vec<CMat> = match *g {
        Gate::Cnot { control, target } => {
            let mut ps = Vec::new();
            for a in 0..4 {
                for b in 0..4 {
                    if a == 0 && b == 0 {
                        continue;
                    }
                    let pa = pauli_or_id(a, control, n);
                    let pb = pauli_or_id(b, target, n);
                    ps.push(pa.mul(&pb));
                }
            }
            ps
        }
        _ => {
            let (q, _) = g.qubits();
            vec![
                embed_1q(&mat_pauli(PauliAxis::X), q, n),
                embed_1q(&mat_pauli(PauliAxis::Y), q, n),
                embed_1q(&mat_pauli(PauliAxis::Z), q, n),
            ]
        }
    };
    let k = paulis.len() as f64;
    let mut out = CMat::zeros(rho.n);
    for (i, v) in rho.a.iter().enumerate() {
        out.a[i] = v * c(1.0 - rate, 0.0);
    }
    for p in &paulis {
        let term = p.mul(rho).mul(&p.dagger());
        for (o, t) in out.a.iter_mut().zip(&term.a) {
            *o += t * c(rate / k, 0.0);
        }
    }
    out
}

fn pauli_or_id(code: usize, qubit: usize, n: usize) -> CMat {
    match code {
        0 => CMat::identity(1 << n),
        1 => embed_1q(&mat_pauli(PauliAxis::X), qubit, n),
        2 => embed_1q(&mat_pauli(PauliAxis::Y), qubit, n),
        3 => embed_1q(&mat_pauli(PauliAxis::Z), qubit, n),
        _ => unreachable!(),
    }
}

/// Decomposition identities hold as matrix products; sanity-check the
/// oracle itself once so downstream failures implicate the library.
pub fn oracle_self_check() {
    let theta = 0.613;
    let product = mat_rz(PI)
        .mul(&mat_sx())
        .mul(&mat_rz(PI + theta))
        .mul(&mat_sx());
    assert!(product.phase_equal(&mat_ry(theta), 1e-12));
}
