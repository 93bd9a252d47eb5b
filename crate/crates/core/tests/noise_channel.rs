//! Trajectory noise against the exact density-matrix channel.
//!
//! The stochastic-Pauli sampler is only correct in the mean; these tests
//! pin that contract with a closed-form two-qubit channel oracle.

mod common;

use common::{channel_distribution, distribution_parity};
use mitiq_forge_core::circuit::{
    build_alt_ansatz, decompose_to_basis, light_cone_filter, AnsatzParams, Circuit, Gate,
};
use mitiq_forge_core::device::DeviceModel;
use mitiq_forge_core::hamiltonian::{PauliTerm, TermKind};
use mitiq_forge_core::simulator::{parity_expectation, sample_noisy, NoiseConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn two_qubit_noise(device: DeviceModel, seed: u64, per_traj: u64) -> NoiseConfig {
    let mut nc = NoiseConfig::full_loop(device, seed).unwrap();
    nc.window = vec![0, 1];
    nc.shots_per_trajectory = per_traj;
    nc
}

#[test]
fn single_cnot_parity_damping_matches_closed_form() {
    // |00⟩ → CNOT with depolarizing p: 8 of the 15 Paulis flip the ZZ
    // parity, so ⟨ZZ⟩ = 1 − (16/15)p.
    let p = 0.15;
    let circuit = Circuit::new(
        2,
        vec![Gate::Cnot {
            control: 0,
            target: 1,
        }],
        vec![0, 1],
    )
    .unwrap();
    let device = DeviceModel::uniform(3, p, 0.0, 0.0, 0.0).unwrap();
    let nc = two_qubit_noise(device.clone(), 5, 1);
    let shots = 100_000;
    let table = sample_noisy(&circuit, &nc, shots).unwrap();
    let (value, sigma) = parity_expectation(&table, &[0, 1]).unwrap();

    let expected = 1.0 - 16.0 / 15.0 * p;
    assert!(
        (value - expected).abs() < 4.0 * sigma,
        "sampled {value} vs closed form {expected} (σ {sigma})"
    );
    // and the closed form agrees with the density-matrix oracle
    let oracle = distribution_parity(&channel_distribution(&circuit, &device, &[0, 1], false));
    assert!((oracle - expected).abs() < 1e-12);
}

#[test]
fn trajectory_mean_converges_to_the_channel() {
    // Random 2-qubit basis circuit, gate + readout noise, 200k one-shot
    // trajectories against the exact channel distribution.
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut gates = vec![];
    for _ in 0..6 {
        match rng.gen_range(0..3u8) {
            0 => gates.push(Gate::SqrtX {
                qubit: rng.gen_range(0..2),
            }),
            1 => gates.push(Gate::Rz {
                qubit: rng.gen_range(0..2),
                angle: rng.gen_range(-1.5..1.5),
            }),
            _ => {
                let control = rng.gen_range(0..2);
                gates.push(Gate::Cnot {
                    control,
                    target: 1 - control,
                });
            }
        }
    }
    let circuit = Circuit::new(2, gates, vec![0, 1]).unwrap();
    let device = DeviceModel::uniform(3, 0.08, 0.01, 0.03, 0.06).unwrap();
    let nc = two_qubit_noise(device.clone(), 11, 1);

    let shots = 200_000u64;
    let table = sample_noisy(&circuit, &nc, shots).unwrap();
    let (value, sigma) = parity_expectation(&table, &[0, 1]).unwrap();

    let oracle_probs = channel_distribution(&circuit, &device, &[0, 1], true);
    let oracle = distribution_parity(&oracle_probs);
    assert!(
        (value - oracle).abs() < 4.0 * sigma,
        "trajectory mean {value} vs channel {oracle} (σ {sigma})"
    );

    // full outcome distribution agrees bin by bin at 5σ
    for (bits, key) in [(0, "00"), (1, "10"), (2, "01"), (3, "11")] {
        let (p, s) = table.outcome_probability(key).unwrap();
        assert!(
            (p - oracle_probs[bits]).abs() < 5.0 * s.max(1e-4),
            "outcome {key}: sampled {p} vs {q}",
            q = oracle_probs[bits]
        );
    }
}

#[test]
fn readout_flips_match_confusion_matrix() {
    let circuit = Circuit::new(2, vec![Gate::SqrtX { qubit: 0 }], vec![0, 1]).unwrap();
    let device = DeviceModel::uniform(3, 0.0, 0.0, 0.04, 0.09).unwrap();
    let nc = two_qubit_noise(device.clone(), 3, 64);
    let table = sample_noisy(&circuit, &nc, 150_000).unwrap();
    let oracle = channel_distribution(&circuit, &device, &[0, 1], true);
    for (bits, key) in [(0usize, "00"), (1, "10"), (2, "01"), (3, "11")] {
        let (p, s) = table.outcome_probability(key).unwrap();
        assert!(
            (p - oracle[bits]).abs() < 5.0 * s.max(1e-4),
            "outcome {key}: {p} vs {o}",
            o = oracle[bits]
        );
    }
}

#[test]
fn light_cone_invariance_under_in_cone_noise() {
    // Restrict device noise to the cone window; the filtered and
    // unfiltered noisy expectations must then agree in distribution.
    let n = 8;
    let layers = 1;
    let values: Vec<f64> = (0..n * (layers + 1)).map(|i| 0.3 + 0.1 * i as f64).collect();
    let ansatz = build_alt_ansatz(n, &AnsatzParams::full(layers, values)).unwrap();
    let support = vec![2, 3];

    let filtered = decompose_to_basis(&light_cone_filter(&ansatz, &support).unwrap()).unwrap();
    let window: Vec<usize> =
        mitiq_forge_core::circuit::light_cone_window(&ansatz, &support)
            .unwrap()
            .original_qubits;

    // device with noise only on the window's qubits/edges
    let base = 0.04;
    let mut edges = std::collections::BTreeMap::new();
    for q in 0..n {
        let a = q;
        let b = (q + 1) % n;
        let in_window = window.contains(&a) && window.contains(&b);
        edges.insert((a, b), if in_window { base } else { 0.0 });
    }
    let sq: Vec<f64> = (0..n)
        .map(|q| if window.contains(&q) { 0.004 } else { 0.0 })
        .collect();
    let device = DeviceModel::new(n, edges, vec![0.0; n], vec![0.0; n], sq).unwrap();

    // unfiltered run on the full loop
    let full = decompose_to_basis(&ansatz).unwrap().with_measured(support.clone()).unwrap();
    let nc_full = NoiseConfig {
        shots_per_trajectory: 8,
        ..NoiseConfig::full_loop(device.clone(), 19).unwrap()
    };
    let shots = 60_000;
    let t_full = sample_noisy(&full, &nc_full, shots).unwrap();
    let (v_full, s_full) = parity_expectation(&t_full, &support).unwrap();

    // filtered run with the cone window
    let nc_filtered = NoiseConfig {
        window: window.clone(),
        shots_per_trajectory: 8,
        ..NoiseConfig::full_loop(device, 23).unwrap()
    };
    let t_filt = sample_noisy(&filtered, &nc_filtered, shots).unwrap();
    let (v_filt, s_filt) =
        parity_expectation(&t_filt, filtered.measured_qubits()).unwrap();

    let sigma = s_full.hypot(s_filt);
    assert!(
        (v_full - v_filt).abs() < 4.0 * sigma,
        "filtered {v_filt} vs unfiltered {v_full} (σ {sigma})"
    );
}

#[test]
fn zero_rate_device_reduces_to_exact_sampling() {
    let n = 6;
    let ansatz = build_alt_ansatz(n, &AnsatzParams::full(1, vec![0.5; n * 2])).unwrap();
    let circuit = decompose_to_basis(&ansatz)
        .unwrap()
        .with_measured(vec![0])
        .unwrap();
    let device = DeviceModel::uniform(n, 0.0, 0.0, 0.0, 0.0).unwrap();
    let nc = NoiseConfig::full_loop(device, 31).unwrap();
    let table = sample_noisy(&circuit, &nc, 50_000).unwrap();
    let (v, s) = parity_expectation(&table, &[0]).unwrap();
    let term = PauliTerm {
        coefficient: 1.0,
        support: vec![0],
        kind: TermKind::Z,
    };
    let exact = mitiq_forge_core::simulator::exact_expectation(&circuit, &term).unwrap();
    assert!((v - exact).abs() < 4.0 * s.max(1e-3));
}
