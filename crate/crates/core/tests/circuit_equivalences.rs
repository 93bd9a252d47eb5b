//! Unitary-equivalence checks for every circuit transform, against dense
//! matrix oracles and exact statevector comparison.

mod common;

use common::{circuit_unitary, gate_matrix, mat_h, mat_ry, oracle_self_check};
use mitiq_forge_core::circuit::{
    build_alt_ansatz, decompose_to_basis, fold_cnots, light_cone_filter, randomized_compile,
    AnsatzParams, Circuit, Gate,
};
use mitiq_forge_core::hamiltonian::{expand_terms, IsingParams, PauliTerm, TermKind};
use mitiq_forge_core::simulator::{exact_expectation, exact_state};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_ansatz(rng: &mut ChaCha8Rng, n: usize, layers: usize) -> Circuit {
    let values: Vec<f64> = (0..n * (layers + 1))
        .map(|_| rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI))
        .collect();
    build_alt_ansatz(n, &AnsatzParams::full(layers, values)).unwrap()
}

fn state_fidelity(a: &Circuit, b: &Circuit) -> f64 {
    let sa = exact_state(a).unwrap();
    let sb = exact_state(b).unwrap();
    sa.iter()
        .zip(&sb)
        .map(|(x, y)| x.conj() * y)
        .sum::<num_complex::Complex64>()
        .norm()
}

#[test]
fn ry_decomposition_matches_matrix_oracle_for_random_angles() {
    oracle_self_check();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    for _ in 0..100 {
        let theta = rng.gen_range(-2.0 * std::f64::consts::PI..2.0 * std::f64::consts::PI);
        let circuit = Circuit::new(1, vec![Gate::Ry { qubit: 0, angle: theta }], vec![0]).unwrap();
        let decomposed = decompose_to_basis(&circuit).unwrap();
        let u = circuit_unitary(&decomposed);
        assert!(
            u.phase_equal(&mat_ry(theta), 1e-12),
            "decomposition diverged at θ = {theta}"
        );
    }
}

#[test]
fn merged_h_ry_matches_matrix_oracle() {
    for theta in [0.0, std::f64::consts::PI / 3.0, std::f64::consts::PI, -1.1] {
        let circuit = Circuit::new(
            1,
            vec![Gate::Ry { qubit: 0, angle: theta }, Gate::H { qubit: 0 }],
            vec![0],
        )
        .unwrap();
        let decomposed = decompose_to_basis(&circuit).unwrap();
        assert_eq!(decomposed.gates().len(), 5);
        let expected = mat_h().mul(&mat_ry(theta));
        assert!(
            circuit_unitary(&decomposed).phase_equal(&expected, 1e-12),
            "merged pair diverged at θ = {theta}"
        );
    }
}

#[test]
fn decomposed_ansatz_preserves_the_state() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..5 {
        let c = random_ansatz(&mut rng, 6, 2);
        let d = decompose_to_basis(&c).unwrap();
        let f = state_fidelity(&c, &d);
        assert!((f - 1.0).abs() < 1e-10, "fidelity {f}");
    }
}

#[test]
fn folding_leaves_the_exact_state_alone() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let c = random_ansatz(&mut rng, 6, 3);
    for (scale, seed) in [(3.0, 0), (5.0, 1), (2.0, 42), (1.7, 9)] {
        let folded = fold_cnots(&c, scale, seed).unwrap();
        let f = state_fidelity(&c, &folded);
        assert!(
            (f - 1.0).abs() < 1e-10,
            "fold scale {scale} broke the state: fidelity {f}"
        );
    }
    // odd integer scale is an exact multiply
    let folded = fold_cnots(&c, 3.0, 0).unwrap();
    assert_eq!(folded.cnot_count(), 3 * c.cnot_count());
}

#[test]
fn all_sixteen_dressed_cnots_equal_the_bare_gate() {
    let bare = Circuit::new(
        2,
        vec![Gate::Cnot {
            control: 0,
            target: 1,
        }],
        vec![0, 1],
    )
    .unwrap();
    let bare_u = gate_matrix(&bare.gates()[0], 2);
    let mut seen = std::collections::HashSet::new();
    for seed in 0..200 {
        let dressed = randomized_compile(&bare, seed).unwrap();
        let u = circuit_unitary(&dressed);
        assert!(
            u.phase_equal(&bare_u, 1e-12),
            "dressing at seed {seed} is not CNOT-equivalent"
        );
        seen.insert(dressed.to_text());
    }
    // all 16 Pauli frames show up across seeds
    assert_eq!(seen.len(), 16, "saw {} distinct dressings", seen.len());
}

#[test]
fn dressed_ansatz_keeps_exact_term_expectations() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let n = 6;
    let c = decompose_to_basis(&random_ansatz(&mut rng, n, 2)).unwrap();
    let h = IsingParams::new(n, 1.0, 1.5, 0.1).unwrap();
    for seed in [0u64, 5, 99] {
        let dressed = randomized_compile(&c, seed).unwrap();
        for term in expand_terms(&h).iter().take(8) {
            let a = exact_expectation(&c, term).unwrap();
            let b = exact_expectation(&dressed, term).unwrap();
            assert!((a - b).abs() < 1e-10, "term {term:?} drifted: {a} vs {b}");
        }
    }
}

#[test]
fn light_cone_preserves_term_expectations_and_width() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for case in 0..20 {
        let n = 2 * rng.gen_range(2..=5usize); // 4..10 even
        let layers = rng.gen_range(0..=3usize);
        let circuit = random_ansatz(&mut rng, n, layers);
        let start = rng.gen_range(0..n);
        let (support, kind) = if rng.gen::<bool>() {
            (vec![start, (start + 1) % n], TermKind::Zz)
        } else {
            (vec![start], TermKind::Z)
        };
        let term = PauliTerm {
            coefficient: 1.0,
            support: support.clone(),
            kind,
        };
        let filtered = light_cone_filter(&circuit, &support).unwrap();
        assert_eq!(
            filtered.n_qubits(),
            (support.len() + 2 * layers).min(n),
            "case {case}: wrong cone width"
        );
        let filtered_term = PauliTerm {
            coefficient: 1.0,
            support: filtered.measured_qubits().to_vec(),
            kind,
        };
        let before = exact_expectation(&circuit, &term).unwrap();
        let after = exact_expectation(&filtered, &filtered_term).unwrap();
        assert!(
            (before - after).abs() < 1e-12,
            "case {case}: {before} vs {after}"
        );
    }
}

#[test]
fn transform_chain_composes() {
    // filter → decompose → fold → dress, checked against the unfiltered
    // exact expectation.
    let mut rng = ChaCha8Rng::seed_from_u64(37);
    let n = 8;
    let circuit = random_ansatz(&mut rng, n, 2);
    let term = PauliTerm {
        coefficient: 1.0,
        support: vec![3, 4],
        kind: TermKind::Zz,
    };
    let reference = exact_expectation(&circuit, &term).unwrap();

    let filtered = light_cone_filter(&circuit, &term.support).unwrap();
    let processed = randomized_compile(
        &fold_cnots(&decompose_to_basis(&filtered).unwrap(), 3.0, 5).unwrap(),
        17,
    )
    .unwrap();
    let processed_term = PauliTerm {
        coefficient: 1.0,
        support: processed.measured_qubits().to_vec(),
        kind: TermKind::Zz,
    };
    let value = exact_expectation(&processed, &processed_term).unwrap();
    assert!(
        (value - reference).abs() < 1e-10,
        "pipeline drifted: {value} vs {reference}"
    );
}

#[test]
fn identity_window_skips_relabeling() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let c = random_ansatz(&mut rng, 4, 3); // window 2+6 ≥ 4 ⇒ full loop
    let filtered = light_cone_filter(&c, &[1, 2]).unwrap();
    assert_eq!(filtered.n_qubits(), 4);
    assert_eq!(filtered.gates(), c.gates());
    assert_eq!(filtered.measured_qubits(), &[1, 2]);
}

// The 4×4 CMat path is exercised above; spot-check the unitary builder
// against the statevector simulator on a random 3-qubit circuit.
#[test]
fn unitary_builder_agrees_with_simulator() {
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    let gates = vec![
        Gate::Ry {
            qubit: 0,
            angle: rng.gen_range(-1.0..1.0),
        },
        Gate::SqrtX { qubit: 2 },
        Gate::Cnot {
            control: 0,
            target: 1,
        },
        Gate::Rz {
            qubit: 1,
            angle: rng.gen_range(-1.0..1.0),
        },
        Gate::Cnot {
            control: 2,
            target: 1,
        },
    ];
    let c = Circuit::new(3, gates, vec![0, 1, 2]).unwrap();
    let u = circuit_unitary(&c);
    let state = exact_state(&c).unwrap();
    // first column of U is the state prepared from |000⟩
    for (i, amp) in state.iter().enumerate() {
        assert!((u[(i, 0)] - amp).norm() < 1e-12);
    }
}
