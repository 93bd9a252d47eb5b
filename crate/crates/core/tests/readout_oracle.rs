//! Readout algebra against independent oracles: exhaustive confusion-matrix
//! propagation, Monte Carlo bit flips, and the extremal-distribution
//! constructions behind the two-qubit bounds.

mod common;

use mitiq_forge_core::readout::{
    biased_parity_approx, biased_parity_exact, biased_parity_n1, biased_parity_n2_bounds,
    mitigate_parity, ReadoutRates,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn parity(q: usize) -> f64 {
    if q.count_ones() % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Dirichlet(1) sample over `dim` outcomes via normalized exponentials.
fn random_simplex(rng: &mut ChaCha8Rng, dim: usize) -> Vec<f64> {
    let mut f: Vec<f64> = (0..dim).map(|_| -rng.gen::<f64>().max(1e-300).ln()).collect();
    let total: f64 = f.iter().sum();
    f.iter_mut().for_each(|x| *x /= total);
    f
}

/// Distribution with an exact target parity: mass (1±p)/2 spread over the
/// even/odd parity classes.
fn random_simplex_with_parity(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Vec<f64> {
    let dim = 1usize << n;
    let mut f = vec![0.0; dim];
    let (even, odd): (Vec<usize>, Vec<usize>) = (0..dim).partition(|&q| parity(q) > 0.0);
    for (class, mass) in [(even, (1.0 + p) / 2.0), (odd, (1.0 - p) / 2.0)] {
        let weights = random_simplex(rng, class.len());
        for (q, w) in class.iter().zip(weights) {
            f[*q] = mass * w;
        }
    }
    f
}

/// Confusion-matrix propagation: f̃(q) = Σ_{q'} f(q')·Π per-bit flip
/// probability, then the parity of f̃. Independent of the closed form.
fn confusion_oracle(f: &[f64], rates: &ReadoutRates) -> f64 {
    let n = rates.len();
    let dim = 1usize << n;
    let mut biased = 0.0;
    for to in 0..dim {
        let mut f_tilde = 0.0;
        for (from, &p) in f.iter().enumerate() {
            if p == 0.0 {
                continue;
            }
            let mut w = p;
            for j in 0..n {
                let bit_from = from & (1 << j) != 0;
                let bit_to = to & (1 << j) != 0;
                w *= match (bit_from, bit_to) {
                    (false, false) => 1.0 - rates.e0[j],
                    (false, true) => rates.e0[j],
                    (true, true) => 1.0 - rates.e1[j],
                    (true, false) => rates.e1[j],
                };
            }
            f_tilde += w;
        }
        biased += parity(to) * f_tilde;
    }
    biased
}

#[test]
fn closed_form_equals_confusion_matrix_for_small_n() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for n in 1..=4 {
        let rates = ReadoutRates::new(
            (0..n).map(|_| rng.gen_range(0.0..0.2)).collect(),
            (0..n).map(|_| rng.gen_range(0.0..0.2)).collect(),
        )
        .unwrap();
        for _ in 0..200 {
            let f = random_simplex(&mut rng, 1 << n);
            let closed = biased_parity_exact(&f, &rates).unwrap();
            let oracle = confusion_oracle(&f, &rates);
            assert!(
                (closed - oracle).abs() < 1e-12,
                "N = {n}: {closed} vs {oracle}"
            );
        }
    }
}

#[test]
fn monte_carlo_bit_flips_agree_at_n3() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let rates = ReadoutRates::uniform(3, 0.05, 0.1).unwrap();
    let f = random_simplex(&mut rng, 8);
    let exact = biased_parity_exact(&f, &rates).unwrap();

    let cdf: Vec<f64> = f
        .iter()
        .scan(0.0, |acc, p| {
            *acc += p;
            Some(*acc)
        })
        .collect();
    let samples = 1_000_000usize;
    let mut sum = 0.0;
    for _ in 0..samples {
        let u = rng.gen::<f64>();
        let mut q = cdf.partition_point(|&x| x < u).min(7);
        for j in 0..3 {
            let bit = 1usize << j;
            let rate = if q & bit == 0 { 0.05 } else { 0.1 };
            if rng.gen_bool(rate) {
                q ^= bit;
            }
        }
        sum += parity(q);
    }
    let mc = sum / samples as f64;
    let se = ((1.0 - exact * exact).max(0.0) / samples as f64).sqrt();
    assert!(
        (mc - exact).abs() < 4.0 * se.max(1e-4),
        "MC {mc} vs exact {exact}"
    );
}

#[test]
fn two_qubit_bounds_hold_over_random_distributions() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let rates = ReadoutRates::uniform(2, 0.05, 0.1).unwrap();
    for _ in 0..2000 {
        let f = random_simplex(&mut rng, 4);
        let p: f64 = f.iter().enumerate().map(|(q, &fq)| parity(q) * fq).sum();
        let exact = biased_parity_exact(&f, &rates).unwrap();
        let (lo, hi, _) = biased_parity_n2_bounds(p, &rates);
        assert!(
            exact >= lo - 1e-12 && exact <= hi + 1e-12,
            "⟨P̃⟩ = {exact} outside [{lo}, {hi}] at ⟨P⟩ = {p}"
        );
    }
}

#[test]
fn additive_offset_shrinks_with_qubit_count() {
    // Offset |⟨P̃⟩| at ⟨P⟩ = 0 over parity-balanced distributions. N = 1
    // pins it at exactly e1 − e0; the typical offset then falls with N.
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut mean_offset = Vec::new();
    for n in 1..=4usize {
        let rates = ReadoutRates::uniform(n, 0.05, 0.1).unwrap();
        let reps = 400;
        let mut acc = 0.0;
        for _ in 0..reps {
            let f = random_simplex_with_parity(&mut rng, n, 0.0);
            acc += biased_parity_exact(&f, &rates).unwrap().abs();
        }
        mean_offset.push(acc / reps as f64);
    }
    assert!(
        (mean_offset[0] - 0.05).abs() < 1e-9,
        "N = 1 offset is exactly e1 − e0"
    );
    for w in mean_offset.windows(2) {
        assert!(
            w[1] < w[0],
            "offsets failed to shrink with N: {mean_offset:?}"
        );
    }
}

#[test]
fn large_n_approximation_improves_with_n() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let rms = |n: usize, rng: &mut ChaCha8Rng| {
        let rates = ReadoutRates::uniform(n, 0.05, 0.1).unwrap();
        let mut acc = 0.0;
        let reps = 300;
        for k in 0..reps {
            let p = -1.0 + 2.0 * (k % 21) as f64 / 20.0;
            let f = random_simplex_with_parity(rng, n, p);
            let exact = biased_parity_exact(&f, &rates).unwrap();
            let (approx, _) = biased_parity_approx(p, &rates);
            acc += (exact - approx) * (exact - approx);
        }
        (acc / reps as f64).sqrt()
    };
    let r3 = rms(3, &mut rng);
    let r10 = rms(10, &mut rng);
    assert!(
        r10 < 0.2 * r3,
        "rms at N = 10 ({r10}) should be well under 20% of N = 3 ({r3})"
    );
}

#[test]
fn non_expansiveness() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for n in 1..=4 {
        let rates = ReadoutRates::new(
            (0..n).map(|_| rng.gen_range(0.0..0.25)).collect(),
            (0..n).map(|_| rng.gen_range(0.0..0.25)).collect(),
        )
        .unwrap();
        let cap: f64 = rates
            .e0
            .iter()
            .zip(&rates.e1)
            .map(|(&a, &b)| (1.0 - 2.0 * a).max(1.0 - 2.0 * b))
            .product();
        for _ in 0..100 {
            let f = random_simplex(&mut rng, 1 << n);
            let exact = biased_parity_exact(&f, &rates).unwrap();
            assert!(exact.abs() <= cap + 1e-12);
            assert!(exact.abs() <= 1.0 + 1e-12);
        }
    }
}

#[test]
fn n1_and_mitigation_round_trip_through_the_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let rates = ReadoutRates::uniform(1, 0.07, 0.12).unwrap();
    for _ in 0..50 {
        let f = random_simplex(&mut rng, 2);
        let p = f[0] - f[1];
        let biased = confusion_oracle(&f, &rates);
        assert!((biased_parity_n1(p, &rates) - biased).abs() < 1e-12);
        let m = mitigate_parity(biased, 0.0, &rates).unwrap();
        assert!((m.value - p).abs() < 1e-12);
    }
}
