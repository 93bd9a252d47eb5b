//! Second-order perturbative ground-state energies in the model's three
//! analytically tractable limits.

use super::{spectrum, IsingParams};
use crate::{Error, Result};
use nalgebra::DMatrix;

/// Small transverse field: `E = −n(h_z + J + h_x²/(2h_z + 4J))`.
///
/// The third-order term vanishes identically (the perturbation has no
/// matrix elements between distinct single-flip states), so the truncation
/// error is actually O(h_x⁴).
pub fn perturbative_energy_small_hx(p: &IsingParams) -> Result<f64> {
    let denom = 2.0 * p.h_z + 4.0 * p.j;
    if denom.abs() < 1e-12 {
        return Err(Error::SingularDenominator(
            "2·h_z + 4·J = 0 in the small-h_x expansion".into(),
        ));
    }
    Ok(-(p.n as f64) * (p.h_z + p.j + p.h_x * p.h_x / denom))
}

/// Large transverse field: `E = −n(h_x + (2h_z² + J²)/(4h_x))`.
pub fn perturbative_energy_large_hx(p: &IsingParams) -> Result<f64> {
    if p.h_x <= 0.0 {
        return Err(Error::SingularDenominator(
            "h_x must be positive in the large-h_x expansion".into(),
        ));
    }
    Ok(-(p.n as f64) * (p.h_x + (2.0 * p.h_z * p.h_z + p.j * p.j) / (4.0 * p.h_x)))
}

/// Small longitudinal field: numerical second-order perturbation theory
/// around the exact h_z = 0 eigenbasis with `V = −Σ Z_i`.
///
/// The transverse-field model at finite size can carry an (almost)
/// degenerate ground doublet; the first-order correction is then the
/// lowest eigenvalue of `V` inside the multiplet, and the second order sums
/// over states outside it. Needs the full eigendecomposition, so the spin
/// count is capped at 14 (and is only practical to ~12).
pub fn perturbative_energy_small_hz(p: &IsingParams) -> Result<f64> {
    const MAX_N: usize = 14;
    const MULTIPLET_GAP: f64 = 1e-8;
    const SEPARATION_GAP: f64 = 1e-10;
    if p.n > MAX_N {
        return Err(Error::SizeCap { n: p.n, cap: MAX_N });
    }
    let dim = 1usize << p.n;
    let base = IsingParams {
        h_z: 0.0,
        ..p.clone()
    };

    // Dense H0 from the matrix-free kernel.
    let diag = spectrum::diagonal(&base);
    let mut h0 = DMatrix::<f64>::zeros(dim, dim);
    let mut unit = vec![0.0; dim];
    let mut col = vec![0.0; dim];
    for j in 0..dim {
        unit[j] = 1.0;
        spectrum::matvec_into(&base, &diag, &unit, &mut col);
        unit[j] = 0.0;
        for i in 0..dim {
            h0[(i, j)] = col[i];
        }
    }
    let eig = h0.symmetric_eigen();
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let e0 = eig.eigenvalues[order[0]];

    // Ground multiplet and the gap that separates it from the rest.
    let mut multiplet = Vec::new();
    for &k in &order {
        if eig.eigenvalues[k] - e0 <= MULTIPLET_GAP {
            multiplet.push(k);
        } else {
            break;
        }
    }
    let d = multiplet.len();
    if d < dim {
        let edge = eig.eigenvalues[order[d]];
        let top = eig.eigenvalues[multiplet[d - 1]];
        if edge - top < SEPARATION_GAP {
            return Err(Error::Degeneracy { gap: edge - top });
        }
    }

    // V = −Σ Z_i is diagonal in the computational basis.
    let v_diag: Vec<f64> = (0..dim)
        .map(|i| {
            -(0..p.n)
                .map(|q| 1.0 - 2.0 * ((i >> q) & 1) as f64)
                .sum::<f64>()
        })
        .collect();

    // First order: lowest eigenvalue of V projected on the multiplet.
    let mut v_block = DMatrix::<f64>::zeros(d, d);
    for (a, &ka) in multiplet.iter().enumerate() {
        for (b, &kb) in multiplet.iter().enumerate() {
            let mut acc = 0.0;
            for i in 0..dim {
                acc += eig.eigenvectors[(i, ka)] * v_diag[i] * eig.eigenvectors[(i, kb)];
            }
            v_block[(a, b)] = acc;
        }
    }
    let (first_order, ground_coeffs) = if d == 1 {
        (v_block[(0, 0)], vec![1.0])
    } else {
        let veig = v_block.symmetric_eigen();
        let mut vorder: Vec<usize> = (0..d).collect();
        vorder.sort_by(|&a, &b| veig.eigenvalues[a].total_cmp(&veig.eigenvalues[b]));
        let coeffs = (0..d).map(|a| veig.eigenvectors[(a, vorder[0])]).collect();
        (veig.eigenvalues[vorder[0]], coeffs)
    };

    // |g̃⟩ = Σ c_a |multiplet_a⟩ in the computational basis.
    let mut g = vec![0.0; dim];
    for (a, &ka) in multiplet.iter().enumerate() {
        for i in 0..dim {
            g[i] += ground_coeffs[a] * eig.eigenvectors[(i, ka)];
        }
    }

    // Second order over states outside the multiplet.
    let mut second_order = 0.0;
    for &k in order.iter().skip(d) {
        let mut vk0 = 0.0;
        for i in 0..dim {
            vk0 += eig.eigenvectors[(i, k)] * v_diag[i] * g[i];
        }
        second_order += vk0 * vk0 / (e0 - eig.eigenvalues[k]);
    }

    Ok(e0 + p.h_z * first_order + p.h_z * p.h_z * second_order)
}
