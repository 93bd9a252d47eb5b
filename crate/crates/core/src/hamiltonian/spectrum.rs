//! Exact lowest eigenpairs of the Ising Hamiltonian.
//!
//! The Hamiltonian is never stored: ZZ and Z terms are a precomputed
//! diagonal, and each X term is a single bit flip, so `H·v` streams over
//! the `2^n` amplitude vector. A thick-restart Lanczos iteration with full
//! reorthogonalization extracts the two lowest eigenvalues; the converged
//! ground Ritz vector stays locked in the basis while the iteration
//! continues, which deflates it from the search for the second eigenvalue.

use super::IsingParams;
use crate::exec::{self, ExecPolicy};
use crate::{Error, Result};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Largest loop the spectrum solver accepts (2^n amplitudes).
pub const MAX_SPECTRUM_QUBITS: usize = 24;

const TOL: f64 = 1e-8;
const MAX_MATVECS: usize = 2000;
const BASIS_CAP: usize = 40;
const KEEP: usize = 12;

/// Lowest two eigenvalues, optionally with the ground eigenvector.
#[derive(Debug, Clone, serde::Serialize)]
pub struct SpectrumResult {
    pub ground_energy: f64,
    pub first_excited_energy: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ground_vector: Option<Vec<f64>>,
}

impl SpectrumResult {
    /// Gap below 1e-8 is reported as a degenerate ground space.
    pub fn is_degenerate(&self) -> bool {
        self.first_excited_energy - self.ground_energy < 1e-8
    }
}

/// Diagonal of H in the computational basis (ZZ and Z terms).
pub(crate) fn diagonal(p: &IsingParams) -> Vec<f64> {
    let dim = 1usize << p.n;
    let mut diag = vec![0.0; dim];
    exec::for_each_chunk_mut(ExecPolicy::default(), &mut diag, 1 << 12, |chunk_idx, c| {
        let base = chunk_idx << 12;
        for (off, d) in c.iter_mut().enumerate() {
            let i = base + off;
            let mut acc = 0.0;
            for q in 0..p.n {
                let z_q = 1.0 - 2.0 * ((i >> q) & 1) as f64;
                let z_next = 1.0 - 2.0 * ((i >> ((q + 1) % p.n)) & 1) as f64;
                acc -= p.j * z_q * z_next + p.h_z * z_q;
            }
            *d = acc;
        }
    });
    diag
}

/// `out = H·v` with a precomputed diagonal.
pub fn matvec_into(p: &IsingParams, diag: &[f64], v: &[f64], out: &mut [f64]) {
    let n = p.n;
    let h_x = p.h_x;
    exec::for_each_chunk_mut(ExecPolicy::default(), out, 1 << 12, |chunk_idx, c| {
        let base = chunk_idx << 12;
        for (off, o) in c.iter_mut().enumerate() {
            let i = base + off;
            let mut acc = diag[i] * v[i];
            for q in 0..n {
                acc -= h_x * v[i ^ (1 << q)];
            }
            *o = acc;
        }
    });
}

/// Lowest two eigenvalues of H via matrix-free thick-restart Lanczos.
///
/// Converges both Ritz pairs to residual below 1e-8 or returns a
/// convergence error after the matvec cap. Dimensions up to 2^5 are sent
/// to a dense solver, where a Krylov basis would exhaust the space.
pub fn exact_spectrum(p: &IsingParams, want_vector: bool) -> Result<SpectrumResult> {
    if p.n > MAX_SPECTRUM_QUBITS {
        return Err(Error::SizeCap {
            n: p.n,
            cap: MAX_SPECTRUM_QUBITS,
        });
    }
    let diag = diagonal(p);
    if p.n <= 5 {
        return dense_spectrum(p, &diag, want_vector);
    }
    lanczos_spectrum(p, &diag, want_vector)
}

fn dense_spectrum(p: &IsingParams, diag: &[f64], want_vector: bool) -> Result<SpectrumResult> {
    let dim = 1usize << p.n;
    let mut h = DMatrix::<f64>::zeros(dim, dim);
    let mut unit = vec![0.0; dim];
    let mut col = vec![0.0; dim];
    for j in 0..dim {
        unit[j] = 1.0;
        matvec_into(p, diag, &unit, &mut col);
        unit[j] = 0.0;
        for i in 0..dim {
            h[(i, j)] = col[i];
        }
    }
    let eig = h.symmetric_eigen();
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let ground_vector = want_vector.then(|| {
        let col = eig.eigenvectors.column(order[0]);
        col.iter().copied().collect()
    });
    Ok(SpectrumResult {
        ground_energy: eig.eigenvalues[order[0]],
        first_excited_energy: eig.eigenvalues[order[1]],
        ground_vector,
    })
}

/// One classical Gram-Schmidt sweep of `w` against `basis`, with a second
/// sweep when cancellation ate most of the norm (DGKS criterion).
fn orthogonalize(basis: &[Vec<f64>], w: &mut [f64]) {
    for _pass in 0..2 {
        let before = norm(w);
        let coeffs: Vec<f64> = basis.iter().map(|q| dot(q, w)).collect();
        for (q, &c) in basis.iter().zip(&coeffs) {
            if c != 0.0 {
                axpy(-c, q, w);
            }
        }
        if norm(w) > 0.5 * before {
            break;
        }
    }
}

fn lanczos_spectrum(p: &IsingParams, diag: &[f64], want_vector: bool) -> Result<SpectrumResult> {
    let dim = 1usize << p.n;
    let m_max = BASIS_CAP.min(dim);
    let keep = KEEP.min(m_max - 2);

    let mut rng = ChaCha8Rng::seed_from_u64(0x1597_c0de);
    let mut v: Vec<f64> = (0..dim).map(|_| rng.gen::<f64>() - 0.5).collect();
    let inv = 1.0 / norm(&v);
    v.iter_mut().for_each(|x| *x *= inv);

    let mut basis: Vec<Vec<f64>> = vec![v];
    // Projected matrix entries: leading block is diag(theta) coupled to the
    // first post-restart vector, then ordinary tridiagonal terms.
    let mut theta: Vec<f64> = Vec::new(); // kept Ritz values
    let mut coupling: Vec<f64> = Vec::new(); // their coupling to basis[kept]
    let mut alphas: Vec<f64> = Vec::new();
    let mut betas: Vec<f64> = Vec::new();

    let mut w = vec![0.0; dim];
    let mut matvecs = 0usize;
    let mut last_residual = f64::INFINITY;

    loop {
        let j = basis.len() - 1; // index of the vector being processed
        matvec_into(p, diag, &basis[j], &mut w);
        matvecs += 1;

        let alpha = dot(&basis[j], &w);
        alphas.push(alpha);
        orthogonalize(&basis, &mut w);
        let beta = norm(&w);

        // Ritz extraction on the completed projected matrix.
        let m = basis.len();
        let t = projected_matrix(&theta, &coupling, &alphas, &betas, m);
        let eig = t.symmetric_eigen();
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let res = |rank: usize| beta * eig.eigenvectors[(m - 1, order[rank])].abs();
        if m >= 2 {
            last_residual = res(0).max(res(1));
        }

        if m >= 2 && last_residual < TOL {
            let e0 = eig.eigenvalues[order[0]];
            let e1 = eig.eigenvalues[order[1]];
            let ground_vector = want_vector.then(|| {
                let mut g = vec![0.0; dim];
                for (row, q) in basis.iter().enumerate() {
                    axpy(eig.eigenvectors[(row, order[0])], q, &mut g);
                }
                let inv = 1.0 / norm(&g);
                g.iter_mut().for_each(|x| *x *= inv);
                g
            });
            return Ok(SpectrumResult {
                ground_energy: e0,
                first_excited_energy: e1,
                ground_vector,
            });
        }
        if matvecs >= MAX_MATVECS {
            return Err(Error::Convergence {
                residual: last_residual,
                iterations: matvecs,
            });
        }

        if beta < 1e-12 * alpha.abs().max(1.0) || m == dim {
            // Invariant subspace: continue in a fresh random direction.
            let mut r: Vec<f64> = (0..dim).map(|_| rng.gen::<f64>() - 0.5).collect();
            orthogonalize(&basis, &mut r);
            let nrm = norm(&r);
            if nrm < 1e-12 || m == dim {
                return Err(Error::Convergence {
                    residual: last_residual,
                    iterations: matvecs,
                });
            }
            r.iter_mut().for_each(|x| *x /= nrm);
            // Restart the tridiagonal run from the new direction.
            let (new_theta, new_coupling, new_basis) =
                thick_restart(&basis, &theta, &coupling, &alphas, &betas, 0.0, keep, r);
            theta = new_theta;
            coupling = new_coupling;
            basis = new_basis;
            alphas.clear();
            betas.clear();
            continue;
        }

        let mut r = std::mem::replace(&mut w, vec![0.0; dim]);
        r.iter_mut().for_each(|x| *x /= beta);

        if m == m_max {
            let (new_theta, new_coupling, new_basis) =
                thick_restart(&basis, &theta, &coupling, &alphas, &betas, beta, keep, r);
            theta = new_theta;
            coupling = new_coupling;
            basis = new_basis;
            alphas.clear();
            betas.clear();
        } else {
            betas.push(beta);
            basis.push(r);
        }
    }
}

/// Assembles the projected matrix over the current basis.
///
/// Layout: `theta` values on the leading diagonal, their `coupling` column
/// at index `k = theta.len()`, then the running tridiagonal (`alphas`,
/// `betas`) for vectors `k..m`.
fn projected_matrix(
    theta: &[f64],
    coupling: &[f64],
    alphas: &[f64],
    betas: &[f64],
    m: usize,
) -> DMatrix<f64> {
    let k = theta.len();
    let mut t = DMatrix::<f64>::zeros(m, m);
    for (i, &th) in theta.iter().enumerate() {
        t[(i, i)] = th;
        t[(i, k)] = coupling[i];
        t[(k, i)] = coupling[i];
    }
    for (off, &a) in alphas.iter().enumerate() {
        t[(k + off, k + off)] = a;
    }
    for (off, &b) in betas.iter().enumerate() {
        t[(k + off, k + off + 1)] = b;
        t[(k + off + 1, k + off)] = b;
    }
    t
}

/// Collapses the basis to the `keep` lowest Ritz vectors plus the residual
/// direction `r`, returning the new arrow-matrix data.
#[allow(clippy::too_many_arguments)]
fn thick_restart(
    basis: &[Vec<f64>],
    theta: &[f64],
    coupling: &[f64],
    alphas: &[f64],
    betas: &[f64],
    beta_last: f64,
    keep: usize,
    r: Vec<f64>,
) -> (Vec<f64>, Vec<f64>, Vec<Vec<f64>>) {
    let m = basis.len();
    let dim = basis[0].len();
    let t = projected_matrix(theta, coupling, alphas, betas, m);
    let eig = t.symmetric_eigen();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));

    let keep = keep.min(m);
    let mut new_theta = Vec::with_capacity(keep);
    let mut new_coupling = Vec::with_capacity(keep);
    let mut new_basis: Vec<Vec<f64>> = Vec::with_capacity(keep + 1);
    for &col in order.iter().take(keep) {
        new_theta.push(eig.eigenvalues[col]);
        new_coupling.push(beta_last * eig.eigenvectors[(m - 1, col)]);
        let mut y = vec![0.0; dim];
        for (row, q) in basis.iter().enumerate() {
            axpy(eig.eigenvectors[(row, col)], q, &mut y);
        }
        new_basis.push(y);
    }
    new_basis.push(r);
    (new_theta, new_coupling, new_basis)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn axpy(c: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += c * xi;
    }
}
