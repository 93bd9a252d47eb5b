//! Mixed-field Ising model on a loop:
//! `H = −J Σ Z_i Z_{i+1} − h_x Σ X_i − h_z Σ Z_i`.

mod perturbation;
mod spectrum;

pub use perturbation::{
    perturbative_energy_large_hx, perturbative_energy_small_hx, perturbative_energy_small_hz,
};
pub use spectrum::{exact_spectrum, matvec_into, SpectrumResult};

use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// Model parameters. `J` is conventionally 1, fixing the energy scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IsingParams {
    pub n: usize,
    pub j: f64,
    pub h_x: f64,
    pub h_z: f64,
    /// Cyclic boundary; always true in this study, kept explicit.
    pub cyclic: bool,
}

impl IsingParams {
    pub fn new(n: usize, j: f64, h_x: f64, h_z: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::Precondition(format!("need n ≥ 2 spins, got {n}")));
        }
        Ok(Self {
            n,
            j,
            h_x,
            h_z,
            cyclic: true,
        })
    }
}

/// Which Pauli string a term is.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TermKind {
    Zz,
    X,
    Z,
}

/// One measurable term of the expanded Hamiltonian.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PauliTerm {
    pub coefficient: f64,
    pub support: Vec<usize>,
    pub kind: TermKind,
}

/// Expands the Hamiltonian into its `3n` measurable terms: `n` ZZ terms
/// with coefficient −J on adjacent pairs, `n` X and `n` Z single-site
/// terms with −h_x and −h_z. Zero coefficients are kept so downstream
/// pipelines see a uniform term list.
pub fn expand_terms(p: &IsingParams) -> Vec<PauliTerm> {
    let mut terms = Vec::with_capacity(3 * p.n);
    for i in 0..p.n {
        terms.push(PauliTerm {
            coefficient: -p.j,
            support: vec![i, (i + 1) % p.n],
            kind: TermKind::Zz,
        });
    }
    for i in 0..p.n {
        terms.push(PauliTerm {
            coefficient: -p.h_x,
            support: vec![i],
            kind: TermKind::X,
        });
    }
    for i in 0..p.n {
        terms.push(PauliTerm {
            coefficient: -p.h_z,
            support: vec![i],
            kind: TermKind::Z,
        });
    }
    terms
}
