//! Alternating layered ansatz construction.
//!
//! The ansatz is an initial layer of Y-rotations on every qubit followed by
//! `l` layers, each a brickwork sublayer of CNOTs between neighboring loop
//! qubits and another full row of Y-rotations. Odd-numbered layers couple
//! the even pairs (0,1),(2,3),…; even-numbered layers couple the odd pairs
//! (1,2),(3,4),…,(n−1,0), wrapping around the loop. The CNOT control is the
//! first qubit of each listed pair.
//!
//! In the symmetric variant every rotation row is described by two angles,
//! one shared by all even qubits and one by all odd qubits, cutting the
//! parameter count from `n(l+1)` to `2(l+1)`.

use super::{Circuit, Gate};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// Rotation angles for an ansatz of `layers` layers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnsatzParams {
    pub layers: usize,
    pub values: Vec<f64>,
    pub symmetric: bool,
}

impl AnsatzParams {
    /// Full parameterization: `n(l+1)` angles, row-major by layer.
    pub fn full(layers: usize, values: Vec<f64>) -> Self {
        Self {
            layers,
            values,
            symmetric: false,
        }
    }

    /// Even/odd-symmetric parameterization: `2(l+1)` angles.
    pub fn symmetric(layers: usize, values: Vec<f64>) -> Self {
        Self {
            layers,
            values,
            symmetric: true,
        }
    }

    /// Angle count this shape requires on an `n`-qubit loop.
    pub fn expected_len(&self, n: usize) -> usize {
        if self.symmetric {
            2 * (self.layers + 1)
        } else {
            n * (self.layers + 1)
        }
    }

    fn validate(&self, n: usize) -> Result<()> {
        let expected = self.expected_len(n);
        if self.values.len() != expected {
            return Err(Error::ParameterShape {
                expected,
                got: self.values.len(),
            });
        }
        Ok(())
    }

    /// Angle of qubit `q` in rotation row `row`.
    fn angle(&self, row: usize, q: usize, n: usize) -> f64 {
        if self.symmetric {
            self.values[2 * row + (q % 2)]
        } else {
            self.values[row * n + q]
        }
    }
}

/// Expands a symmetric parameter vector to the full `n(l+1)` layout:
/// even qubits take the first angle of each layer pair, odd qubits the
/// second.
pub fn expand_symmetric(params: &AnsatzParams, n: usize) -> Result<AnsatzParams> {
    if !params.symmetric {
        return Err(Error::Precondition(
            "parameters are already in full form".into(),
        ));
    }
    params.validate(n)?;
    let mut values = Vec::with_capacity(n * (params.layers + 1));
    for row in 0..=params.layers {
        for q in 0..n {
            values.push(params.values[2 * row + (q % 2)]);
        }
    }
    Ok(AnsatzParams::full(params.layers, values))
}

/// Builds the alternating layered ansatz on an `n`-qubit loop.
///
/// Requires `n` even (the brickwork pairing needs it) and a parameter
/// vector matching the declared shape. All `n` qubits are measured by
/// default; term pipelines override the measured set downstream.
pub fn build_alt_ansatz(n: usize, params: &AnsatzParams) -> Result<Circuit> {
    if n < 2 || n % 2 != 0 {
        return Err(Error::UnsupportedTopology(format!(
            "alternating layered ansatz needs an even loop, got n={n}"
        )));
    }
    params.validate(n)?;

    let mut gates = Vec::with_capacity(n * (params.layers + 1) + params.layers * n / 2);
    for q in 0..n {
        gates.push(Gate::Ry {
            qubit: q,
            angle: params.angle(0, q, n),
        });
    }
    for layer in 1..=params.layers {
        // Odd layers couple (0,1),(2,3),…; even layers couple (1,2),…,(n−1,0).
        let start = if layer % 2 == 1 { 0 } else { 1 };
        for pair in 0..n / 2 {
            let control = (start + 2 * pair) % n;
            let target = (control + 1) % n;
            gates.push(Gate::Cnot { control, target });
        }
        for q in 0..n {
            gates.push(Gate::Ry {
                qubit: q,
                angle: params.angle(layer, q, n),
            });
        }
    }
    Circuit::new(n, gates, (0..n).collect())
}
