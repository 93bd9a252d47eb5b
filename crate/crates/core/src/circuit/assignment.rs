//! Logical-to-physical qubit assignments on a loop.
//!
//! A loop of `n` qubits admits exactly `2n` adjacency-preserving maps onto
//! itself: `n` rotations, each with or without a reflection (the dihedral
//! group). Averaging measurements over several assignments washes out
//! qubit-specific biases; scoring them against a device profile picks the
//! least noisy ones.

use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// One adjacency-preserving map from logical loop positions to physical.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QubitAssignment {
    mapping: Vec<usize>,
    rotation: usize,
    reflected: bool,
}

impl QubitAssignment {
    /// Assignment that rotates by `rotation` and optionally reflects:
    /// logical `i` maps to `(rotation + i) mod n`, or `(rotation − i) mod n`
    /// when reflected.
    pub fn new(n: usize, rotation: usize, reflected: bool) -> Result<Self> {
        if n < 3 {
            return Err(Error::UnsupportedTopology(format!(
                "loop assignments need n ≥ 3, got {n}"
            )));
        }
        if rotation >= n {
            return Err(Error::Precondition(format!(
                "rotation {rotation} outside [0, {n})"
            )));
        }
        let mapping = (0..n)
            .map(|i| {
                if reflected {
                    (rotation + n - i) % n
                } else {
                    (rotation + i) % n
                }
            })
            .collect();
        Ok(Self {
            mapping,
            rotation,
            reflected,
        })
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::new(n, 0, false)
    }

    /// Physical position of logical qubit `logical`.
    pub fn physical(&self, logical: usize) -> usize {
        self.mapping[logical]
    }

    pub fn mapping(&self) -> &[usize] {
        &self.mapping
    }

    pub fn rotation(&self) -> usize {
        self.rotation
    }

    pub fn reflected(&self) -> bool {
        self.reflected
    }

    pub fn n(&self) -> usize {
        self.mapping.len()
    }

    /// Neighbors on the logical loop stay neighbors on the physical loop.
    pub fn preserves_adjacency(&self) -> bool {
        let n = self.mapping.len();
        (0..n).all(|i| {
            let a = self.mapping[i];
            let b = self.mapping[(i + 1) % n];
            (a + 1) % n == b || (b + 1) % n == a
        })
    }
}

/// All `2n` assignments, ordered by (rotation, reflected).
pub fn enumerate_assignments(n: usize) -> Result<Vec<QubitAssignment>> {
    let mut out = Vec::with_capacity(2 * n);
    for rotation in 0..n {
        for reflected in [false, true] {
            out.push(QubitAssignment::new(n, rotation, reflected)?);
        }
    }
    Ok(out)
}
