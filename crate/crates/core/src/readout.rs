//! Closed-form algebra of uncorrelated readout errors on parity
//! measurements: forward bias prediction, two-qubit bounds, the large-N
//! approximation, and the inversions used for mitigation.
//!
//! For a length-N parity with per-bit flip rates `e0` (0 read as 1) and
//! `e1` (1 read as 0), the biased expectation is
//!
//! ```text
//! ⟨P̃⟩ = Σ_q P(q) f(q) (1−2e0)^{n0(q)} (1−2e1)^{n1(q)}
//! ```
//!
//! which specializes to the exact affine map at N = 1, is bracketed by
//! sharp bounds at N = 2, and is well approximated by
//! `(1−e0−e1)^N ⟨P⟩` once N ≳ 3.

use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// Per-qubit asymmetric readout error rates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReadoutRates {
    pub e0: Vec<f64>,
    pub e1: Vec<f64>,
}

impl ReadoutRates {
    pub fn new(e0: Vec<f64>, e1: Vec<f64>) -> Result<Self> {
        if e0.len() != e1.len() {
            return Err(Error::Precondition(format!(
                "rate lists differ in length: {} vs {}",
                e0.len(),
                e1.len()
            )));
        }
        if !e0.iter().chain(&e1).all(|p| (0.0..0.5).contains(p)) {
            return Err(Error::Precondition(
                "readout rates must lie in [0, 0.5)".into(),
            ));
        }
        Ok(Self { e0, e1 })
    }

    /// Same rates on every one of `n` qubits.
    pub fn uniform(n: usize, e0: f64, e1: f64) -> Result<Self> {
        Self::new(vec![e0; n], vec![e1; n])
    }

    pub fn len(&self) -> usize {
        self.e0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.e0.is_empty()
    }

    /// `Π_q (1 − e0(q) − e1(q))` — the slope every inversion divides by.
    pub fn damping_product(&self) -> f64 {
        self.e0
            .iter()
            .zip(&self.e1)
            .map(|(a, b)| 1.0 - a - b)
            .product()
    }
}

/// Exact biased parity of a distribution `f` over N-bit strings (indexed
/// by integer, bit `j` = qubit `j`).
pub fn biased_parity_exact(f: &[f64], rates: &ReadoutRates) -> Result<f64> {
    let n = rates.len();
    if f.len() != 1 << n {
        return Err(Error::Precondition(format!(
            "distribution over {} strings does not match {n} qubits",
            f.len()
        )));
    }
    let total: f64 = f.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::Precondition(format!(
            "distribution is not normalized: Σf = {total}"
        )));
    }
    let mut acc = 0.0;
    for (q, &fq) in f.iter().enumerate() {
        if fq == 0.0 {
            continue;
        }
        let mut weight = parity_sign(q) * fq;
        for (j, (&e0, &e1)) in rates.e0.iter().zip(&rates.e1).enumerate() {
            weight *= if q & (1 << j) == 0 {
                1.0 - 2.0 * e0
            } else {
                1.0 - 2.0 * e1
            };
        }
        acc += weight;
    }
    Ok(acc)
}

/// Exact single-qubit bias: `⟨P̃⟩ = ⟨P⟩(1−e0−e1) + e1 − e0`.
pub fn biased_parity_n1(p: f64, rates: &ReadoutRates) -> f64 {
    let (e0, e1) = (rates.e0[0], rates.e1[0]);
    p * (1.0 - e0 - e1) + e1 - e0
}

/// Sharp two-qubit bounds and their midpoint for uniform rates.
///
/// Returns `(lo, hi, mid)` with `mid = ⟨P⟩(1−e0−e1)² + (e1−e0)²`. The
/// derivation assumes `e1 ≥ e0`; the roles swap otherwise, which leaves
/// the even-parity observable unchanged.
pub fn biased_parity_n2_bounds(p: f64, rates: &ReadoutRates) -> (f64, f64, f64) {
    let (mut e0, mut e1) = (rates.e0[0], rates.e1[0]);
    if e1 < e0 {
        std::mem::swap(&mut e0, &mut e1);
    }
    let lo = (1.0 - 2.0 * e1) * (p * (1.0 - e1 - e0) - (e1 - e0));
    let hi = (1.0 - 2.0 * e0) * ((1.0 - e0 - e1) * p + (e1 - e0));
    let mid = p * (1.0 - e0 - e1).powi(2) + (e1 - e0).powi(2);
    (lo, hi, mid)
}

/// Large-N approximation `⟨P̃⟩ ≈ ⟨P⟩·Π(1−e0−e1)`.
///
/// The second return value flags whether N ≥ 3, where the approximation
/// carries its accuracy guarantee.
pub fn biased_parity_approx(p: f64, rates: &ReadoutRates) -> (f64, bool) {
    (p * rates.damping_product(), rates.len() >= 3)
}

/// A mitigated parity value with its rescaled uncertainty.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MitigatedParity {
    pub value: f64,
    pub sigma: f64,
    /// True when the raw inversion landed outside [−1−3σ, 1+3σ] and was
    /// clamped; shot noise through a small damping factor can do that.
    pub clamped: bool,
}

/// Inverts the readout bias on a measured parity.
///
/// N = 1 inverts the exact affine map, N = 2 the bound midpoint with the
/// offset generalized to `Π(e1−e0)`, and N ≥ 3 the large-N slope. Sigma is
/// scaled by the inverse slope. Values beyond `±(1 + 3σ)` clamp there and
/// set the flag.
pub fn mitigate_parity(p_noisy: f64, sigma: f64, rates: &ReadoutRates) -> Result<MitigatedParity> {
    let n = rates.len();
    if n == 0 {
        return Err(Error::Precondition("no measured qubits to mitigate".into()));
    }
    // N = 1 slope is 1−e0−e1; N = 2 midpoint and the N ≥ 3 approximation
    // both divide by the per-qubit product.
    let slope = rates.damping_product();
    if slope.abs() < 1e-6 {
        return Err(Error::NonInvertible { factor: slope });
    }
    let offset = match n {
        1 => rates.e1[0] - rates.e0[0],
        2 => rates
            .e0
            .iter()
            .zip(&rates.e1)
            .map(|(a, b)| b - a)
            .product(),
        _ => 0.0,
    };
    let value = (p_noisy - offset) / slope;
    let sigma_out = sigma / slope.abs();
    let bound = 1.0 + 3.0 * sigma_out;
    // Round-off tolerance keeps exact inversions of |p| = 1 unclamped.
    if value.abs() > bound + 1e-12 {
        Ok(MitigatedParity {
            value: value.clamp(-bound, bound),
            sigma: sigma_out,
            clamped: true,
        })
    } else {
        Ok(MitigatedParity {
            value,
            sigma: sigma_out,
            clamped: false,
        })
    }
}

/// Inverts uncorrelated per-qubit readout confusion directly on outcome
/// counts and returns the mitigated parity.
///
/// The parity estimator stays linear in the empirical distribution:
/// each observed outcome contributes the weight
/// `Π_j (1 + e0_j − e1_j)/(1 − e0_j − e1_j)` for bits read 0 and
/// `−(1 − e0_j + e1_j)/(1 − e0_j − e1_j)` for bits read 1, which is the
/// confusion-matrix inverse pushed through the parity observable. At
/// N = 1 this reproduces the exact affine inversion; for larger N it is
/// exact wherever flips really are uncorrelated, which is what makes
/// end-to-end recovery of unbiased energies possible on two-qubit terms
/// with asymmetric rates (the closed-form midpoint inversion is not —
/// it leaves a state-dependent residual).
///
/// Sigma comes from the multinomial variance of the weighted estimator.
/// Clamping policy matches [`mitigate_parity`].
pub fn mitigate_parity_counts(
    outcomes: &[(usize, u64)],
    shots: u64,
    rates: &ReadoutRates,
) -> Result<MitigatedParity> {
    if shots == 0 {
        return Err(Error::Precondition("no shots to mitigate".into()));
    }
    let weights = parity_inversion_weights(rates)?;
    let mut value = 0.0;
    let mut second_moment = 0.0;
    for &(outcome, count) in outcomes {
        let w = weights[outcome];
        let p = count as f64 / shots as f64;
        value += p * w;
        second_moment += p * w * w;
    }
    let sigma = ((second_moment - value * value).max(0.0) / shots as f64).sqrt();
    let bound = 1.0 + 3.0 * sigma;
    if value.abs() > bound + 1e-12 {
        Ok(MitigatedParity {
            value: value.clamp(-bound, bound),
            sigma,
            clamped: true,
        })
    } else {
        Ok(MitigatedParity {
            value,
            sigma,
            clamped: false,
        })
    }
}

/// Per-outcome weights of the confusion-inverted parity estimator: entry
/// `o` is what one shot with outcome bits `o` contributes. The plain
/// parity estimator corresponds to weights ±1 (zero rates).
pub fn parity_inversion_weights(rates: &ReadoutRates) -> Result<Vec<f64>> {
    let n = rates.len();
    if n == 0 {
        return Err(Error::Precondition("no measured qubits to mitigate".into()));
    }
    let slope = rates.damping_product();
    if slope.abs() < 1e-6 {
        return Err(Error::NonInvertible { factor: slope });
    }
    let mut weights = Vec::with_capacity(1 << n);
    for outcome in 0..1usize << n {
        let mut w = 1.0;
        for (j, (&e0, &e1)) in rates.e0.iter().zip(&rates.e1).enumerate() {
            let det = 1.0 - e0 - e1;
            w *= if outcome & (1 << j) == 0 {
                (1.0 + e0 - e1) / det
            } else {
                -(1.0 - e0 + e1) / det
            };
        }
        weights.push(w);
    }
    Ok(weights)
}

fn parity_sign(q: usize) -> f64 {
    if q.count_ones() % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}
