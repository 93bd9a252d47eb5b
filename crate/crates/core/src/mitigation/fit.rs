//! Weighted exponential fits `y = A·e^{−b·x}`.
//!
//! Fitting happens in log space: `ln|y| = ln A − b·x` with per-point
//! sigma `σ/|y|` (the delta method), solved by weighted least squares.
//! Mixed-sign or noise-dominated inputs are rejected — with `|y| ≤ 2σ`
//! the sign of the underlying decay is not even resolved, which is
//! exactly how ZNE dies on deep circuits.

use crate::{Error, Result};
use serde::Serialize;

/// Fit coefficients and the log-space covariance.
#[derive(Debug, Clone, Serialize)]
pub struct FitResult {
    /// Amplitude at x = 0 (signed like the inputs).
    pub amplitude: f64,
    /// Decay rate `b` of `A·e^{−b·x}`.
    pub rate: f64,
    /// Covariance of (ln A, b).
    pub covariance: [[f64; 2]; 2],
    /// The fitted points (x, y, sigma).
    pub points: Vec<(f64, f64, f64)>,
}

impl FitResult {
    /// Fitted value at `x`.
    pub fn value_at(&self, x: f64) -> f64 {
        self.amplitude * (-self.rate * x).exp()
    }

    /// First-order sigma of the fitted value at `x`:
    /// `Var(ln y) = Var(ln A) + x²·Var(b) − 2x·Cov(ln A, b)`.
    pub fn sigma_at(&self, x: f64) -> f64 {
        let var_ln = self.covariance[0][0] + x * x * self.covariance[1][1]
            - 2.0 * x * self.covariance[0][1];
        self.value_at(x).abs() * var_ln.max(0.0).sqrt()
    }

    /// Sigma of the amplitude itself.
    pub fn amplitude_sigma(&self) -> f64 {
        self.sigma_at(0.0)
    }
}

/// Weighted least-squares exponential fit through `(x, y, sigma)` points.
pub fn fit_exponential(points: &[(f64, f64, f64)]) -> Result<FitResult> {
    if points.len() < 2 {
        return Err(Error::FitFailure {
            reason: format!("need ≥ 2 points, got {}", points.len()),
            fallback: None,
        });
    }
    let sign = points[0].1.signum();
    for &(x, y, sigma) in points {
        if y == 0.0 || y.signum() != sign {
            return Err(Error::FitFailure {
                reason: format!("mixed-sign or zero ordinate at x = {x}"),
                fallback: None,
            });
        }
        if y.abs() <= 2.0 * sigma {
            return Err(Error::FitFailure {
                reason: format!(
                    "noise-dominated point at x = {x}: |y| = {:.3e} ≤ 2σ = {:.3e}",
                    y.abs(),
                    2.0 * sigma
                ),
                fallback: None,
            });
        }
    }

    // Log-space weights; exact points get a tiny floor so they dominate
    // without dividing by zero.
    let mut s = 0.0;
    let mut sx = 0.0;
    let mut sxx = 0.0;
    let mut sy = 0.0;
    let mut sxy = 0.0;
    for &(x, y, sigma) in points {
        let sigma_ln = (sigma / y.abs()).max(1e-12);
        let w = 1.0 / (sigma_ln * sigma_ln);
        let ly = y.abs().ln();
        s += w;
        sx += w * x;
        sxx += w * x * x;
        sy += w * ly;
        sxy += w * x * ly;
    }
    let det = s * sxx - sx * sx;
    if det.abs() < 1e-30 || !det.is_finite() {
        return Err(Error::FitFailure {
            reason: "degenerate abscissas".into(),
            fallback: None,
        });
    }
    let intercept = (sxx * sy - sx * sxy) / det;
    let slope = (s * sxy - sx * sy) / det;
    // Covariance of (intercept, slope) = inverse of the normal matrix.
    let cov_ii = sxx / det;
    let cov_ss = s / det;
    let cov_is = -sx / det;

    let rate = -slope;
    Ok(FitResult {
        amplitude: sign * intercept.exp(),
        rate,
        // Covariance of (ln A, b): b = −slope flips the cross term.
        covariance: [[cov_ii, -cov_is], [-cov_is, cov_ss]],
        points: points.to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_exponential_is_recovered() {
        let pts: Vec<(f64, f64, f64)> = [1.0, 3.0, 5.0]
            .iter()
            .map(|&x| (x, (-0.5 * x as f64).exp(), 0.01))
            .collect();
        let fit = fit_exponential(&pts).unwrap();
        assert!((fit.amplitude - 1.0).abs() < 1e-10);
        assert!((fit.rate - 0.5).abs() < 1e-10);
    }

    #[test]
    fn two_points_interpolate_exactly() {
        let pts = vec![(1.0, 4.0, 0.1), (3.0, 1.0, 0.1)];
        let fit = fit_exponential(&pts).unwrap();
        assert!((fit.value_at(1.0) - 4.0).abs() < 1e-10);
        assert!((fit.value_at(3.0) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn negative_data_keeps_its_sign() {
        let pts: Vec<(f64, f64, f64)> = [0.0, 1.0, 2.0]
            .iter()
            .map(|&x| (x, -3.0 * (-0.3 * x as f64).exp(), 0.001))
            .collect();
        let fit = fit_exponential(&pts).unwrap();
        assert!((fit.amplitude + 3.0).abs() < 1e-8);
        assert!(fit.value_at(1.5) < 0.0);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(fit_exponential(&[(1.0, 1.0, 0.0)]).is_err());
        assert!(fit_exponential(&[(1.0, 1.0, 0.0), (2.0, -0.5, 0.0)]).is_err());
        // noise-dominated
        assert!(fit_exponential(&[(1.0, 0.1, 0.2), (2.0, 0.05, 0.2)]).is_err());
        // degenerate x
        assert!(fit_exponential(&[(1.0, 1.0, 0.01), (1.0, 0.9, 0.01)]).is_err());
    }

    #[test]
    fn noisy_fit_is_unbiased_on_average() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        let sigma = 0.02;
        let (a_true, b_true) = (0.9, 0.4);
        let xs = [1.0, 3.0, 5.0];
        let mut amp_sum = 0.0;
        let mut amp_var_sum = 0.0;
        let reps = 100;
        let mut used = 0;
        for _ in 0..reps {
            let pts: Vec<(f64, f64, f64)> = xs
                .iter()
                .map(|&x| {
                    let y = a_true * (-b_true * x as f64).exp();
                    // crude gaussian from 12 uniforms
                    let noise: f64 =
                        (0..12).map(|_| rng.gen::<f64>()).sum::<f64>() - 6.0;
                    (x, y + sigma * noise, sigma)
                })
                .collect();
            if let Ok(fit) = fit_exponential(&pts) {
                amp_sum += fit.amplitude;
                amp_var_sum += fit.amplitude_sigma().powi(2);
                used += 1;
            }
        }
        assert!(used > 90, "too many rejected fits: {used}/{reps}");
        let mean = amp_sum / used as f64;
        let pooled_se = (amp_var_sum / used as f64).sqrt() / (used as f64).sqrt();
        // log-space fitting has O(σ²) bias; allow 2 pooled standard errors
        // plus that bias scale.
        let tol = 2.0 * pooled_se + 2.0 * sigma * sigma;
        assert!(
            (mean - a_true).abs() < tol,
            "mean amplitude {mean} vs {a_true} (tol {tol})"
        );
    }
}
