//! Damping-factor mitigation methods and their comparison machinery.
//!
//! Noise damps measured energies multiplicatively, `⟨H⟩_noisy ≈ C·⟨H⟩_exact`
//! for traceless observables. Every method here either predicts `C` from a
//! calibration signal or extrapolates the damping away:
//!
//! - [`zne`] — fold CNOTs to amplify noise, extrapolate the energy to zero
//!   noise with an exponential fit.
//! - [`predict_from_pert`] — measure `C` on circuits optimized in the
//!   perturbative regime and reuse it outside.
//! - [`predict_from_depth`] — fit the exponential decay of `C` in ansatz
//!   layers at shallow depth, predict it at target depth.
//! - [`predict_zero_theta`] — measure the θ = 0 calibration circuit, as an
//!   all-zeros fidelity or as an energy ratio.
//! - [`zne_combined`] — zero-theta calibration composed with ZNE, dividing
//!   either after extrapolation (ZNE-first) or before (ZNE-last).
//! - [`predict_multiply_fidelities`] — multiply per-gate fidelities.
//! - [`predict_noise_model_sim`] — rerun the circuit under the full local
//!   noise model and divide; an oracle-grade baseline, not scalable.

mod fit;

pub use fit::{fit_exponential, FitResult};

use crate::circuit::Circuit;
use crate::device::{self, DeviceModel, ScoreOptions};
use crate::digest::derive_seed;
use crate::estimator::{
    measure_damping, measure_energy, measure_zero_theta_fidelity, EnergyEstimate, EstimatorConfig,
    PreparedTerm,
};
use crate::hamiltonian::{expand_terms, IsingParams, PauliTerm, TermKind};
use crate::simulator::exact_energy;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

const DOMAIN_NOISE_MODEL: u64 = 11;
const DOMAIN_PERT: u64 = 12;
const DOMAIN_SCALE: u64 = 13;

/// Which method produced a damping estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Observed,
    Zne,
    FromPert,
    DepthFit,
    ZeroThetaFidelity,
    ZeroThetaEnergy,
    ZneFirst,
    ZneLast,
    MultiplyFidelities,
    NoiseModelSim,
}

/// A damping factor with statistical sigma and provenance tag.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct DampingEstimate {
    pub c: f64,
    pub sigma: f64,
    pub method: Method,
}

impl DampingEstimate {
    /// Mitigated energy `e_raw / c` with first-order error propagation.
    pub fn mitigate(&self, e_raw: f64, sigma_raw: f64) -> (f64, f64) {
        let value = e_raw / self.c;
        let rel = (sigma_raw / e_raw).hypot(self.sigma / self.c);
        (value, (value * rel).abs())
    }
}

/// Zero-noise extrapolation over CNOT fold scales.
///
/// Measures the energy at every scale (one must be the bare circuit),
/// fits `E(λ) = A·e^{−bλ}`, and reports `A` as the zero-noise energy. On
/// fit failure the bare-scale measurement rides along in the error for
/// fallback reporting.
pub fn zne(
    ansatz: &Circuit,
    terms: &[PauliTerm],
    device: &DeviceModel,
    cfg: &EstimatorConfig,
    scales: &[f64],
    seed: u64,
) -> Result<EnergyEstimate> {
    validate_scales(scales)?;
    let mut points = Vec::with_capacity(scales.len());
    let mut bare: Option<EnergyEstimate> = None;
    for (si, &scale) in scales.iter().enumerate() {
        let run = EstimatorConfig {
            fold_scale: scale,
            ..cfg.clone()
        };
        let est = measure_energy(
            ansatz,
            terms,
            device,
            &run,
            derive_seed(seed, &[DOMAIN_SCALE, si as u64]),
        )?;
        points.push((scale, est.value, est.sigma));
        if (scale - 1.0).abs() < 1e-9 {
            bare = Some(est);
        }
    }
    let bare = bare.expect("validated scale list contains 1");
    match fit_exponential(&points) {
        Ok(fit) => Ok(EnergyEstimate {
            value: fit.amplitude,
            sigma: fit.amplitude_sigma(),
            per_term: bare.per_term,
            config_hash: bare.config_hash,
            clamped_terms: bare.clamped_terms,
        }),
        Err(Error::FitFailure { reason, .. }) => Err(Error::FitFailure {
            reason,
            fallback: Some(Box::new(bare)),
        }),
        Err(e) => Err(e),
    }
}

/// From-perturbative-regime estimate with both uncertainty flavors.
#[derive(Debug, Clone, Serialize)]
pub struct FromPertEstimate {
    /// Mean damping with the spread-of-points sigma (std of the mean); the
    /// headline number.
    pub estimate: DampingEstimate,
    /// Pooled shot-level sigma of the mean, for comparison — the spread
    /// usually exceeds it.
    pub shot_sigma: f64,
    /// Per-point results (h_x, damping, shot sigma).
    pub points: Vec<(f64, f64, f64)>,
}

/// Measures the damping factor on circuits optimized in the perturbative
/// regime (one per h_x value) and averages.
///
/// Each circuit's damping is its measured energy over its own exact
/// energy, under that h_x's Hamiltonian with `base`'s n, J, h_z. The
/// spread across points is treated as statistical error.
pub fn predict_from_pert(
    base: &IsingParams,
    opt_circuits: &[(f64, Circuit)],
    device: &DeviceModel,
    cfg: &EstimatorConfig,
    seed: u64,
) -> Result<FromPertEstimate> {
    if opt_circuits.is_empty() {
        return Err(Error::Precondition(
            "perturbative calibration needs at least one optimized circuit".into(),
        ));
    }
    let mut points = Vec::with_capacity(opt_circuits.len());
    for (pi, (h_x, circuit)) in opt_circuits.iter().enumerate() {
        let params = IsingParams::new(base.n, base.j, *h_x, base.h_z)?;
        let terms = expand_terms(&params);
        let exact = exact_energy(circuit, &terms)?;
        let d = measure_damping(
            circuit,
            &terms,
            device,
            cfg,
            exact,
            derive_seed(seed, &[DOMAIN_PERT, pi as u64]),
        )?;
        points.push((*h_x, d.c, d.sigma));
    }
    let k = points.len() as f64;
    let mean = points.iter().map(|p| p.1).sum::<f64>() / k;
    let spread_sigma = if points.len() > 1 {
        let var = points.iter().map(|p| (p.1 - mean).powi(2)).sum::<f64>() / (k - 1.0);
        (var / k).sqrt()
    } else {
        points[0].2
    };
    let shot_sigma = points.iter().map(|p| p.2 * p.2).sum::<f64>().sqrt() / k;
    Ok(FromPertEstimate {
        estimate: DampingEstimate {
            c: mean,
            sigma: spread_sigma,
            method: Method::FromPert,
        },
        shot_sigma,
        points,
    })
}

/// Extrapolates the damping factor in circuit depth: fits an exponential
/// to `(l, C_l)` for `l ≤ l_max_fit` and evaluates it at `l_target`.
pub fn predict_from_depth(
    damping_by_layer: &[(usize, f64, f64)],
    l_max_fit: usize,
    l_target: usize,
) -> Result<DampingEstimate> {
    if l_target == 0 {
        return Err(Error::Precondition("depth target must be ≥ 1".into()));
    }
    let points: Vec<(f64, f64, f64)> = damping_by_layer
        .iter()
        .filter(|(l, _, _)| *l <= l_max_fit)
        .map(|&(l, c, sigma)| (l as f64, c, sigma))
        .collect();
    let fit = fit_exponential(&points)?;
    let x = l_target as f64;
    Ok(DampingEstimate {
        c: fit.value_at(x),
        sigma: fit.sigma_at(x),
        method: Method::DepthFit,
    })
}

/// Which zero-theta calibration signal to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ZeroThetaVariant {
    /// All-zeros probability of the calibration circuits.
    Fidelity,
    /// Measured θ = 0 energy over the ideal θ = 0 energy.
    Energy,
}

/// Ideal energy of the θ = 0 ansatz state |0…0⟩: ZZ and Z terms read +1,
/// X terms 0.
pub fn ideal_zero_theta_energy(terms: &[PauliTerm]) -> f64 {
    terms
        .iter()
        .map(|t| match t.kind {
            TermKind::Zz | TermKind::Z => t.coefficient,
            TermKind::X => 0.0,
        })
        .sum()
}

/// Estimates the damping factor from the θ = 0 calibration circuit.
pub fn predict_zero_theta(
    shape: (usize, usize),
    terms: &[PauliTerm],
    device: &DeviceModel,
    cfg: &EstimatorConfig,
    variant: ZeroThetaVariant,
    seed: u64,
) -> Result<DampingEstimate> {
    match variant {
        ZeroThetaVariant::Fidelity => {
            Ok(measure_zero_theta_fidelity(shape, terms, device, cfg, seed)?.pooled)
        }
        ZeroThetaVariant::Energy => {
            let (n, layers) = shape;
            let ideal = ideal_zero_theta_energy(terms);
            if ideal.abs() <= 1e-9 {
                return Err(Error::UndefinedDamping(ideal));
            }
            let ansatz = crate::circuit::build_alt_ansatz(
                n,
                &crate::circuit::AnsatzParams::full(layers, vec![0.0; n * (layers + 1)]),
            )?;
            let measured = measure_energy(&ansatz, terms, device, cfg, seed)?;
            Ok(DampingEstimate {
                c: measured.value / ideal,
                sigma: measured.sigma / ideal.abs(),
                method: Method::ZeroThetaEnergy,
            })
        }
    }
}

/// Order of composition when combining zero-theta calibration with ZNE.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ZneOrder {
    /// Extrapolate target and calibration separately, then divide.
    ZneFirst,
    /// Divide per scale, then extrapolate the quotient.
    ZneLast,
}

/// Zero-theta calibration combined with ZNE in either order. The
/// calibration leg uses the pooled per-term fidelity at each fold scale.
pub fn zne_combined(
    ansatz: &Circuit,
    terms: &[PauliTerm],
    device: &DeviceModel,
    cfg: &EstimatorConfig,
    order: ZneOrder,
    scales: &[f64],
    seed: u64,
    shape: (usize, usize),
) -> Result<EnergyEstimate> {
    validate_scales(scales)?;
    let mut energy_points = Vec::with_capacity(scales.len());
    let mut calib_points = Vec::with_capacity(scales.len());
    let mut bare: Option<EnergyEstimate> = None;
    for (si, &scale) in scales.iter().enumerate() {
        let run = EstimatorConfig {
            fold_scale: scale,
            ..cfg.clone()
        };
        let est = measure_energy(
            ansatz,
            terms,
            device,
            &run,
            derive_seed(seed, &[DOMAIN_SCALE, si as u64]),
        )?;
        let calib = measure_zero_theta_fidelity(
            shape,
            terms,
            device,
            &run,
            derive_seed(seed, &[DOMAIN_SCALE, si as u64, 1]),
        )?
        .pooled;
        energy_points.push((scale, est.value, est.sigma));
        calib_points.push((scale, calib.c, calib.sigma));
        if (scale - 1.0).abs() < 1e-9 {
            bare = Some(est);
        }
    }
    let bare = bare.expect("validated scale list contains 1");
    let attach = |e: Error| match e {
        Error::FitFailure { reason, .. } => Error::FitFailure {
            reason,
            fallback: Some(Box::new(bare.clone())),
        },
        other => other,
    };

    let (value, sigma) = match order {
        ZneOrder::ZneFirst => {
            let e_fit = fit_exponential(&energy_points).map_err(attach)?;
            let c_fit = fit_exponential(&calib_points).map_err(&attach)?;
            let e0 = e_fit.amplitude;
            let c0 = c_fit.amplitude;
            let value = e0 / c0;
            let rel = (e_fit.amplitude_sigma() / e0).hypot(c_fit.amplitude_sigma() / c0);
            (value, (value * rel).abs())
        }
        ZneOrder::ZneLast => {
            let quotients: Vec<(f64, f64, f64)> = energy_points
                .iter()
                .zip(&calib_points)
                .map(|(&(x, e, se), &(_, c, sc))| {
                    if c.abs() < 1e-9 {
                        return Err(Error::FitFailure {
                            reason: format!("calibration damping vanished at scale {x}"),
                            fallback: None,
                        });
                    }
                    let q = e / c;
                    let sq = (q * (se / e).hypot(sc / c)).abs();
                    Ok((x, q, sq))
                })
                .collect::<Result<_>>()
                .map_err(&attach)?;
            let q_fit = fit_exponential(&quotients).map_err(&attach)?;
            (q_fit.amplitude, q_fit.amplitude_sigma())
        }
    };
    Ok(EnergyEstimate {
        value,
        sigma,
        per_term: bare.per_term,
        config_hash: bare.config_hash,
        clamped_terms: bare.clamped_terms,
    })
}

/// Predicts damping by multiplying gate fidelities over each term's
/// light-cone circuit, averaged over that term's assignments, then
/// combines terms weighted by their energy contribution `coef·⟨term⟩`.
/// No shots are involved, so sigma is zero.
pub fn predict_multiply_fidelities(
    device: &DeviceModel,
    prepared: &[PreparedTerm],
    weights: &[f64],
) -> Result<DampingEstimate> {
    if prepared.is_empty() || prepared.len() != weights.len() {
        return Err(Error::Precondition(
            "need one weight per prepared term".into(),
        ));
    }
    let mut num = 0.0;
    let mut den = 0.0;
    let mut unweighted = 0.0;
    for (prep, &w) in prepared.iter().zip(weights) {
        let mut product = 0.0;
        for a in &prep.assignments {
            product += device::score_assignment_windowed(
                device,
                &prep.circuit,
                &prep.window,
                a,
                ScoreOptions::default(),
            );
        }
        product /= prep.assignments.len() as f64;
        num += w * product;
        den += w;
        unweighted += product / prepared.len() as f64;
    }
    let c = if den.abs() > 1e-9 { num / den } else { unweighted };
    Ok(DampingEstimate {
        c,
        sigma: 0.0,
        method: Method::MultiplyFidelities,
    })
}

/// Damping predicted by simulating the circuit under the full local noise
/// model and dividing by the exact energy. In this closed world the
/// simulation uses the true device model, so this is an oracle-grade
/// baseline; it exists for comparison, not scalability.
pub fn predict_noise_model_sim(
    ansatz: &Circuit,
    terms: &[PauliTerm],
    device: &DeviceModel,
    cfg: &EstimatorConfig,
    exact: f64,
    seed: u64,
) -> Result<DampingEstimate> {
    let d = measure_damping(
        ansatz,
        terms,
        device,
        cfg,
        exact,
        derive_seed(seed, &[DOMAIN_NOISE_MODEL]),
    )?;
    Ok(DampingEstimate {
        method: Method::NoiseModelSim,
        ..d
    })
}

/// Grades a mitigated energy against the true value on the 0–3 scale.
///
/// With `d = |e_mit − e_true|` and threshold `t = 0.1·|e_true|`:
/// 3 when confidently within 10% (`d + σ ≤ t`), 2 when the 10% boundary
/// sits within one sigma, 1 within two sigmas, 0 when confidently outside.
pub fn classify_effectiveness(e_mit: f64, sigma: f64, e_true: f64) -> u8 {
    let d = (e_mit - e_true).abs();
    let t = 0.1 * e_true.abs();
    if d + sigma <= t {
        3
    } else if (d - t).abs() <= sigma {
        2
    } else if (d - t).abs() <= 2.0 * sigma {
        1
    } else {
        0
    }
}

fn validate_scales(scales: &[f64]) -> Result<()> {
    if scales.len() < 2 {
        return Err(Error::Precondition(format!(
            "ZNE needs ≥ 2 fold scales, got {}",
            scales.len()
        )));
    }
    if !scales.iter().any(|s| (s - 1.0).abs() < 1e-9) {
        return Err(Error::Precondition(
            "ZNE scale list must include the unmodified circuit (scale 1)".into(),
        ));
    }
    if scales.iter().any(|&s| s < 1.0) {
        return Err(Error::Domain("fold scales must be ≥ 1".into()));
    }
    Ok(())
}
