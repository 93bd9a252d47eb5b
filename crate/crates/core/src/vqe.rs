//! SPSA-driven variational optimization of the ansatz.
//!
//! Each iteration draws a Rademacher direction Δ, evaluates the objective
//! at θ ± c_k·Δ, and steps along the two-point gradient estimate
//! `ĝ = (E⁺ − E⁻)/(2c_k) · Δ⁻¹` with gains `a_k = a/(k+1+A)^α`,
//! `c_k = c/(k+1)^γ`. The optimizer returns the parameters of the lowest
//! energy it ever *evaluated* — under shot noise the last iterate is not
//! necessarily the best one.

use crate::circuit::{build_alt_ansatz, AnsatzParams, Circuit};
use crate::digest::derive_seed;
use crate::exec::{self, ExecPolicy};
use crate::hamiltonian::{expand_terms, IsingParams};
use crate::simulator::exact_energy;
use crate::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

const DOMAIN_SPSA_INIT: u64 = 21;
const DOMAIN_RESTART: u64 = 23;

/// SPSA gains and schedule exponents.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SpsaConfig {
    /// Gain scale; replaced by calibration when `calib_evals > 0`.
    pub a: f64,
    /// Perturbation scale (radians).
    pub c: f64,
    /// Gain decay exponent.
    pub alpha: f64,
    /// Perturbation decay exponent.
    pub gamma: f64,
    /// Stability constant; defaults to 0.1·max_iter when zero.
    pub big_a: f64,
    pub max_iter: usize,
    /// Objective evaluations spent calibrating the gain (must be even);
    /// each probe pair estimates |E⁺ − E⁻| at scale `c`, and `a` is set so
    /// the first update step has magnitude `target_step`.
    pub calib_evals: usize,
    /// First-step magnitude the calibration aims for (radians).
    pub target_step: f64,
}

impl Default for SpsaConfig {
    fn default() -> Self {
        Self {
            a: 0.1,
            c: 0.2,
            alpha: 0.602,
            gamma: 0.101,
            big_a: 0.0,
            max_iter: 300,
            calib_evals: 50,
            target_step: 0.3,
        }
    }
}

impl SpsaConfig {
    fn validate(&self) -> Result<()> {
        if self.a <= 0.0 || self.c <= 0.0 {
            return Err(Error::Precondition("SPSA gains must be positive".into()));
        }
        if self.calib_evals % 2 != 0 {
            return Err(Error::Precondition(
                "calib_evals must be even (two evaluations per probe)".into(),
            ));
        }
        Ok(())
    }

    fn stability(&self) -> f64 {
        if self.big_a > 0.0 {
            self.big_a
        } else {
            0.1 * self.max_iter as f64
        }
    }
}

/// One SPSA iteration's record.
#[derive(Debug, Clone, Serialize)]
pub struct IterRecord {
    pub iteration: usize,
    pub energy_plus: f64,
    pub energy_minus: f64,
    pub sigma: f64,
    pub best_so_far: f64,
    /// Observed damping `measured/exact` at θ⁺, when a reference is given.
    pub damping_observed: Option<f64>,
}

/// Full optimization trace.
#[derive(Debug, Clone, Default, Serialize)]
pub struct OptTrace {
    pub records: Vec<IterRecord>,
}

impl OptTrace {
    /// CSV dump: iteration, E+, E-, sigma, best-so-far, damping.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("iteration,energy_plus,energy_minus,sigma,best_so_far,damping_observed\n");
        for r in &self.records {
            let damping = r
                .damping_observed
                .map(|d| d.to_string())
                .unwrap_or_default();
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                r.iteration, r.energy_plus, r.energy_minus, r.sigma, r.best_so_far, damping
            ));
        }
        out
    }
}

/// Result of an SPSA run: the best parameters seen and the trace.
#[derive(Debug, Clone)]
pub struct SpsaOutcome {
    pub best_params: Vec<f64>,
    pub best_energy: f64,
    /// Final iterate, which under shot noise is not necessarily the best
    /// evaluated point.
    pub final_params: Vec<f64>,
    pub trace: OptTrace,
}

/// Minimizes a noisy objective with SPSA.
///
/// `objective(params, eval_index)` returns `(value, sigma)`; the running
/// evaluation index lets noisy objectives draw an independent seed per
/// call, with the two evaluations of an iteration landing on consecutive
/// indices. Failures abort with the iteration attached. `reference`
/// optionally supplies an exact evaluation of the same parameters for
/// damping bookkeeping.
pub fn spsa_optimize<F, R>(
    objective: F,
    dim: usize,
    cfg: &SpsaConfig,
    seed: u64,
    reference: Option<R>,
) -> Result<SpsaOutcome>
where
    F: Fn(&[f64], u64) -> Result<(f64, f64)> + Sync,
    R: Fn(&[f64]) -> f64 + Sync,
{
    cfg.validate()?;
    if dim == 0 {
        return Err(Error::Precondition("objective dimension must be ≥ 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, &[DOMAIN_SPSA_INIT]));
    let mut theta: Vec<f64> = (0..dim)
        .map(|_| rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI))
        .collect();

    let big_a = cfg.stability();

    // Gain calibration: probe |E⁺ − E⁻| at scale c around θ₀ and pick `a`
    // so the first step magnitude hits target_step.
    let mut eval_counter = 0u64;
    let a = if cfg.calib_evals > 0 {
        let probes = cfg.calib_evals / 2;
        let mut mean_diff = 0.0;
        for p in 0..probes {
            let delta = rademacher(&mut rng, dim);
            let (e_plus, e_minus) =
                paired_eval(&objective, &theta, &delta, cfg.c, &mut eval_counter, p)?;
            mean_diff += (e_plus - e_minus).abs();
        }
        mean_diff /= probes as f64;
        if mean_diff < 1e-12 {
            cfg.a
        } else {
            // First step: a/(1+A)^α · |E⁺−E⁻|/(2c) = target_step.
            cfg.target_step * (1.0 + big_a).powf(cfg.alpha) * 2.0 * cfg.c / mean_diff
        }
    } else {
        cfg.a
    };

    let mut trace = OptTrace::default();
    let mut best_params = theta.clone();
    let mut best_energy = f64::INFINITY;

    for k in 0..cfg.max_iter {
        let a_k = a / (k as f64 + 1.0 + big_a).powf(cfg.alpha);
        let c_k = cfg.c / (k as f64 + 1.0).powf(cfg.gamma);
        let delta = rademacher(&mut rng, dim);

        let (plus, minus): (Vec<f64>, Vec<f64>) = (
            theta.iter().zip(&delta).map(|(t, d)| t + c_k * d).collect(),
            theta.iter().zip(&delta).map(|(t, d)| t - c_k * d).collect(),
        );
        let (idx_plus, idx_minus) = (eval_counter, eval_counter + 1);
        eval_counter += 2;
        let (res_plus, res_minus) = exec::join(
            ExecPolicy::default(),
            || objective(&plus, idx_plus),
            || objective(&minus, idx_minus),
        );
        let map_err = |e: Error, iter| Error::Objective {
            iteration: iter,
            source: Box::new(e),
        };
        let (e_plus, s_plus) = res_plus.map_err(|e| map_err(e, k))?;
        let (e_minus, s_minus) = res_minus.map_err(|e| map_err(e, k))?;

        for (params, energy) in [(&plus, e_plus), (&minus, e_minus)] {
            if energy < best_energy {
                best_energy = energy;
                best_params = params.clone();
            }
        }
        let damping_observed = reference.as_ref().map(|r| {
            let exact = r(&plus);
            if exact.abs() > 1e-12 {
                e_plus / exact
            } else {
                f64::NAN
            }
        });
        trace.records.push(IterRecord {
            iteration: k,
            energy_plus: e_plus,
            energy_minus: e_minus,
            sigma: s_plus.hypot(s_minus),
            best_so_far: best_energy,
            damping_observed,
        });

        let g_scale = (e_plus - e_minus) / (2.0 * c_k);
        for (t, d) in theta.iter_mut().zip(&delta) {
            // Rademacher entries are ±1, so Δ⁻¹ = Δ.
            *t -= a_k * g_scale * d;
        }
    }
    Ok(SpsaOutcome {
        best_params,
        best_energy,
        final_params: theta,
        trace,
    })
}

fn paired_eval<F>(
    objective: &F,
    theta: &[f64],
    delta: &[f64],
    c: f64,
    eval_counter: &mut u64,
    probe: usize,
) -> Result<(f64, f64)>
where
    F: Fn(&[f64], u64) -> Result<(f64, f64)> + Sync,
{
    let plus: Vec<f64> = theta.iter().zip(delta).map(|(t, d)| t + c * d).collect();
    let minus: Vec<f64> = theta.iter().zip(delta).map(|(t, d)| t - c * d).collect();
    let (idx_plus, idx_minus) = (*eval_counter, *eval_counter + 1);
    *eval_counter += 2;
    let (rp, rm) = exec::join(
        ExecPolicy::default(),
        || objective(&plus, idx_plus),
        || objective(&minus, idx_minus),
    );
    let to_err = |e: Error| Error::Objective {
        iteration: probe,
        source: Box::new(e),
    };
    Ok((rp.map_err(to_err)?.0, rm.map_err(to_err)?.0))
}

fn rademacher(rng: &mut ChaCha8Rng, dim: usize) -> Vec<f64> {
    (0..dim)
        .map(|_| if rng.gen::<bool>() { 1.0 } else { -1.0 })
        .collect()
}

/// A classically optimized ansatz circuit with its parameters and exact
/// energy.
#[derive(Debug, Clone)]
pub struct OptimizedCircuit {
    pub circuit: Circuit,
    pub params: AnsatzParams,
    pub energy: f64,
}

/// Optimizes the ansatz against the exact (noiseless) energy with SPSA
/// restarts followed by cyclic coordinate refinement. Best effort: always
/// returns the best circuit found.
pub fn classical_optimize(
    h: &IsingParams,
    shape: (usize, usize),
    symmetric: bool,
    restarts: usize,
    seed: u64,
) -> Result<OptimizedCircuit> {
    let (n, layers) = shape;
    if n > crate::simulator::MAX_STATE_QUBITS {
        return Err(Error::SizeCap {
            n,
            cap: crate::simulator::MAX_STATE_QUBITS,
        });
    }
    let terms = expand_terms(h);
    let dim = if symmetric {
        2 * (layers + 1)
    } else {
        n * (layers + 1)
    };
    let energy_of = |values: &[f64]| -> Result<f64> {
        let params = pack_params(layers, values, symmetric);
        let circuit = build_alt_ansatz(n, &params)?;
        exact_energy(&circuit, &terms)
    };

    let mut best: Option<(f64, Vec<f64>)> = None;
    for r in 0..restarts.max(1) {
        let spsa_cfg = SpsaConfig {
            max_iter: 250,
            calib_evals: 20,
            c: 0.15,
            target_step: 0.15,
            ..SpsaConfig::default()
        };
        let outcome = spsa_optimize(
            |v, _| energy_of(v).map(|e| (e, 0.0)),
            dim,
            &spsa_cfg,
            derive_seed(seed, &[DOMAIN_RESTART, r as u64]),
            None::<fn(&[f64]) -> f64>,
        )?;
        let refined = coordinate_refine(&energy_of, outcome.best_params, 3)?;
        let e = energy_of(&refined)?;
        if best.as_ref().is_none_or(|(be, _)| e < *be) {
            best = Some((e, refined));
        }
    }
    let (energy, values) = best.expect("at least one restart ran");
    let params = pack_params(layers, &values, symmetric);
    let circuit = build_alt_ansatz(n, &params)?;
    Ok(OptimizedCircuit {
        circuit,
        params,
        energy,
    })
}

fn pack_params(layers: usize, values: &[f64], symmetric: bool) -> AnsatzParams {
    if symmetric {
        AnsatzParams::symmetric(layers, values.to_vec())
    } else {
        AnsatzParams::full(layers, values.to_vec())
    }
}

/// Cyclic per-coordinate parabolic line search.
fn coordinate_refine<F>(energy_of: &F, mut values: Vec<f64>, sweeps: usize) -> Result<Vec<f64>>
where
    F: Fn(&[f64]) -> Result<f64>,
{
    let mut step = 0.2;
    for _ in 0..sweeps {
        for i in 0..values.len() {
            let e0 = energy_of(&values)?;
            values[i] += step;
            let e_plus = energy_of(&values)?;
            values[i] -= 2.0 * step;
            let e_minus = energy_of(&values)?;
            values[i] += step;
            // Parabola through the three samples; fall back to the best
            // sample when curvature is the wrong way.
            let denom = e_plus - 2.0 * e0 + e_minus;
            if denom > 1e-12 {
                let shift = 0.5 * step * (e_minus - e_plus) / denom;
                let clamped = shift.clamp(-2.0 * step, 2.0 * step);
                values[i] += clamped;
                if energy_of(&values)? > e0 {
                    values[i] -= clamped;
                }
            } else if e_plus < e0 && e_plus <= e_minus {
                values[i] += step;
            } else if e_minus < e0 {
                values[i] -= step;
            }
        }
        step *= 0.5;
    }
    Ok(values)
}
