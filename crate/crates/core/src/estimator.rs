//! End-to-end energy measurement pipeline.
//!
//! Each Hamiltonian term is measured from its own circuit: the ansatz gets
//! the term's basis change, is cut down to the term's backward light cone,
//! decomposed to basis gates, optionally noise-folded, and then sampled
//! once per (qubit assignment × randomized-compiling draw) cell. Counts
//! pool across cells, parities are optionally readout-mitigated, and terms
//! combine with independent-error propagation.

use crate::circuit::{
    build_alt_ansatz, decompose_to_basis, fold_cnots, light_cone_filter, light_cone_window,
    randomized_compile, AnsatzParams, Circuit, Gate, QubitAssignment,
};
use crate::device::{self, DeviceModel, ScoreOptions};
use crate::digest::{self, derive_seed};
use crate::exec::{self, ExecPolicy};
use crate::hamiltonian::{PauliTerm, TermKind};
use crate::mitigation::{DampingEstimate, Method};
use crate::readout::{mitigate_parity_counts, ReadoutRates};
use crate::simulator::{parity_expectation, sample_noisy_with_policy, NoiseConfig, ShotTable};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

// Seed-derivation domains, one per randomized stage.
const DOMAIN_FOLD: u64 = 1;
const DOMAIN_RC: u64 = 2;
const DOMAIN_SAMPLE: u64 = 3;

/// Knobs of the measurement pipeline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EstimatorConfig {
    pub shots_per_term: u64,
    /// How many of the top-scoring qubit assignments to average over.
    pub assignments: usize,
    /// Randomized-compiling draws per circuit.
    pub rc_instances: usize,
    pub readout_mitigation: bool,
    /// CNOT fold factor; 1 leaves circuits alone.
    pub fold_scale: f64,
    /// Shots drawn per stochastic trajectory.
    pub shots_per_trajectory: u64,
}

impl Default for EstimatorConfig {
    fn default() -> Self {
        Self {
            shots_per_term: 4096,
            assignments: 4,
            rc_instances: 8,
            readout_mitigation: true,
            fold_scale: 1.0,
            shots_per_trajectory: 32,
        }
    }
}

impl EstimatorConfig {
    fn validate(&self) -> Result<()> {
        if self.shots_per_term == 0
            || self.assignments == 0
            || self.rc_instances == 0
            || self.shots_per_trajectory == 0
        {
            return Err(Error::Precondition(
                "estimator counts must all be ≥ 1".into(),
            ));
        }
        let cells = self.assignments * self.rc_instances;
        if self.shots_per_term < cells as u64 {
            return Err(Error::ShotBudget {
                shots: self.shots_per_term,
                cells,
            });
        }
        if self.fold_scale < 1.0 {
            return Err(Error::Domain(format!(
                "fold scale must be ≥ 1, got {}",
                self.fold_scale
            )));
        }
        Ok(())
    }
}

/// One term's measured expectation (coefficient not applied).
#[derive(Debug, Clone, Serialize)]
pub struct TermEstimate {
    pub term: PauliTerm,
    pub value: f64,
    pub sigma: f64,
}

/// Measured energy with per-term breakdown and provenance digest.
#[derive(Debug, Clone, Serialize)]
pub struct EnergyEstimate {
    pub value: f64,
    pub sigma: f64,
    pub per_term: Vec<TermEstimate>,
    pub config_hash: String,
    /// Terms whose readout mitigation clamped an out-of-range parity.
    pub clamped_terms: usize,
}

/// A term's measurement-ready circuit with its cone window and the
/// assignments it will average over.
#[derive(Debug, Clone)]
pub struct PreparedTerm {
    pub term: PauliTerm,
    /// Decomposed, light-cone-filtered circuit measuring the term support.
    pub circuit: Circuit,
    /// Logical loop position of each circuit qubit.
    pub window: Vec<usize>,
    pub assignments: Vec<QubitAssignment>,
}

/// Appends the term's basis change and filters the ansatz to the term's
/// backward light cone, measuring the (relabeled) support.
///
/// X terms append an H on their qubit; it merges into the final RY during
/// basis decomposition. ZZ and Z terms measure in the computational basis
/// directly. The output is not yet decomposed.
pub fn term_circuit(ansatz: &Circuit, t: &PauliTerm) -> Result<Circuit> {
    let with_basis_change = match t.kind {
        TermKind::X => ansatz.with_appended([Gate::H { qubit: t.support[0] }])?,
        TermKind::Zz | TermKind::Z => ansatz.clone(),
    };
    light_cone_filter(&with_basis_change, &t.support)
}

/// Builds the decomposed per-term circuits and their top assignments.
pub fn prepare_terms(
    ansatz: &Circuit,
    terms: &[PauliTerm],
    device: &DeviceModel,
    cfg: &EstimatorConfig,
) -> Result<Vec<PreparedTerm>> {
    if ansatz.n_qubits() != device.n_physical() {
        return Err(Error::Precondition(format!(
            "ansatz on {} qubits does not fit device loop of {}",
            ansatz.n_qubits(),
            device.n_physical()
        )));
    }
    terms
        .iter()
        .map(|t| {
            let with_basis_change = match t.kind {
                TermKind::X => ansatz.with_appended([Gate::H { qubit: t.support[0] }])?,
                TermKind::Zz | TermKind::Z => ansatz.clone(),
            };
            let window = light_cone_window(&with_basis_change, &t.support)?.original_qubits;
            let filtered = light_cone_filter(&with_basis_change, &t.support)?;
            let circuit = decompose_to_basis(&filtered)?;
            let assignments = device::select_assignments_windowed(
                device,
                &circuit,
                &window,
                cfg.assignments,
                ScoreOptions::default(),
            )?;
            Ok(PreparedTerm {
                term: t.clone(),
                circuit,
                window,
                assignments,
            })
        })
        .collect()
}

/// Measures the energy of `terms` on `ansatz` through the full pipeline.
/// Deterministic given `seed`.
pub fn measure_energy(
    ansatz: &Circuit,
    terms: &[PauliTerm],
    device: &DeviceModel,
    cfg: &EstimatorConfig,
    seed: u64,
) -> Result<EnergyEstimate> {
    cfg.validate()?;
    let prepared = prepare_terms(ansatz, terms, device, cfg)?;
    let config_hash = pipeline_digest(ansatz, terms, device, cfg, seed);

    let results: Vec<Result<(TermEstimate, bool)>> =
        exec::map_indexed(ExecPolicy::default(), prepared.len(), |ti| {
            measure_term(&prepared[ti], device, cfg, seed, ti as u64)
        });

    let mut per_term = Vec::with_capacity(prepared.len());
    let mut value = 0.0;
    let mut var = 0.0;
    let mut clamped_terms = 0;
    for r in results {
        let (est, clamped) = r?;
        value += est.term.coefficient * est.value;
        var += (est.term.coefficient * est.sigma).powi(2);
        clamped_terms += clamped as usize;
        per_term.push(est);
    }
    Ok(EnergyEstimate {
        value,
        sigma: var.sqrt(),
        per_term,
        config_hash,
        clamped_terms,
    })
}

fn measure_term(
    prep: &PreparedTerm,
    device: &DeviceModel,
    cfg: &EstimatorConfig,
    seed: u64,
    ti: u64,
) -> Result<(TermEstimate, bool)> {
    let cells = sample_cells(&prep.circuit, prep, device, cfg, seed, ti)?;

    // Mitigation inverts the per-qubit confusion of each cell's own
    // physical qubits shot by shot; exact under the uncorrelated-readout
    // assumption, unlike the closed-form parity inversions, which leave a
    // state-dependent residual on two-qubit terms with asymmetric rates.
    let mut weighted = Vec::with_capacity(cells.len());
    for cell in &cells {
        let weights = if cfg.readout_mitigation {
            parity_inversion_weights(&cell.rates)?
        } else {
            plain_parity_weights(cell.rates.len())
        };
        weighted.push((weights, &cell.trajectories));
    }
    let (value, sigma) = clustered_statistic(&weighted);

    // Shot noise through a small inversion slope can push the parity out
    // of range; clamp and flag, as the reports expect.
    let bound = 1.0 + 3.0 * sigma;
    let clamped = value.abs() > bound + 1e-12;
    let value = if clamped { value.clamp(-bound, bound) } else { value };
    Ok((
        TermEstimate {
            term: prep.term.clone(),
            value,
            sigma,
        },
        clamped,
    ))
}

fn plain_parity_weights(n: usize) -> Vec<f64> {
    (0..1usize << n)
        .map(|o| if o.count_ones() % 2 == 0 { 1.0 } else { -1.0 })
        .collect()
}

/// Value and cluster-robust sigma of a per-shot weighted statistic, with
/// the trajectory as the sampling unit.
///
/// Each entry pairs the per-outcome weights of one cell with that cell's
/// trajectory statistics. Trajectories share a noise realization across
/// their shots, so the naive multinomial sigma underestimates the
/// sampling error; clustering on trajectories fixes that. With a single
/// trajectory (the noiseless fast path) shots are independent and the
/// multinomial variance is exact.
fn clustered_statistic(cells: &[(Vec<f64>, &[TrajectoryStat])]) -> Result<(f64, f64)> {
    let weighted = |weights: &[f64], stat: &TrajectoryStat| -> Result<f64> {
        match stat {
            TrajectoryStat::Counts { counts, .. } => Ok(counts
                .iter()
                .enumerate()
                .map(|(o, &c)| weights.get(o).copied().unwrap_or(0.0) * c as f64)
                .sum()),
            TrajectoryStat::Wide { .. } => Err(Error::Precondition(
                "term measurements cover at most two qubits".into(),
            )),
        }
    };
    let mut total_shots = 0u64;
    let mut total_sum = 0.0;
    let mut n_traj = 0usize;
    for (weights, stats) in cells {
        for stat in stats.iter() {
            total_shots += stat.shots();
            total_sum += weighted(weights, stat)?;
            n_traj += 1;
        }
    }
    if total_shots == 0 {
        return Err(Error::EmptyShotTable);
    }
    let n = total_shots as f64;
    let value = total_sum / n;

    if n_traj >= 2 {
        let mut ss = 0.0;
        for (weights, stats) in cells {
            for stat in stats.iter() {
                let r = weighted(weights, stat)? - stat.shots() as f64 * value;
                ss += r * r;
            }
        }
        let correction = n_traj as f64 / (n_traj as f64 - 1.0);
        Ok((value, (correction * ss).sqrt() / n))
    } else {
        let (weights, stats) = &cells[0];
        let mut second = 0.0;
        if let Some(TrajectoryStat::Counts { counts, .. }) = stats.first() {
            for (o, &c) in counts.iter().enumerate() {
                second += weights.get(o).copied().unwrap_or(0.0).powi(2) * c as f64 / n;
            }
        }
        Ok((value, ((second - value * value).max(0.0) / n).sqrt()))
    }
}

/// All-zeros proportion with cluster-robust sigma, over any register width.
fn clustered_zeros(groups: &[&[TrajectoryStat]]) -> Result<(f64, f64)> {
    let zeros_of = |stat: &TrajectoryStat| -> f64 {
        match stat {
            TrajectoryStat::Counts { counts, .. } => counts[0] as f64,
            TrajectoryStat::Wide { zeros, .. } => *zeros as f64,
        }
    };
    let mut total_shots = 0u64;
    let mut total_zeros = 0.0;
    let mut n_traj = 0usize;
    for stats in groups {
        for stat in stats.iter() {
            total_shots += stat.shots();
            total_zeros += zeros_of(stat);
            n_traj += 1;
        }
    }
    if total_shots == 0 {
        return Err(Error::EmptyShotTable);
    }
    let n = total_shots as f64;
    let value = total_zeros / n;
    if n_traj >= 2 {
        let mut ss = 0.0;
        for stats in groups {
            for stat in stats.iter() {
                let r = zeros_of(stat) - stat.shots() as f64 * value;
                ss += r * r;
            }
        }
        let correction = n_traj as f64 / (n_traj as f64 - 1.0);
        Ok((value, (correction * ss).sqrt() / n))
    } else {
        Ok((value, (value * (1.0 - value) / n).max(0.0).sqrt()))
    }
}

/// One (assignment × RC draw) cell's sampled data.
struct CellSample {
    rates: ReadoutRates,
    trajectories: Vec<TrajectoryStat>,
    table: ShotTable,
}

/// Runs every (assignment × RC draw) cell for one term circuit. Folding
/// happens here so every consumer of the pipeline respects `fold_scale`;
/// the fold pattern is drawn once per term and shared across cells.
fn sample_cells(
    circuit: &Circuit,
    prep: &PreparedTerm,
    device: &DeviceModel,
    cfg: &EstimatorConfig,
    seed: u64,
    ti: u64,
) -> Result<Vec<CellSample>> {
    let folded = if cfg.fold_scale > 1.0 {
        fold_cnots(circuit, cfg.fold_scale, derive_seed(seed, &[DOMAIN_FOLD, ti]))?
    } else {
        circuit.clone()
    };
    let cells = cfg.assignments * cfg.rc_instances;
    let base = cfg.shots_per_term / cells as u64;
    let remainder = (cfg.shots_per_term % cells as u64) as usize;

    let mut out = Vec::with_capacity(cells);
    // Cells run sequentially here; parallelism comes from the term loop and
    // the trajectory batches underneath.
    for (ai, assignment) in prep.assignments.iter().enumerate() {
        for ri in 0..cfg.rc_instances {
            let cell = (ai * cfg.rc_instances + ri) as u64;
            let cell_shots = base + u64::from((cell as usize) < remainder);
            if cell_shots == 0 {
                continue;
            }
            let dressed =
                randomized_compile(&folded, derive_seed(seed, &[DOMAIN_RC, ti, cell]))?;
            let nc = NoiseConfig {
                device: device.clone(),
                assignment: assignment.clone(),
                window: prep.window.clone(),
                depolarizing_on: true,
                readout_on: true,
                shots_per_trajectory: cfg.shots_per_trajectory,
                seed: derive_seed(seed, &[DOMAIN_SAMPLE, ti, cell]),
            };
            let sample =
                sample_noisy_stats(&dressed, &nc, cell_shots, ExecPolicy::default())?;
            let rates = ReadoutRates::new(
                folded
                    .measured_qubits()
                    .iter()
                    .map(|&q| device.readout_e0(assignment.physical(prep.window[q])))
                    .collect(),
                folded
                    .measured_qubits()
                    .iter()
                    .map(|&q| device.readout_e1(assignment.physical(prep.window[q])))
                    .collect(),
            )?;
            out.push(CellSample {
                rates,
                trajectories: sample.trajectories,
                table: sample.table,
            });
        }
    }
    Ok(out)
}

/// Damping factor `C = measured / exact` with its propagated sigma.
pub fn measure_damping(
    ansatz: &Circuit,
    terms: &[PauliTerm],
    device: &DeviceModel,
    cfg: &EstimatorConfig,
    exact_energy: f64,
    seed: u64,
) -> Result<DampingEstimate> {
    if exact_energy.abs() <= 1e-9 {
        return Err(Error::UndefinedDamping(exact_energy));
    }
    let measured = measure_energy(ansatz, terms, device, cfg, seed)?;
    Ok(DampingEstimate {
        c: measured.value / exact_energy,
        sigma: measured.sigma / exact_energy.abs(),
        method: Method::Observed,
    })
}

/// Zero-rotation calibration fidelities: every measurement of the θ = 0
/// ansatz should read all zeros, and any miss is noise.
#[derive(Debug, Clone, Serialize)]
pub struct ZeroThetaFidelity {
    /// All-zeros probability pooled over the per-term cone circuits; the
    /// scalar used as the fidelity-variant damping estimate.
    pub pooled: DampingEstimate,
    /// All-zeros probability of the full register measured at once.
    pub register: DampingEstimate,
    /// Per-term-circuit fidelities (term, fidelity, sigma).
    pub per_term: Vec<(PauliTerm, f64, f64)>,
}

/// Measures all-zeros fidelities of the θ = 0 ansatz of shape `(n, l)`.
///
/// Per-term circuits are light-cone filtered like the energy pipeline but
/// carry no basis change (an H would turn the all-zeros check into a coin
/// flip); readout mitigation never applies — the miss probability *is*
/// the calibration signal.
pub fn measure_zero_theta_fidelity(
    shape: (usize, usize),
    terms: &[PauliTerm],
    device: &DeviceModel,
    cfg: &EstimatorConfig,
    seed: u64,
) -> Result<ZeroThetaFidelity> {
    let (n, layers) = shape;
    cfg.validate()?;
    let ansatz = build_alt_ansatz(n, &AnsatzParams::full(layers, vec![0.0; n * (layers + 1)]))?;

    // Per-term cone circuits without basis changes.
    let zero_cfg = EstimatorConfig {
        readout_mitigation: false,
        ..cfg.clone()
    };
    let plain_terms: Vec<PauliTerm> = terms
        .iter()
        .map(|t| PauliTerm {
            kind: if t.kind == TermKind::X {
                TermKind::Z // same support, no basis change
            } else {
                t.kind
            },
            ..t.clone()
        })
        .collect();
    let prepared = prepare_terms(&ansatz, &plain_terms, device, &zero_cfg)?;

    let results: Vec<Result<(ShotTable, PauliTerm)>> =
        exec::map_indexed(ExecPolicy::default(), prepared.len(), |ti| {
            let prep = &prepared[ti];
            let (pooled, _) = sample_cells(&prep.circuit, prep, device, &zero_cfg, seed, ti as u64)?;
            Ok((pooled, terms[ti].clone()))
        });

    let mut per_term = Vec::with_capacity(prepared.len());
    let mut zeros = 0u64;
    let mut total = 0u64;
    for r in results {
        let (table, term) = r?;
        let (p, sigma) = table.outcome_probability(&table.zeros_key())?;
        zeros += table.counts.get(&table.zeros_key()).copied().unwrap_or(0);
        total += table.shots;
        per_term.push((term, p, sigma));
    }
    let pooled_p = zeros as f64 / total as f64;
    let pooled_sigma = (pooled_p * (1.0 - pooled_p) / total as f64).sqrt();

    // Whole-register variant: one circuit measuring all n qubits.
    let register_circuit = decompose_to_basis(&ansatz)?;
    let register_prep = PreparedTerm {
        term: PauliTerm {
            coefficient: 0.0,
            support: vec![0],
            kind: TermKind::Z,
        },
        circuit: register_circuit.clone(),
        window: (0..n).collect(),
        assignments: device::select_assignments_windowed(
            device,
            &register_circuit,
            &(0..n).collect::<Vec<_>>(),
            cfg.assignments,
            ScoreOptions::default(),
        )?,
    };
    let (reg_table, _) = sample_cells(
        &register_circuit,
        &register_prep,
        device,
        &zero_cfg,
        seed,
        terms.len() as u64,
    )?;
    let (reg_p, reg_sigma) = reg_table.outcome_probability(&reg_table.zeros_key())?;

    Ok(ZeroThetaFidelity {
        pooled: DampingEstimate {
            c: pooled_p,
            sigma: pooled_sigma,
            method: Method::ZeroThetaFidelity,
        },
        register: DampingEstimate {
            c: reg_p,
            sigma: reg_sigma,
            method: Method::ZeroThetaFidelity,
        },
        per_term,
    })
}

/// Integer outcome counts of a table (bit j of the index is character j
/// of the key).
fn table_outcome_counts(table: &ShotTable) -> Vec<(usize, u64)> {
    table
        .counts
        .iter()
        .map(|(key, &count)| {
            let bits = key
                .bytes()
                .enumerate()
                .fold(0usize, |acc, (j, b)| acc | usize::from(b == b'1') << j);
            (bits, count)
        })
        .collect()
}

fn pipeline_digest(
    ansatz: &Circuit,
    terms: &[PauliTerm],
    device: &DeviceModel,
    cfg: &EstimatorConfig,
    seed: u64,
) -> String {
    #[derive(Serialize)]
    struct Provenance<'a> {
        ansatz: String,
        terms: &'a [PauliTerm],
        device: String,
        cfg: &'a EstimatorConfig,
        seed: u64,
    }
    digest::digest_json(&Provenance {
        ansatz: ansatz.digest(),
        terms,
        device: device.digest(),
        cfg,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::{expand_terms, IsingParams};
    use crate::simulator::exact_energy;

    fn small_setup() -> (Circuit, Vec<PauliTerm>, DeviceModel) {
        let n = 6;
        let params = AnsatzParams::full(2, vec![0.4; n * 3]);
        let ansatz = build_alt_ansatz(n, &params).unwrap();
        let h = IsingParams::new(n, 1.0, 1.5, 0.1).unwrap();
        let device = DeviceModel::uniform(n, 0.0, 0.0, 0.0, 0.0).unwrap();
        (ansatz, expand_terms(&h), device)
    }

    fn quick_cfg(shots: u64) -> EstimatorConfig {
        EstimatorConfig {
            shots_per_term: shots,
            assignments: 2,
            rc_instances: 2,
            readout_mitigation: true,
            fold_scale: 1.0,
            shots_per_trajectory: 64,
        }
    }

    #[test]
    fn noiseless_pipeline_matches_exact_energy() {
        let (ansatz, terms, device) = small_setup();
        let est = measure_energy(&ansatz, &terms, &device, &quick_cfg(4096), 5).unwrap();
        let exact = exact_energy(&ansatz, &terms).unwrap();
        assert!(
            (est.value - exact).abs() < 4.0 * est.sigma.max(1e-3),
            "measured {} vs exact {exact} (σ {})",
            est.value,
            est.sigma
        );
        assert_eq!(est.per_term.len(), terms.len());
        assert_eq!(est.clamped_terms, 0);
    }

    #[test]
    fn term_circuit_shapes() {
        let (ansatz, terms, _) = small_setup();
        // Z term: 1 measured qubit, no H anywhere.
        let z_term = terms.iter().find(|t| t.kind == TermKind::Z).unwrap();
        let tc = term_circuit(&ansatz, z_term).unwrap();
        assert_eq!(tc.measured_qubits().len(), 1);
        assert!(!tc.gates().iter().any(|g| matches!(g, Gate::H { .. })));
        // X term: exactly one H, which the decomposition merges away.
        let x_term = terms.iter().find(|t| t.kind == TermKind::X).unwrap();
        let tc = term_circuit(&ansatz, x_term).unwrap();
        assert_eq!(
            tc.gates()
                .iter()
                .filter(|g| matches!(g, Gate::H { .. }))
                .count(),
            1
        );
        let dec = decompose_to_basis(&tc).unwrap();
        assert!(dec.gates().iter().all(Gate::is_basis));
    }

    #[test]
    fn term_circuit_cone_size_at_depth() {
        // ZZ term on an l = 3, n = 20 ansatz lives on min(2+6, 20) = 8 qubits.
        let n = 20;
        let ansatz = build_alt_ansatz(n, &AnsatzParams::full(3, vec![0.2; n * 4])).unwrap();
        let zz = PauliTerm {
            coefficient: -1.0,
            support: vec![4, 5],
            kind: TermKind::Zz,
        };
        let tc = term_circuit(&ansatz, &zz).unwrap();
        assert_eq!(tc.n_qubits(), 8);
    }

    #[test]
    fn energy_linearity_in_coefficients() {
        let (ansatz, terms, device) = small_setup();
        let doubled: Vec<PauliTerm> = terms
            .iter()
            .map(|t| PauliTerm {
                coefficient: 2.0 * t.coefficient,
                ..t.clone()
            })
            .collect();
        let cfg = quick_cfg(512);
        let a = measure_energy(&ansatz, &terms, &device, &cfg, 17).unwrap();
        let b = measure_energy(&ansatz, &doubled, &device, &cfg, 17).unwrap();
        assert!((b.value - 2.0 * a.value).abs() < 1e-12);
    }

    #[test]
    fn determinism_and_budget_checks() {
        let (ansatz, terms, device) = small_setup();
        let cfg = quick_cfg(256);
        let a = measure_energy(&ansatz, &terms, &device, &cfg, 3).unwrap();
        let b = measure_energy(&ansatz, &terms, &device, &cfg, 3).unwrap();
        assert_eq!(a.value, b.value);
        assert_eq!(a.config_hash, b.config_hash);

        let starved = EstimatorConfig {
            shots_per_term: 3,
            ..cfg
        };
        assert!(matches!(
            measure_energy(&ansatz, &terms, &device, &starved, 3),
            Err(Error::ShotBudget { .. })
        ));
    }

    #[test]
    fn damping_under_zero_noise_is_unity() {
        let (ansatz, terms, device) = small_setup();
        let exact = exact_energy(&ansatz, &terms).unwrap();
        let d = measure_damping(&ansatz, &terms, &device, &quick_cfg(2048), exact, 11).unwrap();
        assert!((d.c - 1.0).abs() < 4.0 * d.sigma.max(1e-3), "C = {}", d.c);
        assert!(matches!(d.method, Method::Observed));
        assert!(measure_damping(&ansatz, &terms, &device, &quick_cfg(256), 0.0, 1).is_err());
    }

    #[test]
    fn zero_theta_fidelity_is_one_without_noise() {
        let n = 6;
        let h = IsingParams::new(n, 1.0, 1.5, 0.1).unwrap();
        let terms = expand_terms(&h);
        let device = DeviceModel::uniform(n, 0.0, 0.0, 0.0, 0.0).unwrap();
        let z = measure_zero_theta_fidelity((n, 2), &terms, &device, &quick_cfg(512), 2).unwrap();
        assert_eq!(z.pooled.c, 1.0);
        assert_eq!(z.register.c, 1.0);
        assert!(z.per_term.iter().all(|(_, f, _)| *f == 1.0));
    }

    #[test]
    fn zero_theta_fidelity_reflects_readout_error() {
        // Readout-only noise, 2 measured qubits at e0 = 0.05 → 0.9025.
        let n = 6;
        let h = IsingParams::new(n, 1.0, 0.0, 0.1).unwrap();
        let zz_only: Vec<PauliTerm> = expand_terms(&h)
            .into_iter()
            .filter(|t| t.kind == TermKind::Zz)
            .collect();
        let device = DeviceModel::uniform(n, 0.0, 0.0, 0.05, 0.1).unwrap();
        let cfg = EstimatorConfig {
            shots_per_term: 20_000,
            ..quick_cfg(20_000)
        };
        let z = measure_zero_theta_fidelity((n, 1), &zz_only, &device, &cfg, 4).unwrap();
        for (_, f, sigma) in &z.per_term {
            assert!(
                (f - 0.9025).abs() < 4.0 * sigma,
                "per-term fidelity {f} (σ {sigma})"
            );
        }
    }
}
