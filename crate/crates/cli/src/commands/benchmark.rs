//! `benchmark`: optimizes ansatz circuits over a layer sweep, runs every
//! requested mitigation method against the target Hamiltonian, and emits
//! the comparison report plus the effectiveness heatmap table.
//!
//! Readout-mitigation variants: target-circuit energies are always
//! readout-mitigated; whether the *calibration* measurements (perturbative
//! points, depth-fit curve, zero-theta energy, ZNE-combined calibration
//! legs) also get mitigation is the variant axis. The zero-theta fidelity
//! signal is a raw probability and never mitigated.

use crate::cache::Cache;
use crate::config::{BenchmarkConfig, CalibrationReadout};
use crate::report::{write_csv, Envelope};
use crate::{load_config, CliError, CliResult, CommonArgs};
use mitiq_forge_core::circuit::Circuit;
use mitiq_forge_core::device::DeviceModel;
use mitiq_forge_core::digest::{derive_seed, digest_json};
use mitiq_forge_core::estimator::{measure_energy, prepare_terms, EstimatorConfig};
use mitiq_forge_core::hamiltonian::{expand_terms, IsingParams, PauliTerm};
use mitiq_forge_core::mitigation::{
    classify_effectiveness, predict_from_depth, predict_from_pert, predict_multiply_fidelities,
    predict_noise_model_sim, predict_zero_theta, zne, zne_combined, DampingEstimate, Method,
    ZeroThetaVariant, ZneOrder,
};
use mitiq_forge_core::simulator::{exact_energy, exact_expectation};
use mitiq_forge_core::vqe::classical_optimize;
use mitiq_forge_core::Error as CoreError;
use serde::Serialize;
use std::collections::BTreeMap;

const SEED_OBSERVED: u64 = 0xb001;
const SEED_RAW: u64 = 0xb002;
const SEED_CURVE: u64 = 0xb003;
const SEED_PERT: u64 = 0xb004;
const SEED_ZT: u64 = 0xb005;
const SEED_ZNE: u64 = 0xb006;
const SEED_NMS: u64 = 0xb007;

#[derive(Debug, Clone, Serialize)]
struct Row {
    layers: usize,
    method: Method,
    /// True when calibration measurements include readout mitigation.
    readout_in_calibration: bool,
    status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    c_pred: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    c_sigma: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    e_mitigated: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    e_sigma: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    rel_error: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    class: Option<u8>,
}

#[derive(Serialize)]
struct LayerInfo {
    layers: usize,
    exact_circuit_energy: f64,
    e_raw: f64,
    e_raw_sigma: f64,
}

#[derive(Serialize)]
struct Report {
    device_digest: String,
    exact_ground_energy: f64,
    layer_info: Vec<LayerInfo>,
    rows: Vec<Row>,
}

/// Shared measurement state: optimized circuits and cached measurements.
struct Bench<'a> {
    cfg: &'a BenchmarkConfig,
    device: DeviceModel,
    seed: u64,
    cache: Cache,
    memo: BTreeMap<String, (f64, f64)>,
}

impl Bench<'_> {
    fn estimator(&self, readout_mitigation: bool, fold_scale: f64) -> EstimatorConfig {
        EstimatorConfig {
            readout_mitigation,
            fold_scale,
            ..self.cfg.estimator.clone()
        }
    }

    /// Classically optimized circuit for (h, layers); cached on disk and
    /// shared across seeds (optimization is noise-free and content-keyed).
    fn optimized_circuit(&mut self, h: &IsingParams, layers: usize) -> Result<Circuit, CliError> {
        #[derive(Serialize)]
        struct Key<'k> {
            h: &'k IsingParams,
            layers: usize,
            symmetric: bool,
            restarts: usize,
        }
        let key = digest_json(&Key {
            h,
            layers,
            symmetric: self.cfg.symmetric,
            restarts: self.cfg.optimizer_restarts,
        });
        if let Some(c) = self.cache.load_circuit(&key) {
            return Ok(c);
        }
        let opt_seed = derive_seed(0xc1ac, &[h.n as u64, layers as u64, h.h_x.to_bits()]);
        let opt = classical_optimize(
            h,
            (h.n, layers),
            self.cfg.symmetric,
            self.cfg.optimizer_restarts,
            opt_seed,
        )
        .map_err(|e| CliError::Run(e.into()))?;
        self.cache
            .store_circuit(&key, &opt.circuit)
            .map_err(CliError::Run)?;
        Ok(opt.circuit)
    }

    /// Content-keyed measured energy (value, sigma).
    fn cached_energy(
        &mut self,
        circuit: &Circuit,
        terms: &[PauliTerm],
        est: &EstimatorConfig,
        seed: u64,
    ) -> Result<(f64, f64), CoreError> {
        #[derive(Serialize)]
        struct Key<'k> {
            kind: &'static str,
            circuit: String,
            device: String,
            terms: &'k [PauliTerm],
            est: &'k EstimatorConfig,
            seed: u64,
        }
        let key = digest_json(&Key {
            kind: "energy",
            circuit: circuit.digest(),
            device: self.device.digest(),
            terms,
            est,
            seed,
        });
        if let Some(&v) = self.memo.get(&key) {
            return Ok(v);
        }
        if let Some(v) = self.cache.load_measurement(&key) {
            self.memo.insert(key, v);
            return Ok(v);
        }
        let e = measure_energy(circuit, terms, &self.device, est, seed)?;
        let v = (e.value, e.sigma);
        let _ = self.cache.store_measurement(&key, v.0, v.1);
        self.memo.insert(key, v);
        Ok(v)
    }

    fn cached_damping(
        &mut self,
        circuit: &Circuit,
        terms: &[PauliTerm],
        est: &EstimatorConfig,
        exact: f64,
        seed: u64,
    ) -> Result<(f64, f64), CoreError> {
        if exact.abs() <= 1e-9 {
            return Err(CoreError::UndefinedDamping(exact));
        }
        let (e, sigma) = self.cached_energy(circuit, terms, est, seed)?;
        Ok((e / exact, sigma / exact.abs()))
    }
}

pub fn run(args: &CommonArgs) -> CliResult {
    let (cfg, digest) = load_config::<BenchmarkConfig>(args)?;
    let seed = args.seed.unwrap_or(cfg.seed);
    let base = cfg.hamiltonian.params().map_err(CliError::Config)?;
    let terms = expand_terms(&base);

    let profile_text = std::fs::read_to_string(&cfg.device_profile).map_err(|e| {
        CliError::Config(anyhow::anyhow!(
            "cannot read device profile {}: {e}",
            cfg.device_profile
        ))
    })?;
    let mut device = DeviceModel::from_json(&profile_text).map_err(|e| CliError::Config(e.into()))?;
    if cfg.noise_scale != 1.0 {
        device = device
            .scale_errors(cfg.noise_scale)
            .map_err(|e| CliError::Config(e.into()))?;
    }
    if device.n_physical() != base.n {
        return Err(CliError::Config(anyhow::anyhow!(
            "device loop has {} qubits, Hamiltonian has {}",
            device.n_physical(),
            base.n
        )));
    }

    let cache = Cache::new(&args.out).map_err(CliError::Config)?;
    let mut bench = Bench {
        cfg: &cfg,
        device,
        seed,
        cache,
        memo: BTreeMap::new(),
    };

    let exact_ground = mitiq_forge_core::hamiltonian::exact_spectrum(&base, false)
        .map_err(|e| CliError::Run(e.into()))?
        .ground_energy;

    // Optimized target circuits and their exact energies, per layer count.
    let mut circuits = Vec::new();
    for &layers in &cfg.layers {
        let circuit = bench.optimized_circuit(&base, layers)?;
        let exact = exact_energy(&circuit, &terms).map_err(|e| CliError::Run(e.into()))?;
        circuits.push((layers, circuit, exact));
    }

    let variants: Vec<bool> = match cfg.readout_mitigation_in_calibration {
        CalibrationReadout::Both => vec![false, true],
        CalibrationReadout::On => vec![true],
        CalibrationReadout::Off => vec![false],
    };

    let mut rows: Vec<Row> = Vec::new();
    let mut layer_info = Vec::new();

    for &calib_readout in &variants {
        // Raw target energies (always readout-mitigated) and the observed
        // damping curve this variant's depth fit uses.
        let mut raws: Vec<(usize, f64, f64)> = Vec::new();
        let mut curve: Vec<(usize, f64, f64)> = Vec::new();
        for (layers, circuit, exact) in &circuits {
            let est = bench.estimator(true, 1.0);
            let raw = bench
                .cached_energy(circuit, &terms, &est, derive_seed(seed, &[SEED_RAW, *layers as u64]))
                .map_err(|e| CliError::Run(e.into()))?;
            raws.push((*layers, raw.0, raw.1));
            let est = bench.estimator(calib_readout, 1.0);
            let (c, c_sigma) = bench
                .cached_damping(
                    circuit,
                    &terms,
                    &est,
                    *exact,
                    derive_seed(seed, &[SEED_CURVE, *layers as u64]),
                )
                .map_err(|e| CliError::Run(e.into()))?;
            curve.push((*layers, c, c_sigma));
        }
        if calib_readout == *variants.last().expect("nonempty") {
            for ((layers, _, exact), (_, raw, raw_sigma)) in circuits.iter().zip(&raws) {
                layer_info.push(LayerInfo {
                    layers: *layers,
                    exact_circuit_energy: *exact,
                    e_raw: *raw,
                    e_raw_sigma: *raw_sigma,
                });
            }
        }

        for ((layers, circuit, exact), (_, e_raw, e_raw_sigma)) in circuits.iter().zip(&raws) {
            for &method in &cfg.methods {
                let cell = run_method(
                    &mut bench,
                    method,
                    *layers,
                    circuit,
                    &terms,
                    &base,
                    *exact,
                    &curve,
                    calib_readout,
                );
                rows.push(finish_row(
                    cell,
                    method,
                    *layers,
                    calib_readout,
                    *exact,
                    (*e_raw, *e_raw_sigma),
                ));
            }
        }
    }

    let csv_rows: Vec<String> = rows
        .iter()
        .map(|r| {
            format!(
                "{},{},{},{},{},{},{},{},{},{},{}",
                r.layers,
                method_tag(r.method),
                r.readout_in_calibration,
                opt(r.c_pred),
                opt(r.c_sigma),
                opt(r.e_mitigated),
                opt(r.e_sigma),
                opt(r.rel_error),
                r.class.map(|c| c.to_string()).unwrap_or_default(),
                r.status,
                r.error.clone().unwrap_or_default().replace(',', ";"),
            )
        })
        .collect();
    write_csv(
        &args.out.join("heatmap.csv"),
        "layers,method,readout_in_calibration,c_pred,c_sigma,e_mitigated,e_sigma,rel_error,class,status,error",
        &csv_rows,
    )
    .map_err(CliError::Run)?;

    let report = Report {
        device_digest: bench.device.digest(),
        exact_ground_energy: exact_ground,
        layer_info,
        rows,
    };
    Envelope::new(digest, seed, report)
        .write(&args.out.join("benchmark.json"))
        .map_err(CliError::Run)?;
    println!(
        "benchmark written to {}",
        args.out.join("benchmark.json").display()
    );
    Ok(())
}

/// Outcome of one method cell before grading.
enum CellOutcome {
    /// Damping prediction to divide the raw energy by.
    Damping(DampingEstimate),
    /// Direct mitigated energy (the ZNE family).
    Energy(f64, f64),
    Failed(String),
}

#[allow(clippy::too_many_arguments)]
fn run_method(
    bench: &mut Bench,
    method: Method,
    layers: usize,
    circuit: &Circuit,
    terms: &[PauliTerm],
    base: &IsingParams,
    exact: f64,
    curve: &[(usize, f64, f64)],
    calib_readout: bool,
) -> CellOutcome {
    let seed = bench.seed;
    let shape = (base.n, layers);
    let result: Result<CellOutcome, CoreError> = (|| {
        match method {
            Method::Observed => {
                let est = bench.estimator(true, 1.0);
                let (c, sigma) = bench.cached_damping(
                    circuit,
                    terms,
                    &est,
                    exact,
                    derive_seed(seed, &[SEED_OBSERVED, layers as u64]),
                )?;
                Ok(CellOutcome::Damping(DampingEstimate {
                    c,
                    sigma,
                    method: Method::Observed,
                }))
            }
            Method::Zne => {
                let est = bench.estimator(true, 1.0);
                let e = zne(
                    circuit,
                    terms,
                    &bench.device,
                    &est,
                    &bench.cfg.zne_scales,
                    derive_seed(seed, &[SEED_ZNE, layers as u64]),
                )?;
                Ok(CellOutcome::Energy(e.value, e.sigma))
            }
            Method::FromPert => {
                let mut points = Vec::new();
                for &h_x in &bench.cfg.perturbative_h_x {
                    let h = IsingParams::new(base.n, base.j, h_x, base.h_z)?;
                    let pert_circuit = bench
                        .optimized_circuit(&h, layers)
                        .map_err(|_| CoreError::Precondition("perturbative optimization failed".into()))?;
                    points.push((h_x, pert_circuit));
                }
                let est = bench.estimator(calib_readout, 1.0);
                let f = predict_from_pert(
                    base,
                    &points,
                    &bench.device,
                    &est,
                    derive_seed(seed, &[SEED_PERT, layers as u64]),
                )?;
                Ok(CellOutcome::Damping(f.estimate))
            }
            Method::DepthFit => {
                let d = predict_from_depth(curve, bench.cfg.l_max_fit, layers)?;
                Ok(CellOutcome::Damping(d))
            }
            Method::ZeroThetaFidelity => {
                let est = bench.estimator(false, 1.0);
                let d = predict_zero_theta(
                    shape,
                    terms,
                    &bench.device,
                    &est,
                    ZeroThetaVariant::Fidelity,
                    derive_seed(seed, &[SEED_ZT, layers as u64]),
                )?;
                Ok(CellOutcome::Damping(d))
            }
            Method::ZeroThetaEnergy => {
                let est = bench.estimator(calib_readout, 1.0);
                let d = predict_zero_theta(
                    shape,
                    terms,
                    &bench.device,
                    &est,
                    ZeroThetaVariant::Energy,
                    derive_seed(seed, &[SEED_ZT, layers as u64, 1]),
                )?;
                Ok(CellOutcome::Damping(d))
            }
            Method::ZneFirst | Method::ZneLast => {
                let order = if method == Method::ZneFirst {
                    ZneOrder::ZneFirst
                } else {
                    ZneOrder::ZneLast
                };
                // The target leg inside is always mitigated; the fidelity
                // calibration leg is a raw probability either way.
                let est = bench.estimator(true, 1.0);
                let e = zne_combined(
                    circuit,
                    terms,
                    &bench.device,
                    &est,
                    order,
                    &bench.cfg.zne_scales,
                    derive_seed(seed, &[SEED_ZNE, layers as u64, method_code(method)]),
                    shape,
                )?;
                Ok(CellOutcome::Energy(e.value, e.sigma))
            }
            Method::MultiplyFidelities => {
                let est = bench.estimator(true, 1.0);
                let prepared = prepare_terms(circuit, terms, &bench.device, &est)?;
                let weights: Vec<f64> = terms
                    .iter()
                    .map(|t| Ok(t.coefficient * exact_expectation(circuit, t)?))
                    .collect::<Result<_, CoreError>>()?;
                let d = predict_multiply_fidelities(&bench.device, &prepared, &weights)?;
                Ok(CellOutcome::Damping(d))
            }
            Method::NoiseModelSim => {
                let est = bench.estimator(true, 1.0);
                let d = predict_noise_model_sim(
                    circuit,
                    terms,
                    &bench.device,
                    &est,
                    exact,
                    derive_seed(seed, &[SEED_NMS, layers as u64]),
                )?;
                Ok(CellOutcome::Damping(d))
            }
        }
    })();
    match result {
        Ok(cell) => cell,
        Err(CoreError::FitFailure { reason, fallback }) => {
            let mut note = format!("fit failure: {reason}");
            if let Some(f) = fallback {
                note.push_str(&format!(
                    " (raw scale-1 energy {:.6} ± {:.6})",
                    f.value, f.sigma
                ));
            }
            CellOutcome::Failed(note)
        }
        Err(e) => CellOutcome::Failed(e.to_string()),
    }
}

/// Grades one cell against the circuit's exact energy. Damping methods
/// divide the raw target energy by their prediction; failed cells keep
/// their reason and grade as class 0.
fn finish_row(
    cell: CellOutcome,
    method: Method,
    layers: usize,
    calib_readout: bool,
    exact: f64,
    raw: (f64, f64),
) -> Row {
    let mut row = Row {
        layers,
        method,
        readout_in_calibration: calib_readout,
        status: "ok".into(),
        error: None,
        c_pred: None,
        c_sigma: None,
        e_mitigated: None,
        e_sigma: None,
        rel_error: None,
        class: None,
    };
    let graded = match cell {
        CellOutcome::Damping(d) => {
            if d.c.abs() < 1e-9 {
                Err(format!(
                    "predicted damping {:.3e} too small to divide by",
                    d.c
                ))
            } else {
                row.c_pred = Some(d.c);
                row.c_sigma = Some(d.sigma);
                Ok(d.mitigate(raw.0, raw.1))
            }
        }
        CellOutcome::Energy(value, sigma) => Ok((value, sigma)),
        CellOutcome::Failed(msg) => Err(msg),
    };
    match graded {
        Ok((e_mit, e_sigma)) => {
            row.e_mitigated = Some(e_mit);
            row.e_sigma = Some(e_sigma);
            row.rel_error = Some((e_mit - exact).abs() / exact.abs());
            row.class = Some(classify_effectiveness(e_mit, e_sigma, exact));
        }
        Err(msg) => {
            row.status = "failed".into();
            row.error = Some(msg);
            row.class = Some(0);
        }
    }
    row
}

fn method_tag(m: Method) -> &'static str {
    match m {
        Method::Observed => "observed",
        Method::Zne => "zne",
        Method::FromPert => "from_pert",
        Method::DepthFit => "depth_fit",
        Method::ZeroThetaFidelity => "zero_theta_fidelity",
        Method::ZeroThetaEnergy => "zero_theta_energy",
        Method::ZneFirst => "zne_first",
        Method::ZneLast => "zne_last",
        Method::MultiplyFidelities => "multiply_fidelities",
        Method::NoiseModelSim => "noise_model_sim",
    }
}

fn method_code(m: Method) -> u64 {
    m as u64
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}
