//! `optimize`: SPSA variational optimization against an exact or noisy
//! objective, emitting the best circuit and the iteration trace.

use crate::config::{ObjectiveKind, OptimizeConfig};
use crate::report::Envelope;
use crate::{load_config, CliError, CliResult, CommonArgs};
use mitiq_forge_core::circuit::{build_alt_ansatz, AnsatzParams};
use mitiq_forge_core::device::DeviceModel;
use mitiq_forge_core::digest::derive_seed;
use mitiq_forge_core::estimator::measure_energy;
use mitiq_forge_core::hamiltonian::expand_terms;
use mitiq_forge_core::mitigation::zne;
use mitiq_forge_core::simulator::exact_energy;
use mitiq_forge_core::vqe::{spsa_optimize, SpsaOutcome};
use serde::Serialize;

#[derive(Serialize)]
struct Report {
    n: usize,
    layers: usize,
    symmetric: bool,
    objective: ObjectiveKind,
    best_measured_energy: f64,
    best_exact_energy: f64,
    iterations: usize,
    circuit_file: String,
    trace_file: String,
}

pub fn run(args: &CommonArgs) -> CliResult {
    let (cfg, digest) = load_config::<OptimizeConfig>(args)?;
    let seed = args.seed.unwrap_or(cfg.seed);
    let h = cfg.hamiltonian.params().map_err(CliError::Config)?;
    let n = h.n;
    let layers = cfg.ansatz.layers;
    let terms = expand_terms(&h);
    let dim = if cfg.ansatz.symmetric {
        2 * (layers + 1)
    } else {
        n * (layers + 1)
    };

    let device = match cfg.objective {
        ObjectiveKind::Noisy => {
            let path = cfg.device_profile.as_ref().ok_or_else(|| {
                CliError::Config(anyhow::anyhow!(
                    "noisy objective needs a device_profile path"
                ))
            })?;
            let text = std::fs::read_to_string(path).map_err(|e| {
                CliError::Config(anyhow::anyhow!("cannot read device profile {path}: {e}"))
            })?;
            Some(DeviceModel::from_json(&text).map_err(|e| CliError::Config(e.into()))?)
        }
        ObjectiveKind::Exact => None,
    };
    if let Some(d) = &device {
        if d.n_physical() != n {
            return Err(CliError::Config(anyhow::anyhow!(
                "device loop has {} qubits, Hamiltonian has {n}",
                d.n_physical()
            )));
        }
    }

    let build = |values: &[f64]| {
        let params = if cfg.ansatz.symmetric {
            AnsatzParams::symmetric(layers, values.to_vec())
        } else {
            AnsatzParams::full(layers, values.to_vec())
        };
        build_alt_ansatz(n, &params)
    };

    let objective = |values: &[f64], eval: u64| -> mitiq_forge_core::Result<(f64, f64)> {
        let circuit = build(values)?;
        match (&device, cfg.objective) {
            (_, ObjectiveKind::Exact) => Ok((exact_energy(&circuit, &terms)?, 0.0)),
            (Some(d), ObjectiveKind::Noisy) => {
                let eval_seed = derive_seed(seed, &[0xe7a1, eval]);
                if cfg.zne_during_optimization {
                    let est = zne(&circuit, &terms, d, &cfg.estimator, &cfg.zne_scales, eval_seed)?;
                    Ok((est.value, est.sigma))
                } else {
                    let est = measure_energy(&circuit, &terms, d, &cfg.estimator, eval_seed)?;
                    Ok((est.value, est.sigma))
                }
            }
            (None, ObjectiveKind::Noisy) => unreachable!("validated above"),
        }
    };

    // Exact reference for the observed-damping column of the trace.
    let reference = |values: &[f64]| -> f64 {
        build(values)
            .and_then(|c| exact_energy(&c, &terms))
            .unwrap_or(f64::NAN)
    };
    let want_reference = matches!(cfg.objective, ObjectiveKind::Noisy);

    let outcome: SpsaOutcome = spsa_optimize(
        objective,
        dim,
        &cfg.spsa,
        seed,
        want_reference.then_some(reference),
    )
    .map_err(|e| CliError::Run(e.into()))?;

    let best_circuit = build(&outcome.best_params).map_err(|e| CliError::Run(e.into()))?;
    let best_exact = exact_energy(&best_circuit, &terms).map_err(|e| CliError::Run(e.into()))?;

    let circuit_file = args.out.join("best_circuit.txt");
    std::fs::write(&circuit_file, best_circuit.to_text()).map_err(|e| CliError::Run(e.into()))?;
    let trace_file = args.out.join("trace.csv");
    std::fs::write(&trace_file, outcome.trace.to_csv()).map_err(|e| CliError::Run(e.into()))?;

    let report = Report {
        n,
        layers,
        symmetric: cfg.ansatz.symmetric,
        objective: cfg.objective,
        best_measured_energy: outcome.best_energy,
        best_exact_energy: best_exact,
        iterations: outcome.trace.records.len(),
        circuit_file: "best_circuit.txt".into(),
        trace_file: "trace.csv".into(),
    };
    Envelope::new(digest, seed, report)
        .write(&args.out.join("optimize.json"))
        .map_err(CliError::Run)?;
    println!(
        "optimization finished: best measured {:.6}, exact at best θ {:.6}",
        outcome.best_energy, best_exact
    );
    Ok(())
}
