//! `ground-state`: exact spectrum and the three perturbative formulas
//! across an h_x sweep, as JSON and CSV tables.

use crate::config::GroundStateConfig;
use crate::report::{write_csv, Envelope};
use crate::{load_config, CliError, CliResult, CommonArgs};
use mitiq_forge_core::hamiltonian::{
    exact_spectrum, perturbative_energy_large_hx, perturbative_energy_small_hx,
    perturbative_energy_small_hz, IsingParams,
};
use serde::Serialize;

#[derive(Serialize)]
struct Row {
    h_x: f64,
    exact_ground: f64,
    exact_first_excited: f64,
    small_hx: Option<f64>,
    large_hx: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    small_hz: Option<f64>,
}

#[derive(Serialize)]
struct Report {
    n: usize,
    j: f64,
    h_z: f64,
    rows: Vec<Row>,
}

pub fn run(args: &CommonArgs) -> CliResult {
    let (cfg, digest) = load_config::<GroundStateConfig>(args)?;
    let seed = args.seed.unwrap_or(cfg.seed);

    let mut rows = Vec::with_capacity(cfg.h_x_values.len());
    for &h_x in &cfg.h_x_values {
        let params = IsingParams::new(cfg.n, cfg.j, h_x, cfg.h_z)
            .map_err(|e| CliError::Config(e.into()))?;
        let spectrum = exact_spectrum(&params, false).map_err(|e| CliError::Run(e.into()))?;
        let small_hz = if cfg.include_small_hz {
            Some(perturbative_energy_small_hz(&params).map_err(|e| CliError::Run(e.into()))?)
        } else {
            None
        };
        rows.push(Row {
            h_x,
            exact_ground: spectrum.ground_energy,
            exact_first_excited: spectrum.first_excited_energy,
            small_hx: perturbative_energy_small_hx(&params).ok(),
            large_hx: perturbative_energy_large_hx(&params).ok(),
            small_hz,
        });
    }

    let csv_rows: Vec<String> = rows
        .iter()
        .map(|r| {
            format!(
                "{},{},{},{},{},{}",
                r.h_x,
                r.exact_ground,
                r.exact_first_excited,
                r.small_hx.map(|v| v.to_string()).unwrap_or_default(),
                r.large_hx.map(|v| v.to_string()).unwrap_or_default(),
                r.small_hz.map(|v| v.to_string()).unwrap_or_default(),
            )
        })
        .collect();
    write_csv(
        &args.out.join("ground_state.csv"),
        "h_x,exact_ground,exact_first_excited,small_hx,large_hx,small_hz",
        &csv_rows,
    )
    .map_err(CliError::Run)?;

    let report = Report {
        n: cfg.n,
        j: cfg.j,
        h_z: cfg.h_z,
        rows,
    };
    Envelope::new(digest, seed, report)
        .write(&args.out.join("ground_state.json"))
        .map_err(CliError::Run)?;
    println!(
        "ground-state sweep written to {}",
        args.out.join("ground_state.json").display()
    );
    Ok(())
}
