//! `readout-study`: biased-parity scatter and residual tables across
//! measured-qubit counts, mirroring the random-distribution methodology
//! of the readout-error analysis.

use crate::config::ReadoutStudyConfig;
use crate::report::{write_csv, Envelope};
use crate::{load_config, CliError, CliResult, CommonArgs};
use mitiq_forge_core::readout::{
    biased_parity_approx, biased_parity_exact, biased_parity_n1, biased_parity_n2_bounds,
    ReadoutRates,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

#[derive(Serialize)]
struct ScatterPoint {
    n: usize,
    parity: f64,
    biased_exact: f64,
    model: f64,
    residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    lo: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    hi: Option<f64>,
}

#[derive(Serialize)]
struct NSummary {
    n: usize,
    model: &'static str,
    rms_residual: f64,
    max_abs_residual: f64,
    bound_violations: usize,
}

#[derive(Serialize)]
struct Report {
    e0: f64,
    e1: f64,
    summaries: Vec<NSummary>,
}

/// Random distribution over N-bit strings with an exact target parity.
fn random_f_with_parity(rng: &mut ChaCha8Rng, n: usize, parity: f64) -> Vec<f64> {
    let dim = 1usize << n;
    let mut f = vec![0.0; dim];
    let (even, odd): (Vec<usize>, Vec<usize>) =
        (0..dim).partition(|q| q.count_ones() % 2 == 0);
    for (class, mass) in [(even, (1.0 + parity) / 2.0), (odd, (1.0 - parity) / 2.0)] {
        let mut weights: Vec<f64> = class.iter().map(|_| -rng.gen::<f64>().max(1e-300).ln()).collect();
        let total: f64 = weights.iter().sum();
        weights.iter_mut().for_each(|w| *w /= total);
        for (q, w) in class.iter().zip(weights) {
            f[*q] = mass * w;
        }
    }
    f
}

pub fn run(args: &CommonArgs) -> CliResult {
    let (cfg, digest) = load_config::<ReadoutStudyConfig>(args)?;
    let seed = args.seed.unwrap_or(cfg.seed);
    if cfg.parities < 2 {
        return Err(CliError::Config(anyhow::anyhow!(
            "need at least 2 parity grid points"
        )));
    }

    let mut scatter: Vec<ScatterPoint> = Vec::new();
    let mut summaries = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    for &n in &cfg.n_values {
        if n == 0 || n > 16 {
            return Err(CliError::Config(anyhow::anyhow!(
                "measured qubit count {n} outside [1, 16]"
            )));
        }
        let rates =
            ReadoutRates::uniform(n, cfg.e0, cfg.e1).map_err(|e| CliError::Config(e.into()))?;
        let model_name = match n {
            1 => "n1_exact",
            2 => "n2_midpoint",
            _ => "avg_slope",
        };
        let mut sq_sum = 0.0;
        let mut max_abs = 0.0f64;
        let mut violations = 0usize;
        let mut count = 0usize;
        for k in 0..cfg.parities {
            let parity = -1.0 + 2.0 * k as f64 / (cfg.parities - 1) as f64;
            for _ in 0..cfg.samples_per_parity {
                let f = random_f_with_parity(&mut rng, n, parity);
                let exact =
                    biased_parity_exact(&f, &rates).map_err(|e| CliError::Run(e.into()))?;
                let (model, lo, hi) = match n {
                    1 => (biased_parity_n1(parity, &rates), None, None),
                    2 => {
                        let (lo, hi, mid) = biased_parity_n2_bounds(parity, &rates);
                        if exact < lo - 1e-12 || exact > hi + 1e-12 {
                            violations += 1;
                        }
                        (mid, Some(lo), Some(hi))
                    }
                    _ => (biased_parity_approx(parity, &rates).0, None, None),
                };
                let residual = exact - model;
                sq_sum += residual * residual;
                max_abs = max_abs.max(residual.abs());
                count += 1;
                scatter.push(ScatterPoint {
                    n,
                    parity,
                    biased_exact: exact,
                    model,
                    residual,
                    lo,
                    hi,
                });
            }
        }
        summaries.push(NSummary {
            n,
            model: model_name,
            rms_residual: (sq_sum / count as f64).sqrt(),
            max_abs_residual: max_abs,
            bound_violations: violations,
        });
    }

    let csv_rows: Vec<String> = scatter
        .iter()
        .map(|p| {
            format!(
                "{},{},{},{},{},{},{}",
                p.n,
                p.parity,
                p.biased_exact,
                p.model,
                p.residual,
                p.lo.map(|v| v.to_string()).unwrap_or_default(),
                p.hi.map(|v| v.to_string()).unwrap_or_default(),
            )
        })
        .collect();
    write_csv(
        &args.out.join("readout_scatter.csv"),
        "n,parity,biased_exact,model,residual,lo,hi",
        &csv_rows,
    )
    .map_err(CliError::Run)?;

    let summary_rows: Vec<String> = summaries
        .iter()
        .map(|s| {
            format!(
                "{},{},{},{},{}",
                s.n, s.model, s.rms_residual, s.max_abs_residual, s.bound_violations
            )
        })
        .collect();
    write_csv(
        &args.out.join("readout_summary.csv"),
        "n,model,rms_residual,max_abs_residual,bound_violations",
        &summary_rows,
    )
    .map_err(CliError::Run)?;

    let report = Report {
        e0: cfg.e0,
        e1: cfg.e1,
        summaries,
    };
    Envelope::new(digest, seed, report)
        .write(&args.out.join("readout_study.json"))
        .map_err(CliError::Run)?;
    println!(
        "readout study written to {}",
        args.out.join("readout_study.json").display()
    );
    Ok(())
}
