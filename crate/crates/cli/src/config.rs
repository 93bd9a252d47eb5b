//! Experiment configuration schemas.
//!
//! Every subcommand takes a JSON config validated against these structs;
//! unknown keys are rejected so typos fail loudly before any computation.

use mitiq_forge_core::estimator::EstimatorConfig;
use mitiq_forge_core::hamiltonian::IsingParams;
use mitiq_forge_core::mitigation::Method;
use mitiq_forge_core::vqe::SpsaConfig;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HamiltonianConfig {
    pub n: usize,
    #[serde(default = "one")]
    pub j: f64,
    pub h_x: f64,
    #[serde(default = "default_hz")]
    pub h_z: f64,
}

fn one() -> f64 {
    1.0
}

fn default_hz() -> f64 {
    0.1
}

impl HamiltonianConfig {
    pub fn params(&self) -> anyhow::Result<IsingParams> {
        Ok(IsingParams::new(self.n, self.j, self.h_x, self.h_z)?)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnsatzConfig {
    pub layers: usize,
    #[serde(default = "yes")]
    pub symmetric: bool,
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroundStateConfig {
    pub n: usize,
    #[serde(default = "one")]
    pub j: f64,
    #[serde(default = "default_hz")]
    pub h_z: f64,
    pub h_x_values: Vec<f64>,
    /// Small-h_z perturbation needs a dense eigendecomposition; off by
    /// default because it is only practical to n ≈ 12.
    #[serde(default)]
    pub include_small_hz: bool,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ObjectiveKind {
    Exact,
    Noisy,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptimizeConfig {
    pub hamiltonian: HamiltonianConfig,
    pub ansatz: AnsatzConfig,
    pub objective: ObjectiveKind,
    /// Device profile path; required for the noisy objective.
    #[serde(default)]
    pub device_profile: Option<String>,
    #[serde(default)]
    pub estimator: EstimatorConfig,
    #[serde(default)]
    pub spsa: SpsaConfig,
    /// Apply ZNE to every objective evaluation (the one mitigation usable
    /// during optimization).
    #[serde(default)]
    pub zne_during_optimization: bool,
    #[serde(default = "default_zne_scales")]
    pub zne_scales: Vec<f64>,
    #[serde(default)]
    pub seed: u64,
}

pub fn default_zne_scales() -> Vec<f64> {
    vec![1.0, 3.0, 5.0]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CalibrationReadout {
    /// Emit both variants.
    Both,
    /// Readout mitigation applied to every energy evaluation.
    On,
    /// Calibration circuits measured without readout mitigation.
    Off,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchmarkConfig {
    pub hamiltonian: HamiltonianConfig,
    /// h_x values spanning the perturbative regime for `from_pert`.
    #[serde(default = "default_pert_hx")]
    pub perturbative_h_x: Vec<f64>,
    /// Ansatz layer sweep.
    pub layers: Vec<usize>,
    #[serde(default = "yes")]
    pub symmetric: bool,
    pub device_profile: String,
    /// Multiplies every device error rate; 1 keeps the profile as is.
    #[serde(default = "one")]
    pub noise_scale: f64,
    #[serde(default)]
    pub estimator: EstimatorConfig,
    #[serde(default = "default_zne_scales")]
    pub zne_scales: Vec<f64>,
    #[serde(default = "default_l_max_fit")]
    pub l_max_fit: usize,
    #[serde(default = "default_restarts")]
    pub optimizer_restarts: usize,
    pub methods: Vec<Method>,
    #[serde(default = "default_calibration_readout")]
    pub readout_mitigation_in_calibration: CalibrationReadout,
    #[serde(default)]
    pub seed: u64,
}

fn default_pert_hx() -> Vec<f64> {
    vec![0.1, 0.2, 0.3, 0.4, 0.5]
}

fn default_l_max_fit() -> usize {
    15
}

fn default_restarts() -> usize {
    2
}

fn default_calibration_readout() -> CalibrationReadout {
    CalibrationReadout::Both
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReadoutStudyConfig {
    #[serde(default = "default_n_values")]
    pub n_values: Vec<usize>,
    #[serde(default = "default_e0")]
    pub e0: f64,
    #[serde(default = "default_e1")]
    pub e1: f64,
    /// Target parities, equally spaced over [−1, 1].
    #[serde(default = "default_parities")]
    pub parities: usize,
    #[serde(default = "default_samples")]
    pub samples_per_parity: usize,
    #[serde(default)]
    pub seed: u64,
}

fn default_n_values() -> Vec<usize> {
    vec![1, 2, 3, 4, 10, 11]
}

fn default_e0() -> f64 {
    0.05
}

fn default_e1() -> f64 {
    0.1
}

fn default_parities() -> usize {
    21
}

fn default_samples() -> usize {
    50
}
