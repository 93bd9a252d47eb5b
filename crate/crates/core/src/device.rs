//! Simulated loop-topology backend: per-gate error rates, readout rates,
//! and assignment scoring.
//!
//! Profiles load from JSON mirroring hardware backend properties:
//!
//! ```json
//! {
//!   "n": 12,
//!   "readout_e0": [0.01, ...],
//!   "readout_e1": [0.03, ...],
//!   "cnot_error": { "0-1": 0.011, "1-2": 0.008, ... },
//!   "sq_error": [0.001, ...]
//! }
//! ```
//!
//! Frozen files stand in for the daily hardware calibrations, keeping every
//! run reproducible.

use crate::circuit::{enumerate_assignments, Circuit, Gate, QubitAssignment};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Per-gate and per-qubit error rates on a loop of `n_physical` qubits.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeviceModel {
    n_physical: usize,
    /// CNOT depolarizing probability per adjacent pair, keyed canonically.
    cnot_error: BTreeMap<(usize, usize), f64>,
    /// P(read 1 | prepared 0) per qubit.
    readout_e0: Vec<f64>,
    /// P(read 0 | prepared 1) per qubit.
    readout_e1: Vec<f64>,
    /// Single-qubit basis-gate depolarizing probability per qubit.
    single_qubit_error: Vec<f64>,
}

/// What the fidelity product in assignment scoring includes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScoreOptions {
    pub include_single_qubit_gates: bool,
    pub include_readout: bool,
}

impl Default for ScoreOptions {
    fn default() -> Self {
        Self {
            include_single_qubit_gates: true,
            include_readout: false,
        }
    }
}

/// On-disk JSON schema for device profiles.
#[derive(Debug, Serialize, Deserialize)]
struct DeviceProfileJson {
    n: usize,
    readout_e0: Vec<f64>,
    readout_e1: Vec<f64>,
    cnot_error: BTreeMap<String, f64>,
    sq_error: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    note: Option<String>,
}

impl DeviceModel {
    /// Builds and validates a model. Every probability must lie in
    /// [0, 0.5) and every adjacent loop pair must carry a CNOT rate.
    pub fn new(
        n_physical: usize,
        cnot_error: BTreeMap<(usize, usize), f64>,
        readout_e0: Vec<f64>,
        readout_e1: Vec<f64>,
        single_qubit_error: Vec<f64>,
    ) -> Result<Self> {
        if n_physical < 3 {
            return Err(Error::DeviceProfile(format!(
                "loop devices need n ≥ 3, got {n_physical}"
            )));
        }
        let canonical: BTreeMap<(usize, usize), f64> = cnot_error
            .into_iter()
            .map(|((a, b), p)| (canonical_pair(n_physical, a, b), p))
            .collect();
        for q in 0..n_physical {
            let pair = canonical_pair(n_physical, q, (q + 1) % n_physical);
            if !canonical.contains_key(&pair) {
                return Err(Error::DeviceProfile(format!(
                    "missing CNOT error for loop edge {}-{}",
                    pair.0, pair.1
                )));
            }
        }
        let model = Self {
            n_physical,
            cnot_error: canonical,
            readout_e0,
            readout_e1,
            single_qubit_error,
        };
        model.validate()?;
        Ok(model)
    }

    fn validate(&self) -> Result<()> {
        let n = self.n_physical;
        for (name, v) in [
            ("readout_e0", &self.readout_e0),
            ("readout_e1", &self.readout_e1),
            ("sq_error", &self.single_qubit_error),
        ] {
            if v.len() != n {
                return Err(Error::DeviceProfile(format!(
                    "{name} has {} entries, expected {n}",
                    v.len()
                )));
            }
        }
        let ok = |p: f64| (0.0..0.5).contains(&p);
        if !self
            .readout_e0
            .iter()
            .chain(&self.readout_e1)
            .chain(&self.single_qubit_error)
            .chain(self.cnot_error.values())
            .all(|&p| ok(p))
        {
            return Err(Error::DeviceProfile(
                "all error probabilities must lie in [0, 0.5)".into(),
            ));
        }
        Ok(())
    }

    /// Homogeneous device, mostly for tests: one CNOT rate, one
    /// single-qubit rate, one readout pair everywhere.
    pub fn uniform(n: usize, cnot: f64, sq: f64, e0: f64, e1: f64) -> Result<Self> {
        let mut edges = BTreeMap::new();
        for q in 0..n {
            edges.insert((q, (q + 1) % n), cnot);
        }
        Self::new(n, edges, vec![e0; n], vec![e1; n], vec![sq; n])
    }

    /// Parses the JSON profile schema.
    pub fn from_json(text: &str) -> Result<Self> {
        let profile: DeviceProfileJson = serde_json::from_str(text)
            .map_err(|e| Error::DeviceProfile(format!("malformed profile JSON: {e}")))?;
        let mut edges = BTreeMap::new();
        for (key, p) in profile.cnot_error {
            let (a, b) = key
                .split_once('-')
                .ok_or_else(|| Error::DeviceProfile(format!("bad edge key {key:?}")))?;
            let a: usize = a
                .parse()
                .map_err(|_| Error::DeviceProfile(format!("bad edge key {key:?}")))?;
            let b: usize = b
                .parse()
                .map_err(|_| Error::DeviceProfile(format!("bad edge key {key:?}")))?;
            edges.insert((a, b), p);
        }
        Self::new(
            profile.n,
            edges,
            profile.readout_e0,
            profile.readout_e1,
            profile.sq_error,
        )
    }

    /// Serializes back to the JSON profile schema.
    pub fn to_json(&self, note: Option<String>) -> String {
        let profile = DeviceProfileJson {
            n: self.n_physical,
            readout_e0: self.readout_e0.clone(),
            readout_e1: self.readout_e1.clone(),
            cnot_error: self
                .cnot_error
                .iter()
                .map(|(&(a, b), &p)| (format!("{a}-{b}"), p))
                .collect(),
            sq_error: self.single_qubit_error.clone(),
            note,
        };
        serde_json::to_string_pretty(&profile).expect("profile serialization cannot fail")
    }

    pub fn n_physical(&self) -> usize {
        self.n_physical
    }

    pub fn cnot_error(&self, a: usize, b: usize) -> f64 {
        self.cnot_error[&canonical_pair(self.n_physical, a, b)]
    }

    pub fn single_qubit_error(&self, q: usize) -> f64 {
        self.single_qubit_error[q]
    }

    pub fn readout_e0(&self, q: usize) -> f64 {
        self.readout_e0[q]
    }

    pub fn readout_e1(&self, q: usize) -> f64 {
        self.readout_e1[q]
    }

    /// Same device with all error rates multiplied by `factor` (clamped
    /// below 0.5). Used to study stronger or weaker noise regimes.
    pub fn scale_errors(&self, factor: f64) -> Result<Self> {
        let clamp = |p: f64| (p * factor).min(0.4999);
        Self::new(
            self.n_physical,
            self.cnot_error
                .iter()
                .map(|(&e, &p)| (e, clamp(p)))
                .collect(),
            self.readout_e0.iter().map(|&p| clamp(p)).collect(),
            self.readout_e1.iter().map(|&p| clamp(p)).collect(),
            self.single_qubit_error.iter().map(|&p| clamp(p)).collect(),
        )
    }

    /// Same device with readout errors zeroed (pure gate noise).
    pub fn without_readout(&self) -> Self {
        Self {
            readout_e0: vec![0.0; self.n_physical],
            readout_e1: vec![0.0; self.n_physical],
            ..self.clone()
        }
    }

    /// Same device with gate errors zeroed (pure readout noise).
    pub fn without_gate_noise(&self) -> Self {
        Self {
            cnot_error: self.cnot_error.keys().map(|&e| (e, 0.0)).collect(),
            single_qubit_error: vec![0.0; self.n_physical],
            ..self.clone()
        }
    }

    /// Content digest for caching and report provenance.
    pub fn digest(&self) -> String {
        crate::digest::digest_bytes(self.to_json(None).as_bytes())
    }
}

fn canonical_pair(n: usize, a: usize, b: usize) -> (usize, usize) {
    // Loop edges are undirected; key by the lower endpoint, with the wrap
    // edge keyed as (n−1, 0).
    if (a + 1) % n == b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Predicted damping of `circuit` under assignment `a`: the product of
/// gate fidelities `Π(1 − e_gate)` with the gate's physical location under
/// the assignment. `window` maps circuit qubits to logical loop positions
/// (identity for full-loop circuits). Pauli frame gates are noiseless and
/// do not enter the product.
pub fn score_assignment_windowed(
    device: &DeviceModel,
    circuit: &Circuit,
    window: &[usize],
    assignment: &QubitAssignment,
    opts: ScoreOptions,
) -> f64 {
    let phys = |q: usize| assignment.physical(window[q]);
    let mut score = 1.0;
    for g in circuit.gates() {
        match *g {
            Gate::Cnot { control, target } => {
                score *= 1.0 - device.cnot_error(phys(control), phys(target));
            }
            Gate::Ry { qubit, .. } | Gate::Rz { qubit, .. } | Gate::SqrtX { qubit } => {
                if opts.include_single_qubit_gates {
                    score *= 1.0 - device.single_qubit_error(phys(qubit));
                }
            }
            Gate::Pauli { .. } | Gate::H { .. } => {}
        }
    }
    if opts.include_readout {
        for &q in circuit.measured_qubits() {
            let pq = phys(q);
            score *= 1.0 - 0.5 * (device.readout_e0(pq) + device.readout_e1(pq));
        }
    }
    score
}

/// Fidelity-product score for a full-loop circuit under default options.
pub fn score_assignment(device: &DeviceModel, circuit: &Circuit, a: &QubitAssignment) -> f64 {
    let window: Vec<usize> = (0..circuit.n_qubits()).collect();
    score_assignment_windowed(device, circuit, &window, a, ScoreOptions::default())
}

/// The `count` highest-scoring assignments for `circuit` (window-aware),
/// ties broken by (rotation, reflected) order.
pub fn select_assignments_windowed(
    device: &DeviceModel,
    circuit: &Circuit,
    window: &[usize],
    count: usize,
    opts: ScoreOptions,
) -> Result<Vec<QubitAssignment>> {
    let all = enumerate_assignments(device.n_physical())?;
    if count > all.len() {
        return Err(Error::Precondition(format!(
            "requested {count} assignments, loop only has {}",
            all.len()
        )));
    }
    let mut scored: Vec<(f64, QubitAssignment)> = all
        .into_iter()
        .map(|a| {
            (
                score_assignment_windowed(device, circuit, window, &a, opts),
                a,
            )
        })
        .collect();
    scored.sort_by(|(sa, a), (sb, b)| {
        sb.total_cmp(sa)
            .then_with(|| (a.rotation(), a.reflected()).cmp(&(b.rotation(), b.reflected())))
    });
    Ok(scored.into_iter().take(count).map(|(_, a)| a).collect())
}

/// Top-`count` assignments for a full-loop circuit under default options.
pub fn select_assignments(
    device: &DeviceModel,
    circuit: &Circuit,
    count: usize,
) -> Result<Vec<QubitAssignment>> {
    let window: Vec<usize> = (0..circuit.n_qubits()).collect();
    select_assignments_windowed(device, circuit, &window, count, ScoreOptions::default())
}
