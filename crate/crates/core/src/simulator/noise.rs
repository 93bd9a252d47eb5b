//! Noisy sampling via stochastic Pauli trajectories.
//!
//! Depolarizing noise is realized trajectory-wise: after each noisy gate,
//! with probability equal to that gate's device error rate, a uniformly
//! random non-identity Pauli is inserted on the gate's qubits (one of 3
//! for single-qubit gates, one of 15 for CNOT). Averaged over
//! trajectories this reproduces the depolarizing channel; the channel
//! equivalence is pinned by the density-matrix oracle tests. Readout
//! errors flip each measured bit independently after sampling.
//!
//! Each trajectory owns a counter-based RNG stream derived from
//! `(seed, trajectory index)`, so tables are reproducible and trajectory
//! order is irrelevant: merging is associative and commutative.

use super::shot_table::ShotTable;
use super::state::State;
use crate::circuit::{Circuit, Gate, QubitAssignment};
use crate::device::DeviceModel;
use crate::exec::{self, ExecPolicy};
use crate::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Noise model attached to one sampling run.
#[derive(Debug, Clone, Serialize)]
pub struct NoiseConfig {
    pub device: DeviceModel,
    pub assignment: QubitAssignment,
    /// Logical loop position of each circuit qubit; identity for circuits
    /// living on the full loop, the cone window for filtered circuits.
    pub window: Vec<usize>,
    pub depolarizing_on: bool,
    pub readout_on: bool,
    pub shots_per_trajectory: u64,
    pub seed: u64,
}

impl NoiseConfig {
    /// Config for a circuit on the full loop under the identity assignment.
    pub fn full_loop(device: DeviceModel, seed: u64) -> Result<Self> {
        let n = device.n_physical();
        Ok(Self {
            device,
            assignment: QubitAssignment::identity(n)?,
            window: (0..n).collect(),
            depolarizing_on: true,
            readout_on: true,
            shots_per_trajectory: 32,
            seed,
        })
    }
}

/// Per-gate error rates and per-measured-bit readout rates after resolving
/// window and assignment.
struct ResolvedNoise {
    gate_rates: Vec<f64>,
    readout: Vec<(f64, f64)>,
}

fn resolve(c: &Circuit, nc: &NoiseConfig) -> Result<ResolvedNoise> {
    if nc.shots_per_trajectory == 0 {
        return Err(Error::Precondition("shots_per_trajectory must be ≥ 1".into()));
    }
    if nc.window.len() != c.n_qubits() {
        return Err(Error::Precondition(format!(
            "noise window covers {} qubits, circuit has {}",
            nc.window.len(),
            c.n_qubits()
        )));
    }
    if c.measured_qubits().is_empty() {
        return Err(Error::Precondition("no measured qubits to sample".into()));
    }
    let phys = |q: usize| nc.assignment.physical(nc.window[q]);
    let gate_rates = c
        .gates()
        .iter()
        .enumerate()
        .map(|(i, g)| match *g {
            Gate::Cnot { control, target } => {
                Ok(nc.device.cnot_error(phys(control), phys(target)))
            }
            Gate::Rz { qubit, .. } | Gate::SqrtX { qubit } => {
                Ok(nc.device.single_qubit_error(phys(qubit)))
            }
            // Randomized-compiling frame changes carry no noise.
            Gate::Pauli { .. } => Ok(0.0),
            Gate::Ry { .. } | Gate::H { .. } => Err(Error::Precondition(format!(
                "gate {i} is not a basis gate; decompose the circuit before noisy sampling"
            ))),
        })
        .collect::<Result<Vec<f64>>>()?;
    let readout = c
        .measured_qubits()
        .iter()
        .map(|&q| {
            let pq = phys(q);
            (nc.device.readout_e0(pq), nc.device.readout_e1(pq))
        })
        .collect();
    Ok(ResolvedNoise {
        gate_rates,
        readout,
    })
}

/// Per-trajectory sufficient statistics.
///
/// Shots inside one trajectory share a noise realization, so they are
/// correlated; uncertainty estimates must treat the trajectory as the
/// sampling unit. Small registers keep full outcome counts, wide ones the
/// two statistics the pipeline consumes.
#[derive(Debug, Clone)]
pub enum TrajectoryStat {
    /// Outcome counts for ≤ 2 measured qubits (index = outcome bits).
    Counts { shots: u64, counts: [u64; 4] },
    /// Wider registers: all-zeros count and full-register parity sum.
    Wide {
        shots: u64,
        zeros: u64,
        parity_sum: i64,
    },
}

impl TrajectoryStat {
    pub fn shots(&self) -> u64 {
        match *self {
            TrajectoryStat::Counts { shots, .. } | TrajectoryStat::Wide { shots, .. } => shots,
        }
    }
}

/// A pooled shot table together with its trajectory statistics.
#[derive(Debug, Clone)]
pub struct NoisySample {
    pub table: ShotTable,
    pub trajectories: Vec<TrajectoryStat>,
}

/// Samples `shots` measurement outcomes of `c` under the noise config,
/// using the default execution policy for the trajectory batch.
pub fn sample_noisy(c: &Circuit, nc: &NoiseConfig, shots: u64) -> Result<ShotTable> {
    sample_noisy_with_policy(c, nc, shots, ExecPolicy::default())
}

/// [`sample_noisy`] with an explicit execution policy.
pub fn sample_noisy_with_policy(
    c: &Circuit,
    nc: &NoiseConfig,
    shots: u64,
    policy: ExecPolicy,
) -> Result<ShotTable> {
    Ok(sample_noisy_stats(c, nc, shots, policy)?.table)
}

/// [`sample_noisy`] variant returning per-trajectory statistics for
/// cluster-robust uncertainty propagation.
pub fn sample_noisy_stats(
    c: &Circuit,
    nc: &NoiseConfig,
    shots: u64,
    policy: ExecPolicy,
) -> Result<NoisySample> {
    let resolved = resolve(c, nc)?;
    if shots == 0 {
        return Ok(NoisySample {
            table: ShotTable::empty(c.measured_qubits().to_vec()),
            trajectories: Vec::new(),
        });
    }

    // Without stochastic gate noise every trajectory evolves the same
    // state; sample all shots from a single pass (which is then a single
    // uncorrelated cluster).
    let stochastic = nc.depolarizing_on && resolved.gate_rates.iter().any(|&r| r > 0.0);
    let per_traj = if stochastic {
        nc.shots_per_trajectory
    } else {
        shots
    };
    let n_traj = shots.div_ceil(per_traj);

    let runs: Vec<Result<(ShotTable, TrajectoryStat)>> =
        exec::map_indexed(policy, n_traj as usize, |t| {
            let traj_shots = if (t as u64) == n_traj - 1 {
                shots - per_traj * (n_traj - 1)
            } else {
                per_traj
            };
            run_trajectory(c, nc, &resolved, stochastic, t as u64, traj_shots)
        });

    let mut pooled = ShotTable::empty(c.measured_qubits().to_vec());
    let mut trajectories = Vec::with_capacity(n_traj as usize);
    for r in runs {
        let (table, stat) = r?;
        pooled.merge(&table)?;
        trajectories.push(stat);
    }
    Ok(NoisySample {
        table: pooled,
        trajectories,
    })
}

fn run_trajectory(
    c: &Circuit,
    nc: &NoiseConfig,
    resolved: &ResolvedNoise,
    stochastic: bool,
    index: u64,
    shots: u64,
) -> Result<(ShotTable, TrajectoryStat)> {
    let mut rng = ChaCha8Rng::seed_from_u64(nc.seed);
    rng.set_stream(index);

    let mut state = State::zero(c.n_qubits())?;
    for (g, &rate) in c.gates().iter().zip(&resolved.gate_rates) {
        state.apply_gate(g);
        if stochastic && rate > 0.0 && rng.gen_bool(rate) {
            insert_pauli_error(&mut state, g, &mut rng);
        }
    }

    let measured = c.measured_qubits();
    let probs = state.marginal_distribution(measured);
    let cdf: Vec<f64> = probs
        .iter()
        .scan(0.0, |acc, p| {
            *acc += p;
            Some(*acc)
        })
        .collect();
    let total = *cdf.last().expect("non-empty distribution");

    let small = measured.len() <= 2;
    let mut counts = [0u64; 4];
    let mut zeros = 0u64;
    let mut parity_sum = 0i64;
    let mut table = ShotTable::empty(measured.to_vec());
    for _ in 0..shots {
        let u = rng.gen::<f64>() * total;
        let outcome = cdf.partition_point(|&x| x < u).min(probs.len() - 1);
        let outcome = apply_readout_flips(outcome, nc, resolved, &mut rng);
        table.record(outcome, 1);
        if small {
            counts[outcome] += 1;
        } else {
            zeros += u64::from(outcome == 0);
            parity_sum += if outcome.count_ones() % 2 == 0 { 1 } else { -1 };
        }
    }
    let stat = if small {
        TrajectoryStat::Counts { shots, counts }
    } else {
        TrajectoryStat::Wide {
            shots,
            zeros,
            parity_sum,
        }
    };
    Ok((table, stat))
}

fn insert_pauli_error(state: &mut State, gate: &Gate, rng: &mut ChaCha8Rng) {
    use crate::circuit::PauliAxis::{X, Y, Z};
    const AXES: [crate::circuit::PauliAxis; 3] = [X, Y, Z];
    match *gate {
        Gate::Cnot { control, target } => {
            // One of the 15 non-identity two-qubit Paulis, uniformly.
            let k = rng.gen_range(1..16u8);
            let (a, b) = (k >> 2, k & 3);
            if a > 0 {
                state.apply_pauli(control, AXES[(a - 1) as usize]);
            }
            if b > 0 {
                state.apply_pauli(target, AXES[(b - 1) as usize]);
            }
        }
        _ => {
            let (q, _) = gate.qubits();
            let k = rng.gen_range(0..3usize);
            state.apply_pauli(q, AXES[k]);
        }
    }
}

fn apply_readout_flips(
    outcome: usize,
    nc: &NoiseConfig,
    resolved: &ResolvedNoise,
    rng: &mut ChaCha8Rng,
) -> usize {
    if !nc.readout_on {
        return outcome;
    }
    let mut noisy = outcome;
    for (j, &(e0, e1)) in resolved.readout.iter().enumerate() {
        let bit = 1usize << j;
        let rate = if outcome & bit == 0 { e0 } else { e1 };
        if rate > 0.0 && rng.gen_bool(rate) {
            noisy ^= bit;
        }
    }
    noisy
}
