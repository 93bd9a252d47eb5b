//! Measurement outcome tables and parity statistics.

use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Bit-string counts from a sampling run.
///
/// Keys are strings of '0'/'1' where character `j` is the outcome of
/// `measured_qubits[j]`. Ordered maps keep serialized dumps and merges
/// deterministic.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShotTable {
    pub counts: BTreeMap<String, u64>,
    pub shots: u64,
    pub measured_qubits: Vec<usize>,
}

impl ShotTable {
    pub fn empty(measured_qubits: Vec<usize>) -> Self {
        Self {
            counts: BTreeMap::new(),
            shots: 0,
            measured_qubits,
        }
    }

    /// Record `count` observations of integer outcome `bits` (bit j =
    /// measured qubit j).
    pub fn record(&mut self, bits: usize, count: u64) {
        if count == 0 {
            return;
        }
        let key = Self::key_of(bits, self.measured_qubits.len());
        *self.counts.entry(key).or_insert(0) += count;
        self.shots += count;
    }

    fn key_of(bits: usize, width: usize) -> String {
        (0..width)
            .map(|j| if bits & (1 << j) != 0 { '1' } else { '0' })
            .collect()
    }

    /// Merge another table over the same measured set. Associative and
    /// commutative, so parallel trajectory reductions are order-free.
    pub fn merge(&mut self, other: &ShotTable) -> Result<()> {
        if other.measured_qubits != self.measured_qubits {
            return Err(Error::SupportMismatch(
                "cannot merge shot tables over different measured qubits".into(),
            ));
        }
        for (k, v) in &other.counts {
            *self.counts.entry(k.clone()).or_insert(0) += v;
        }
        self.shots += other.shots;
        Ok(())
    }

    /// Observed probability of one outcome string with its binomial sigma.
    pub fn outcome_probability(&self, key: &str) -> Result<(f64, f64)> {
        if self.shots == 0 {
            return Err(Error::EmptyShotTable);
        }
        let count = self.counts.get(key).copied().unwrap_or(0);
        let p = count as f64 / self.shots as f64;
        let sigma = (p * (1.0 - p) / self.shots as f64).sqrt();
        Ok((p, sigma))
    }

    /// The all-zeros outcome key for this table's width.
    pub fn zeros_key(&self) -> String {
        "0".repeat(self.measured_qubits.len())
    }

    /// JSON dump `{ "shots": N, "measured": [...], "counts": {...} }`.
    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Dump<'a> {
            shots: u64,
            measured: &'a [usize],
            counts: &'a BTreeMap<String, u64>,
        }
        serde_json::to_string_pretty(&Dump {
            shots: self.shots,
            measured: &self.measured_qubits,
            counts: &self.counts,
        })
        .expect("shot table serialization cannot fail")
    }
}

/// Parity expectation of the `support` qubits with its shot-noise sigma
/// `√((1−⟨P⟩²)/shots)`.
pub fn parity_expectation(table: &ShotTable, support: &[usize]) -> Result<(f64, f64)> {
    if table.shots == 0 {
        return Err(Error::EmptyShotTable);
    }
    let positions: Vec<usize> = support
        .iter()
        .map(|q| {
            table
                .measured_qubits
                .iter()
                .position(|m| m == q)
                .ok_or_else(|| {
                    Error::SupportMismatch(format!("support qubit {q} was not measured"))
                })
        })
        .collect::<Result<_>>()?;

    let mut acc: i64 = 0;
    for (key, &count) in &table.counts {
        let ones = positions
            .iter()
            .filter(|&&p| key.as_bytes()[p] == b'1')
            .count();
        let sign = if ones % 2 == 0 { 1 } else { -1 };
        acc += sign * count as i64;
    }
    let value = acc as f64 / table.shots as f64;
    let sigma = ((1.0 - value * value).max(0.0) / table.shots as f64).sqrt();
    Ok((value, sigma))
}
