//! Line-oriented circuit text format.
//!
//! Header `qubits n; measured q0,q1,...` followed by one gate per line:
//!
//! ```text
//! qubits 2; measured 0,1
//! RY 0 1.5707963267948966
//! CNOT 0 1
//! SX 1
//! RZ 1 3.141592653589793
//! X 0
//! H 1
//! ```
//!
//! Angles print with Rust's shortest round-trip float formatting, so a
//! dump re-parses bit-exactly; golden-file tests rely on that.

use super::{Circuit, Gate, PauliAxis};
use crate::{Error, Result};

impl Circuit {
    /// Serializes to the line format.
    pub fn to_text(&self) -> String {
        let measured = self
            .measured_qubits()
            .iter()
            .map(|q| q.to_string())
            .collect::<Vec<_>>()
            .join(",");
        let mut out = format!("qubits {}; measured {}\n", self.n_qubits(), measured);
        for g in self.gates() {
            let line = match *g {
                Gate::Cnot { control, target } => format!("CNOT {control} {target}"),
                Gate::Ry { qubit, angle } => format!("RY {qubit} {angle}"),
                Gate::Rz { qubit, angle } => format!("RZ {qubit} {angle}"),
                Gate::SqrtX { qubit } => format!("SX {qubit}"),
                Gate::Pauli { qubit, axis } => match axis {
                    PauliAxis::X => format!("X {qubit}"),
                    PauliAxis::Y => format!("Y {qubit}"),
                    PauliAxis::Z => format!("Z {qubit}"),
                },
                Gate::H { qubit } => format!("H {qubit}"),
            };
            out.push_str(&line);
            out.push('\n');
        }
        out
    }

    /// Parses the line format.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Precondition("empty circuit text".into()))?;
        let (n, measured) = parse_header(header)?;
        let mut gates = Vec::new();
        for (lineno, line) in lines.enumerate() {
            gates.push(parse_gate(line).map_err(|e| {
                Error::Precondition(format!("gate line {}: {e}", lineno + 2))
            })?);
        }
        Circuit::new(n, gates, measured)
    }
}

fn parse_header(line: &str) -> Result<(usize, Vec<usize>)> {
    let err = || Error::Precondition(format!("malformed header: {line:?}"));
    let rest = line.strip_prefix("qubits ").ok_or_else(err)?;
    let (n_str, meas_str) = rest.split_once("; measured").ok_or_else(err)?;
    let n = n_str.trim().parse::<usize>().map_err(|_| err())?;
    let meas_str = meas_str.trim();
    let measured = if meas_str.is_empty() {
        Vec::new()
    } else {
        meas_str
            .split(',')
            .map(|s| s.trim().parse::<usize>().map_err(|_| err()))
            .collect::<Result<Vec<_>>>()?
    };
    Ok((n, measured))
}

fn parse_gate(line: &str) -> std::result::Result<Gate, String> {
    let mut parts = line.split_whitespace();
    let kind = parts.next().ok_or("missing gate name")?;
    let mut qubit = || -> std::result::Result<usize, String> {
        parts
            .next()
            .ok_or("missing qubit index")?
            .parse()
            .map_err(|e| format!("bad qubit index: {e}"))
    };
    let gate = match kind {
        "CNOT" => {
            let control = qubit()?;
            let target = qubit()?;
            Gate::Cnot { control, target }
        }
        "RY" | "RZ" => {
            let q = qubit()?;
            let angle: f64 = parts
                .next()
                .ok_or("missing angle")?
                .parse()
                .map_err(|e| format!("bad angle: {e}"))?;
            if kind == "RY" {
                Gate::Ry { qubit: q, angle }
            } else {
                Gate::Rz { qubit: q, angle }
            }
        }
        "SX" => Gate::SqrtX { qubit: qubit()? },
        "X" => Gate::Pauli {
            qubit: qubit()?,
            axis: PauliAxis::X,
        },
        "Y" => Gate::Pauli {
            qubit: qubit()?,
            axis: PauliAxis::Y,
        },
        "Z" => Gate::Pauli {
            qubit: qubit()?,
            axis: PauliAxis::Z,
        },
        "H" => Gate::H { qubit: qubit()? },
        other => return Err(format!("unknown gate {other:?}")),
    };
    if parts.next().is_some() {
        return Err("trailing tokens".into());
    }
    Ok(gate)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{build_alt_ansatz, AnsatzParams};

    #[test]
    fn round_trip_is_bit_exact() {
        let angles: Vec<f64> = (0..12).map(|i| (i as f64).sin() * 2.0).collect();
        let c = build_alt_ansatz(4, &AnsatzParams::full(2, angles)).unwrap();
        let text = c.to_text();
        let back = Circuit::from_text(&text).unwrap();
        assert_eq!(c, back);
        assert_eq!(back.to_text(), text);
    }

    #[test]
    fn parses_every_gate_kind() {
        let text = "qubits 2; measured 1\nCNOT 0 1\nRY 0 0.5\nRZ 1 -0.25\nSX 0\nX 1\nY 0\nZ 1\nH 0\n";
        let c = Circuit::from_text(text).unwrap();
        assert_eq!(c.gates().len(), 8);
        assert_eq!(c.to_text(), text);
    }

    #[test]
    fn rejects_garbage() {
        assert!(Circuit::from_text("").is_err());
        assert!(Circuit::from_text("qubits x; measured\n").is_err());
        assert!(Circuit::from_text("qubits 2; measured 0\nFOO 0\n").is_err());
        assert!(Circuit::from_text("qubits 2; measured 0\nRY 0\n").is_err());
    }

    #[test]
    fn empty_measured_list() {
        let c = Circuit::from_text("qubits 3; measured\n").unwrap();
        assert!(c.measured_qubits().is_empty());
    }
}
