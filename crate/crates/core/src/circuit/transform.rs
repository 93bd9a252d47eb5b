//! Circuit-to-circuit transforms: basis decomposition, light-cone
//! filtering, CNOT folding, and randomized compiling.

use super::{Circuit, Gate, PauliAxis};
use crate::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

/// Rewrites RY and merged H·RY gates into the hardware basis
/// {CNOT, RZ, √X}, leaving gates already in the basis untouched.
///
/// `Ry(θ) = Rz(π)·√X·Rz(π+θ)·√X` and, when a Hadamard basis change follows
/// a rotation on the same qubit with no intervening gate on that qubit,
/// the pair merges as `H·Ry(θ) = Rz(π)·√X·Rz(3π/2−θ)·√X·Rz(−π)`. Both
/// identities hold up to global phase. A Hadamard that cannot merge is an
/// error: it has no representation in this gate set.
pub fn decompose_to_basis(c: &Circuit) -> Result<Circuit> {
    let gates = c.gates();
    let mut consumed = vec![false; gates.len()];
    let mut out = Vec::with_capacity(gates.len() * 4);

    for i in 0..gates.len() {
        if consumed[i] {
            continue;
        }
        match gates[i] {
            Gate::Ry { qubit, angle } => {
                // Look ahead for a Hadamard on this qubit before any other
                // gate touches it.
                let mut merge_h = None;
                for (j, g) in gates.iter().enumerate().skip(i + 1) {
                    if consumed[j] {
                        continue;
                    }
                    let (a, b) = g.qubits();
                    let touches = a == qubit || b == Some(qubit);
                    if !touches {
                        continue;
                    }
                    if matches!(g, Gate::H { .. }) {
                        merge_h = Some(j);
                    }
                    break;
                }
                if let Some(j) = merge_h {
                    consumed[j] = true;
                    out.extend([
                        Gate::Rz {
                            qubit,
                            angle: -PI,
                        },
                        Gate::SqrtX { qubit },
                        Gate::Rz {
                            qubit,
                            angle: 1.5 * PI - angle,
                        },
                        Gate::SqrtX { qubit },
                        Gate::Rz { qubit, angle: PI },
                    ]);
                } else {
                    out.extend([
                        Gate::SqrtX { qubit },
                        Gate::Rz {
                            qubit,
                            angle: PI + angle,
                        },
                        Gate::SqrtX { qubit },
                        Gate::Rz { qubit, angle: PI },
                    ]);
                }
            }
            Gate::H { .. } => {
                return Err(Error::Decomposition {
                    index: i,
                    reason: "standalone H has no basis representation; it must follow an RY on \
                             the same qubit"
                        .into(),
                });
            }
            g => out.push(g),
        }
    }
    Circuit::new(c.n_qubits(), out, c.measured_qubits().to_vec())
}

/// Relabeling window produced by the light-cone filter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LightConeWindow {
    /// Original qubit label of each window position.
    pub original_qubits: Vec<usize>,
    /// Window position of each original qubit (None when outside).
    pub position_of: Vec<Option<usize>>,
}

impl LightConeWindow {
    fn identity(n: usize) -> Self {
        Self {
            original_qubits: (0..n).collect(),
            position_of: (0..n).map(Some).collect(),
        }
    }
}

/// Computes the relabeling window the filter would use, without building
/// the filtered circuit. Estimator pipelines need it to map window qubits
/// back to loop positions when looking up device error rates.
///
/// The window is the contiguous loop segment reaching `L` qubits beyond
/// each side of the observable's support, where `L` is the number of CNOT
/// sublayers (maximal runs of consecutive CNOTs in the gate list). For a
/// brickwork ansatz on an observable of `m` adjacent qubits this is the
/// usual `min(m + 2L, n)` backward-cone bound.
pub fn light_cone_window(c: &Circuit, observable_qubits: &[usize]) -> Result<LightConeWindow> {
    let n = c.n_qubits();
    if observable_qubits.is_empty() {
        return Err(Error::SupportMismatch("empty observable support".into()));
    }
    for &q in observable_qubits {
        if q >= n {
            return Err(Error::SupportMismatch(format!(
                "observable qubit {q} outside [0, {n})"
            )));
        }
    }
    let m = contiguous_span(n, observable_qubits)?;
    let layers = cnot_sublayer_count(c.gates());
    let width = (m.len + 2 * layers).min(n);
    if width == n {
        return Ok(LightConeWindow::identity(n));
    }
    let start = (m.start + n - layers) % n;
    let original_qubits: Vec<usize> = (0..width).map(|i| (start + i) % n).collect();
    let mut position_of = vec![None; n];
    for (pos, &q) in original_qubits.iter().enumerate() {
        position_of[q] = Some(pos);
    }
    Ok(LightConeWindow {
        original_qubits,
        position_of,
    })
}

/// Drops every gate outside the backward light cone of the observable and
/// relabels the survivors onto the cone window.
///
/// The output circuit contains exactly the causally connected gates, lives
/// on `min(m + 2L, n)` qubits, and measures the relabeled support; exact
/// expectations of the observable are unchanged. When the window spans the
/// whole loop the circuit is returned as is (with the measured set reset
/// to the support).
pub fn light_cone_filter(c: &Circuit, observable_qubits: &[usize]) -> Result<Circuit> {
    let window = light_cone_window(c, observable_qubits)?;
    let n = c.n_qubits();
    if window.original_qubits.len() == n {
        return c.with_measured(observable_qubits.to_vec());
    }

    // Backward pass: a gate is in the cone if it touches any qubit that can
    // still influence the measurement.
    let mut active = vec![false; n];
    for &q in observable_qubits {
        active[q] = true;
    }
    let mut keep = vec![false; c.gates().len()];
    for (i, g) in c.gates().iter().enumerate().rev() {
        match *g {
            Gate::Cnot { control, target } => {
                if active[control] || active[target] {
                    keep[i] = true;
                    active[control] = true;
                    active[target] = true;
                }
            }
            _ => {
                let (q, _) = g.qubits();
                if active[q] {
                    keep[i] = true;
                }
            }
        }
    }

    // The nominal window bounds the cone only for nearest-neighbor
    // brickwork circuits; anything else is outside this transform's remit.
    for (q, is_active) in active.iter().enumerate() {
        if *is_active && window.position_of[q].is_none() {
            return Err(Error::Precondition(format!(
                "light cone of {observable_qubits:?} reaches qubit {q}, outside the brickwork \
                 window; the filter only supports nearest-neighbor layered circuits"
            )));
        }
    }
    let relabel = |q: usize| -> usize {
        window.position_of[q].expect("cone qubit checked against window")
    };
    let gates: Vec<Gate> = c
        .gates()
        .iter()
        .zip(&keep)
        .filter(|(_, k)| **k)
        .map(|(g, _)| match *g {
            Gate::Cnot { control, target } => Gate::Cnot {
                control: relabel(control),
                target: relabel(target),
            },
            Gate::Ry { qubit, angle } => Gate::Ry {
                qubit: relabel(qubit),
                angle,
            },
            Gate::Rz { qubit, angle } => Gate::Rz {
                qubit: relabel(qubit),
                angle,
            },
            Gate::SqrtX { qubit } => Gate::SqrtX {
                qubit: relabel(qubit),
            },
            Gate::Pauli { qubit, axis } => Gate::Pauli {
                qubit: relabel(qubit),
                axis,
            },
            Gate::H { qubit } => Gate::H {
                qubit: relabel(qubit),
            },
        })
        .collect();
    let measured = observable_qubits.iter().map(|&q| relabel(q)).collect();
    Circuit::new(window.original_qubits.len(), gates, measured)
}

/// Contiguous arc of the loop covering `qubits`.
struct Span {
    start: usize,
    len: usize,
}

fn contiguous_span(n: usize, qubits: &[usize]) -> Result<Span> {
    if qubits.len() == 1 {
        return Ok(Span {
            start: qubits[0],
            len: 1,
        });
    }
    // Try each member as the arc start; the support must be consecutive
    // loop positions in some order.
    'outer: for &start in qubits {
        for (offset, _) in qubits.iter().enumerate() {
            let pos = (start + offset) % n;
            if !qubits.contains(&pos) {
                continue 'outer;
            }
        }
        return Ok(Span {
            start,
            len: qubits.len(),
        });
    }
    Err(Error::SupportMismatch(format!(
        "observable qubits {qubits:?} are not adjacent on the loop"
    )))
}

/// Number of CNOT sublayers: maximal runs of consecutive CNOT gates.
fn cnot_sublayer_count(gates: &[Gate]) -> usize {
    let mut runs = 0;
    let mut in_run = false;
    for g in gates {
        let is_cnot = matches!(g, Gate::Cnot { .. });
        if is_cnot && !in_run {
            runs += 1;
        }
        in_run = is_cnot;
    }
    runs
}

/// Replaces each CNOT by an odd number of copies so the expected CNOT
/// count is `scale` times the original; odd integer scales are exact and
/// deterministic, fractional scales draw per-CNOT from the two bracketing
/// odd counts with a seeded RNG.
pub fn fold_cnots(c: &Circuit, scale: f64, seed: u64) -> Result<Circuit> {
    if !(scale >= 1.0) {
        return Err(Error::Domain(format!("fold scale must be ≥ 1, got {scale}")));
    }
    // Largest odd integer ≤ scale, and its odd successor.
    let lo = {
        let f = scale.floor() as u64;
        if f % 2 == 1 {
            f
        } else {
            f - 1
        }
    };
    let p_hi = (scale - lo as f64) / 2.0;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut gates = Vec::with_capacity(c.gates().len());
    for g in c.gates() {
        match g {
            Gate::Cnot { .. } => {
                let reps = if p_hi > 0.0 && rng.gen_bool(p_hi) {
                    lo + 2
                } else {
                    lo
                };
                for _ in 0..reps {
                    gates.push(*g);
                }
            }
            _ => gates.push(*g),
        }
    }
    Circuit::new(c.n_qubits(), gates, c.measured_qubits().to_vec())
}

/// Wraps every CNOT in a uniformly random Pauli frame: one of the 16
/// dressed CNOTs equivalent to the bare gate in the absence of noise.
///
/// The pair `(P_a, P_b)` drawn before the CNOT is compensated after it by
/// `CNOT·(P_a⊗P_b)·CNOT`, which is again a Pauli pair because CNOT is
/// Clifford. Identity components emit no gate.
pub fn randomized_compile(c: &Circuit, seed: u64) -> Result<Circuit> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut gates = Vec::with_capacity(c.gates().len() * 2);
    for g in c.gates() {
        match *g {
            Gate::Cnot { control, target } => {
                let pre_a = draw_pauli(&mut rng);
                let pre_b = draw_pauli(&mut rng);
                if let Some(axis) = pre_a {
                    gates.push(Gate::Pauli {
                        qubit: control,
                        axis,
                    });
                }
                if let Some(axis) = pre_b {
                    gates.push(Gate::Pauli {
                        qubit: target,
                        axis,
                    });
                }
                gates.push(*g);
                let (post_a, post_b) = cnot_conjugate(pre_a, pre_b);
                if let Some(axis) = post_a {
                    gates.push(Gate::Pauli {
                        qubit: control,
                        axis,
                    });
                }
                if let Some(axis) = post_b {
                    gates.push(Gate::Pauli {
                        qubit: target,
                        axis,
                    });
                }
            }
            _ => gates.push(*g),
        }
    }
    Circuit::new(c.n_qubits(), gates, c.measured_qubits().to_vec())
}

fn draw_pauli(rng: &mut ChaCha8Rng) -> Option<PauliAxis> {
    match rng.gen_range(0..4u8) {
        0 => None,
        1 => Some(PauliAxis::X),
        2 => Some(PauliAxis::Y),
        3 => Some(PauliAxis::Z),
        _ => unreachable!(),
    }
}

/// Image of `P_a ⊗ P_b` under CNOT conjugation, modulo phase.
///
/// Generators: X_a → X_a X_b, X_b → X_b, Z_a → Z_a, Z_b → Z_a Z_b.
fn cnot_conjugate(
    a: Option<PauliAxis>,
    b: Option<PauliAxis>,
) -> (Option<PauliAxis>, Option<PauliAxis>) {
    // Decompose each input into (x, z) exponents, push through the
    // generator images, recombine.
    let (ax, az) = exponents(a);
    let (bx, bz) = exponents(b);
    // control out: x from ax, z from az ⊕ bz
    let out_a = from_exponents(ax, az ^ bz);
    // target out: x from ax ⊕ bx, z from bz
    let out_b = from_exponents(ax ^ bx, bz);
    (out_a, out_b)
}

fn exponents(p: Option<PauliAxis>) -> (bool, bool) {
    match p {
        None => (false, false),
        Some(PauliAxis::X) => (true, false),
        Some(PauliAxis::Z) => (false, true),
        Some(PauliAxis::Y) => (true, true),
    }
}

fn from_exponents(x: bool, z: bool) -> Option<PauliAxis> {
    match (x, z) {
        (false, false) => None,
        (true, false) => Some(PauliAxis::X),
        (false, true) => Some(PauliAxis::Z),
        (true, true) => Some(PauliAxis::Y),
    }
}
