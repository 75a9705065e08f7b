//! Compiling graph-state preparation into CX/H/P gate circuits, plus the
//! single-qubit rotations that turn an x or y measurement into a z one.
//!
//! Each edge term exp(−i(φ/2)σᵢˣσⱼˣ) equals, up to global phase,
//! `CX(r→p) · H(r) · P(r, φ) · H(r) · CX(r→p)` where `r` is whichever endpoint
//! carries the single-qubit gates. Global phase is never tracked.

use std::fmt;

use crate::calibration::CalibrationData;
use crate::error::{Error, Result};
use crate::gate::Gate;
use crate::graph::Graph;
use crate::scalar::Real;
use crate::state::{Axis, StateVector};

pub const GATES_PER_EDGE: usize = 5;

#[derive(Clone, Debug, PartialEq)]
pub struct Circuit<T> {
    n_qubits: usize,
    gates: Vec<Gate<T>>,
}

impl<T: Real> Circuit<T> {
    pub fn new(n_qubits: usize) -> Self {
        Circuit {
            n_qubits,
            gates: Vec::new(),
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn gates(&self) -> &[Gate<T>] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn push(&mut self, gate: Gate<T>) -> Result<()> {
        gate.validate(self.n_qubits)?;
        self.gates.push(gate);
        Ok(())
    }

    pub fn extend(&mut self, gates: impl IntoIterator<Item = Gate<T>>) -> Result<()> {
        gates.into_iter().try_for_each(|g| self.push(g))
    }

    /// Applies every gate to `state` in order.
    pub fn run(&self, state: &mut StateVector<T>) -> Result<()> {
        if state.n_qubits() < self.n_qubits {
            return Err(Error::invalid(format!(
                "{}-qubit circuit run on a {}-qubit state",
                self.n_qubits,
                state.n_qubits()
            )));
        }
        state.apply_all(&self.gates)?;
        state.check_norm()
    }

    /// Runs the circuit on |0…0⟩ with the given qubit cap.
    pub fn simulate(&self, max_qubits: usize) -> Result<StateVector<T>> {
        let mut s = StateVector::zero_with_cap(self.n_qubits, max_qubits)?;
        self.run(&mut s)?;
        Ok(s)
    }

    /// One gate per line in the assembly-style listing.
    pub fn listing(&self) -> String {
        self.to_string()
    }

    pub fn parse_listing(n_qubits: usize, text: &str) -> Result<Self> {
        let mut c = Circuit::new(n_qubits);
        for (k, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with("//") {
                continue;
            }
            let gate = line.parse().map_err(|_| Error::parse(k + 1, format!("bad gate '{line}'")))?;
            c.push(gate)?;
        }
        Ok(c)
    }
}

impl<T: Real> fmt::Display for Circuit<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for g in &self.gates {
            writeln!(f, "{g}")?;
        }
        Ok(())
    }
}

/// Which endpoint of an edge carries the H·P(φ)·H sandwich.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EdgeOrientation {
    rotation_qubit: usize,
    partner_qubit: usize,
}

impl EdgeOrientation {
    pub fn new(rotation_qubit: usize, partner_qubit: usize) -> Result<Self> {
        if rotation_qubit == partner_qubit {
            return Err(Error::invalid(format!("edge endpoints coincide at {rotation_qubit}")));
        }
        Ok(EdgeOrientation {
            rotation_qubit,
            partner_qubit,
        })
    }

    pub fn rotation_qubit(&self) -> usize {
        self.rotation_qubit
    }

    pub fn partner_qubit(&self) -> usize {
        self.partner_qubit
    }

    /// The edge as a sorted pair.
    pub fn edge(&self) -> (usize, usize) {
        let (a, b) = (self.rotation_qubit, self.partner_qubit);
        (a.min(b), a.max(b))
    }

    pub fn flipped(self) -> Self {
        EdgeOrientation {
            rotation_qubit: self.partner_qubit,
            partner_qubit: self.rotation_qubit,
        }
    }
}

/// `[CX(r→p), H(r), P(r, φ), H(r), CX(r→p)]`.
pub fn synthesize_edge<T: Real>(o: EdgeOrientation, phi: T) -> [Gate<T>; GATES_PER_EDGE] {
    let (r, p) = (o.rotation_qubit, o.partner_qubit);
    let cx = Gate::CX {
        control: r,
        target: p,
    };
    [cx, Gate::H(r), Gate::P(r, phi), Gate::H(r), cx]
}

/// Puts the single-qubit gates on the endpoint with the smaller calibrated
/// gate error, or on the smaller index when there is no calibration or the
/// errors tie.
pub fn choose_orientation(edge: (usize, usize), cal: Option<&CalibrationData>) -> Result<EdgeOrientation> {
    let (lo, hi) = (edge.0.min(edge.1), edge.0.max(edge.1));
    let Some(cal) = cal else {
        return EdgeOrientation::new(lo, hi);
    };
    let (e_lo, e_hi) = (cal.gate_error(lo)?, cal.gate_error(hi)?);
    if e_hi < e_lo {
        EdgeOrientation::new(hi, lo)
    } else {
        EdgeOrientation::new(lo, hi)
    }
}

/// Preparation circuit for the graph state: one five-gate block per edge, in
/// sorted edge order.
pub fn synthesize_graph_circuit<T: Real>(
    g: &Graph,
    phi: T,
    cal: Option<&CalibrationData>,
) -> Result<Circuit<T>> {
    let mut c = Circuit::new(g.n_vertices());
    for &edge in g.edges() {
        let o = choose_orientation(edge, cal)?;
        c.extend(synthesize_edge(o, phi))?;
    }
    Ok(c)
}

/// Rotation that maps a measurement of `axis` on qubit `l` onto a z-basis
/// measurement: nothing for z, `RX(+π/2)` for y, `RY(−π/2)` for x.
///
/// With RY(θ) = exp(−iθσʸ/2), RY(−π/2) sends σᶻ to +σˣ under conjugation, so
/// the post-rotation ⟨σᶻ⟩ equals the pre-rotation ⟨σˣ⟩ with its sign intact.
pub fn measurement_prelude<T: Real>(axis: Axis, l: usize) -> Vec<Gate<T>> {
    match axis {
        Axis::Z => vec![],
        Axis::Y => vec![Gate::RX(l, T::FRAC_PI_2())],
        Axis::X => vec![Gate::RY(l, -T::FRAC_PI_2())],
    }
}
