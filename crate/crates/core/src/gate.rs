use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Gate set of the circuit IR.
///
/// `P(φ)` leaves |0⟩ alone and multiplies |1⟩ by e^{iφ}; the rotations are
/// `RX(θ) = exp(−iθσˣ/2)` and `RY(θ) = exp(−iθσʸ/2)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Gate<T> {
    H(usize),
    P(usize, T),
    RX(usize, T),
    RY(usize, T),
    CX { control: usize, target: usize },
}

impl<T: Real> Gate<T> {
    /// Qubits the gate touches, target last.
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::H(q) | Gate::P(q, _) | Gate::RX(q, _) | Gate::RY(q, _) => vec![q],
            Gate::CX { control, target } => vec![control, target],
        }
    }

    pub fn is_two_qubit(&self) -> bool {
        matches!(self, Gate::CX { .. })
    }

    pub(crate) fn validate(&self, n_qubits: usize) -> Result<()> {
        if let Gate::CX { control, target } = *self {
            if control == target {
                return Err(Error::invalid(format!("CX control and target are both {control}")));
            }
        }
        for q in self.qubits() {
            Error::check_index("qubits", q, n_qubits)?;
        }
        Ok(())
    }
}

/// One line of the assembly-style listing: `h q[1]`, `p(0.5) q[1]`, `cx q[1], q[0]`.
impl<T: Real> fmt::Display for Gate<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Gate::H(q) => write!(f, "h q[{q}]"),
            Gate::P(q, a) => write!(f, "p({a}) q[{q}]"),
            Gate::RX(q, a) => write!(f, "rx({a}) q[{q}]"),
            Gate::RY(q, a) => write!(f, "ry({a}) q[{q}]"),
            Gate::CX { control, target } => write!(f, "cx q[{control}], q[{target}]"),
        }
    }
}

fn parse_qubit(tok: &str) -> Option<usize> {
    tok.trim().strip_prefix("q[")?.strip_suffix(']')?.parse().ok()
}

impl<T: Real> FromStr for Gate<T> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::parse(0, format!("unrecognised gate line '{s}'"));
        let s = s.trim().trim_end_matches(';');
        let (head, args) = s.split_once(' ').ok_or_else(bad)?;
        if head == "cx" {
            let (c, t) = args.split_once(',').ok_or_else(bad)?;
            return Ok(Gate::CX {
                control: parse_qubit(c).ok_or_else(bad)?,
                target: parse_qubit(t).ok_or_else(bad)?,
            });
        }
        let q = parse_qubit(args).ok_or_else(bad)?;
        if head == "h" {
            return Ok(Gate::H(q));
        }
        let (name, angle) = head.strip_suffix(')').and_then(|h| h.split_once('(')).ok_or_else(bad)?;
        let angle = T::of(angle.parse::<f64>().map_err(|_| bad())?);
        match name {
            "p" => Ok(Gate::P(q, angle)),
            "rx" => Ok(Gate::RX(q, angle)),
            "ry" => Ok(Gate::RY(q, angle)),
            _ => Err(bad()),
        }
    }
}
