//! Geometric measure of entanglement of one spin with the rest of the system.
//!
//! For a pure state the measure of spin `l` is ½(1 − |⟨σ⃗_l⟩|). In an Ising
//! graph state ⟨σˣ_l⟩ = ⟨σʸ_l⟩ = 0 and ⟨σᶻ_l⟩ = cos^{k_l} φ, where `k_l` is the
//! degree of vertex `l`, giving the closed form ½(1 − |cos φ|^{k_l}).

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::scalar::Real;
use crate::state::{StateVector, DEFAULT_MAX_QUBITS};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlochVector<T> {
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T: Real> BlochVector<T> {
    /// Validating constructor: components in [−1, 1] and norm at most 1 up to
    /// the scalar's rounding tolerance.
    pub fn new(x: T, y: T, z: T) -> Result<Self> {
        let b = BlochVector { x, y, z };
        let tol = T::BLOCH_TOLERANCE;
        for c in [x, y, z] {
            if !(c.abs().as_f64() <= 1.0 + tol) {
                return Err(Error::invalid(format!("Bloch component {c} outside [-1, 1]")));
            }
        }
        if b.norm().as_f64() > 1.0 + tol {
            return Err(Error::invalid(format!("Bloch vector norm {} exceeds 1", b.norm())));
        }
        Ok(b)
    }

    pub fn from_array([x, y, z]: [T; 3]) -> Result<Self> {
        Self::new(x, y, z)
    }

    pub fn to_array(self) -> [T; 3] {
        [self.x, self.y, self.z]
    }

    pub fn norm(&self) -> T {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Analytic,
    Exact,
    Shots,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Analytic => "analytic",
            Method::Exact => "exact",
            Method::Shots => "shots",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "analytic" => Ok(Method::Analytic),
            "exact" => Ok(Method::Exact),
            "shots" => Ok(Method::Shots),
            _ => Err(Error::invalid(format!("unknown mode '{s}'"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EntanglementEstimate<T> {
    pub spin: usize,
    pub value: T,
    pub bloch: BlochVector<T>,
    pub method: Method,
    /// Propagated standard error, shots only.
    pub std_error: Option<T>,
    pub shots: Option<u64>,
}

/// ½(1 − |cos φ|^k). An isolated vertex (k = 0) is never entangled, including
/// where cos φ = 0.
pub fn analytic_entanglement<T: Real>(k: u32, phi: T) -> T {
    if k == 0 {
        return T::zero();
    }
    let half = T::of(0.5);
    half * (T::one() - phi.cos().abs().powi(k as i32))
}

/// Closed-form estimate for spin `l` of graph `g`, with the Bloch vector
/// (0, 0, cos^k φ).
pub fn analytic_estimate<T: Real>(g: &Graph, phi: T, l: usize) -> Result<EntanglementEstimate<T>> {
    let k = g.degree(l)? as u32;
    let z = phi.cos().powi(k as i32);
    Ok(EntanglementEstimate {
        spin: l,
        value: analytic_entanglement(k, phi),
        bloch: BlochVector::new(T::zero(), T::zero(), z)?,
        method: Method::Analytic,
        std_error: None,
        shots: None,
    })
}

/// ½(1 − min(1, |b|)).
pub fn entanglement_from_bloch<T: Real>(b: &BlochVector<T>) -> Result<T> {
    let norm = b.norm();
    if norm.as_f64() > 1.0 + T::BLOCH_TOLERANCE {
        return Err(Error::invalid(format!("Bloch vector norm {norm} exceeds 1")));
    }
    Ok(T::of(0.5) * (T::one() - norm.min(T::one())))
}

/// Builds the graph state on |0…0⟩ and reads the full Bloch vector of `l`.
pub fn exact_entanglement<T: Real>(g: &Graph, phi: T, l: usize) -> Result<EntanglementEstimate<T>> {
    exact_entanglement_with_cap(g, phi, l, DEFAULT_MAX_QUBITS)
}

pub fn exact_entanglement_with_cap<T: Real>(
    g: &Graph,
    phi: T,
    l: usize,
    max_qubits: usize,
) -> Result<EntanglementEstimate<T>> {
    Error::check_index("vertices", l, g.n_vertices())?;
    let state = graph_state(g, phi, max_qubits)?;
    estimate_from_state(&state, l)
}

/// Exact estimates for every spin, sharing a single simulated state.
pub fn exact_entanglement_all<T: Real>(
    g: &Graph,
    phi: T,
    max_qubits: usize,
) -> Result<Vec<EntanglementEstimate<T>>> {
    let state = graph_state(g, phi, max_qubits)?;
    (0..g.n_vertices()).map(|l| estimate_from_state(&state, l)).collect()
}

/// The Ising graph state of `g` at angle `phi`, by exact evolution.
pub fn graph_state<T: Real>(g: &Graph, phi: T, max_qubits: usize) -> Result<StateVector<T>> {
    let mut state = StateVector::zero_with_cap(g.n_vertices(), max_qubits)?;
    state.evolve_graph_exact(g, phi)?;
    Ok(state)
}

fn estimate_from_state<T: Real>(state: &StateVector<T>, l: usize) -> Result<EntanglementEstimate<T>> {
    let bloch = BlochVector::from_array(state.bloch(l)?)
        .map_err(|e| Error::Consistency(format!("exact Bloch vector invalid: {e}")))?;
    Ok(EntanglementEstimate {
        spin: l,
        value: entanglement_from_bloch(&bloch)?,
        bloch,
        method: Method::Exact,
        std_error: None,
        shots: None,
    })
}
