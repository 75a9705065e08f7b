//! Dense state vectors over `n` qubits.
//!
//! Basis index `b` encodes qubit `l` as bit `(b >> l) & 1`, so qubit 0 is the
//! least-significant bit. Bit value 0 is |0⟩ (spin up).

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gate::Gate;
use crate::graph::Graph;
use crate::scalar::Real;

pub const DEFAULT_MAX_QUBITS: usize = 24;

// Below this many amplitudes the kernels stay on the calling thread.
const PAR_THRESHOLD: usize = 1 << 14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];
}

impl FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "x" | "X" => Ok(Axis::X),
            "y" | "Y" => Ok(Axis::Y),
            "z" | "Z" => Ok(Axis::Z),
            _ => Err(Error::invalid(format!("unknown axis '{s}'"))),
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector<T> {
    n_qubits: usize,
    amps: Vec<Complex<T>>,
}

impl<T: Real> StateVector<T> {
    /// |0…0⟩ on `n` qubits, with the default qubit cap.
    pub fn zero(n: usize) -> Result<Self> {
        Self::zero_with_cap(n, DEFAULT_MAX_QUBITS)
    }

    pub fn zero_with_cap(n: usize, cap: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("state needs at least one qubit"));
        }
        if n > cap || n >= usize::BITS as usize - 1 {
            return Err(Error::ResourceCap {
                what: "state vector",
                requested: n,
                cap,
            });
        }
        let mut amps = vec![Complex::new(T::zero(), T::zero()); 1 << n];
        amps[0] = Complex::new(T::one(), T::zero());
        Ok(StateVector { n_qubits: n, amps })
    }

    /// Wraps raw amplitudes; the length must be a power of two ≥ 2 and the
    /// vector normalised.
    pub fn from_amplitudes(amps: Vec<Complex<T>>) -> Result<Self> {
        if amps.len() < 2 || !amps.len().is_power_of_two() {
            return Err(Error::invalid(format!(
                "amplitude count {} is not a power of two >= 2",
                amps.len()
            )));
        }
        let s = StateVector {
            n_qubits: amps.len().trailing_zeros() as usize,
            amps,
        };
        s.check_norm()?;
        Ok(s)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> T {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Errors if Σ|amp|² has drifted from 1 by more than the scalar's tolerance.
    pub fn check_norm(&self) -> Result<()> {
        let drift = (self.norm_sqr().as_f64() - 1.0).abs();
        if drift > T::NORM_TOLERANCE {
            return Err(Error::Consistency(format!("state norm drifted by {drift:e}")));
        }
        Ok(())
    }

    /// |amp|² for every basis index.
    pub fn probabilities(&self) -> Vec<T> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    fn check_qubit(&self, q: usize) -> Result<()> {
        Error::check_index("qubits", q, self.n_qubits)
    }

    pub fn apply(&mut self, gate: &Gate<T>) -> Result<()> {
        gate.validate(self.n_qubits)?;
        let half = T::FRAC_1_SQRT_2();
        match *gate {
            Gate::H(q) => for_each_pair(&mut self.amps, q, |a, b| {
                let (x, y) = (*a, *b);
                *a = (x + y).scale(half);
                *b = (x - y).scale(half);
            }),
            Gate::P(q, phi) => {
                let phase = Complex::from_polar(T::one(), phi);
                for_each_pair(&mut self.amps, q, |_, b| *b = *b * phase);
            }
            Gate::RX(q, theta) => {
                let (s, c) = (theta / T::of(2.0)).sin_cos();
                let mis = Complex::new(T::zero(), -s);
                for_each_pair(&mut self.amps, q, |a, b| {
                    let (x, y) = (*a, *b);
                    *a = x.scale(c) + y * mis;
                    *b = x * mis + y.scale(c);
                });
            }
            Gate::RY(q, theta) => {
                let (s, c) = (theta / T::of(2.0)).sin_cos();
                for_each_pair(&mut self.amps, q, |a, b| {
                    let (x, y) = (*a, *b);
                    *a = x.scale(c) - y.scale(s);
                    *b = x.scale(s) + y.scale(c);
                });
            }
            Gate::CX { control, target } => apply_cx(&mut self.amps, control, target),
        }
        Ok(())
    }

    /// Applies the Pauli matrix σ_axis to qubit `q`.
    pub fn apply_pauli(&mut self, axis: Axis, q: usize) -> Result<()> {
        self.check_qubit(q)?;
        let i = Complex::new(T::zero(), T::one());
        match axis {
            Axis::X => for_each_pair(&mut self.amps, q, std::mem::swap),
            Axis::Y => for_each_pair(&mut self.amps, q, |a, b| {
                let (x, y) = (*a, *b);
                *a = -i * y;
                *b = i * x;
            }),
            Axis::Z => for_each_pair(&mut self.amps, q, |_, b| *b = -*b),
        }
        Ok(())
    }

    pub fn apply_all<'a>(&mut self, gates: impl IntoIterator<Item = &'a Gate<T>>) -> Result<()> {
        for g in gates {
            self.apply(g)?;
        }
        Ok(())
    }

    /// Applies exp(−i(φ/2)σᵢˣσⱼˣ) = cos(φ/2)·I − i·sin(φ/2)·σᵢˣσⱼˣ as a dense
    /// 4×4 matrix on qubits `i`, `j`.
    ///
    /// This is deliberately not built from the gate kernels: it is the
    /// reference the synthesized circuits are checked against.
    pub fn evolve_edge_exact(&mut self, i: usize, j: usize, phi: T) -> Result<()> {
        self.check_qubit(i)?;
        self.check_qubit(j)?;
        if i == j {
            return Err(Error::invalid(format!("edge endpoints coincide at qubit {i}")));
        }
        let u = edge_unitary(phi);
        let (mi, mj) = (1usize << i, 1usize << j);
        let zero = Complex::new(T::zero(), T::zero());
        for base in 0..self.amps.len() {
            if base & (mi | mj) != 0 {
                continue;
            }
            // local index k = bit_i + 2·bit_j
            let idx = [base, base | mi, base | mj, base | mi | mj];
            let v = idx.map(|x| self.amps[x]);
            for (row, &dst) in u.iter().zip(&idx) {
                self.amps[dst] = row.iter().zip(&v).fold(zero, |acc, (m, x)| acc + m * x);
            }
        }
        Ok(())
    }

    /// Applies the exact per-edge evolution for every edge in the given order.
    pub fn evolve_edges_exact(&mut self, edges: &[(usize, usize)], phi: T) -> Result<()> {
        for &(i, j) in edges {
            self.evolve_edge_exact(i, j, phi)?;
        }
        self.check_norm()
    }

    /// Evolves under the Ising x-x couplings of `g` for angle `phi`.
    pub fn evolve_graph_exact(&mut self, g: &Graph, phi: T) -> Result<()> {
        if self.n_qubits < g.n_vertices() {
            return Err(Error::invalid(format!(
                "graph has {} vertices but the state only {} qubits",
                g.n_vertices(),
                self.n_qubits
            )));
        }
        self.evolve_edges_exact(g.edges(), phi)
    }

    /// ⟨σ_axis⟩ on qubit `l`, summed directly over amplitude pairs.
    pub fn expectation(&self, axis: Axis, l: usize) -> Result<T> {
        self.check_qubit(l)?;
        let m = 1usize << l;
        let zero = Complex::new(T::zero(), T::zero());
        let i = Complex::new(T::zero(), T::one());
        // Σ_b conj(a_b) (σ a)_b over all b
        let form: Complex<T> = self
            .amps
            .iter()
            .enumerate()
            .fold(zero, |acc, (b, a)| {
                let partner = self.amps[b ^ m];
                let sigma_a = match (axis, b & m != 0) {
                    (Axis::X, _) => partner,
                    (Axis::Y, false) => -i * partner,
                    (Axis::Y, true) => i * partner,
                    (Axis::Z, false) => *a,
                    (Axis::Z, true) => -*a,
                };
                acc + a.conj() * sigma_a
            });
        if form.im.abs().as_f64() > T::RESIDUE_TOLERANCE {
            return Err(Error::Consistency(format!(
                "<sigma_{axis}> on qubit {l} has imaginary residue {}",
                form.im
            )));
        }
        Ok(form.re)
    }

    /// Full Bloch vector (⟨σˣ⟩, ⟨σʸ⟩, ⟨σᶻ⟩) of qubit `l`.
    pub fn bloch(&self, l: usize) -> Result<[T; 3]> {
        Ok([
            self.expectation(Axis::X, l)?,
            self.expectation(Axis::Y, l)?,
            self.expectation(Axis::Z, l)?,
        ])
    }

    /// Probabilities of reading qubit `l` as 0 and as 1.
    pub fn marginal_z(&self, l: usize) -> Result<(T, T)> {
        self.check_qubit(l)?;
        let m = 1usize << l;
        let (mut p0, mut p1) = (T::zero(), T::zero());
        for (b, a) in self.amps.iter().enumerate() {
            if b & m == 0 {
                p0 = p0 + a.norm_sqr();
            } else {
                p1 = p1 + a.norm_sqr();
            }
        }
        Ok((p0, p1))
    }

    /// |⟨self|other⟩|, insensitive to global phase.
    pub fn overlap(&self, other: &Self) -> Result<T> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::invalid(format!(
                "overlap of {}-qubit and {}-qubit states",
                self.n_qubits, other.n_qubits
            )));
        }
        let zero = Complex::new(T::zero(), T::zero());
        let ip = self
            .amps
            .iter()
            .zip(&other.amps)
            .fold(zero, |acc, (a, b)| acc + a.conj() * b);
        Ok(ip.norm().min(T::one()))
    }
}

/// cos(φ/2)·I − i·sin(φ/2)·X⊗X in the local basis k = bit_i + 2·bit_j.
fn edge_unitary<T: Real>(phi: T) -> [[Complex<T>; 4]; 4] {
    let (s, c) = (phi / T::of(2.0)).sin_cos();
    let zero = Complex::new(T::zero(), T::zero());
    let mut u = [[zero; 4]; 4];
    for k in 0..4 {
        u[k][k] = Complex::new(c, T::zero());
        u[k][3 - k] = Complex::new(T::zero(), -s);
    }
    u
}

/// Calls `f(lo, hi)` on every amplitude pair that differs only in bit `q`.
fn for_each_pair<T, F>(amps: &mut [Complex<T>], q: usize, f: F)
where
    T: Real,
    F: Fn(&mut Complex<T>, &mut Complex<T>) + Sync,
{
    let stride = 1usize << q;
    let block = |chunk: &mut [Complex<T>]| {
        let (lo, hi) = chunk.split_at_mut(stride);
        if stride >= PAR_THRESHOLD {
            lo.par_iter_mut().zip(hi.par_iter_mut()).for_each(|(a, b)| f(a, b));
        } else {
            lo.iter_mut().zip(hi.iter_mut()).for_each(|(a, b)| f(a, b));
        }
    };
    if amps.len() >= PAR_THRESHOLD {
        amps.par_chunks_mut(2 * stride).for_each(block);
    } else {
        amps.chunks_mut(2 * stride).for_each(block);
    }
}

fn apply_cx<T: Real>(amps: &mut [Complex<T>], control: usize, target: usize) {
    let (cbit, tbit) = (1usize << control, 1usize << target);
    let high = control.max(target);
    let span = 2usize << high;
    let block = |chunk: &mut [Complex<T>]| {
        if target > control {
            // target is the block's top bit: swap across halves where control is set
            let (lo, hi) = chunk.split_at_mut(tbit);
            for (k, (a, b)) in lo.iter_mut().zip(hi.iter_mut()).enumerate() {
                if k & cbit != 0 {
                    std::mem::swap(a, b);
                }
            }
        } else {
            // control is the block's top bit: flip the target inside the upper half
            let upper = &mut chunk[cbit..];
            for pair in upper.chunks_mut(2 * tbit) {
                let (lo, hi) = pair.split_at_mut(tbit);
                lo.swap_with_slice(hi);
            }
        }
    };
    if amps.len() >= PAR_THRESHOLD && amps.len() > span {
        amps.par_chunks_mut(span).for_each(block);
    } else {
        amps.chunks_mut(span).for_each(block);
    }
}
