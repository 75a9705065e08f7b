//! Device calibration tables: per-qubit readout and gate errors, per directed
//! pair CX errors.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const VALENCIA_2021_01_19: &str = include_str!("../fixtures/valencia_2021-01-19.json");

#[derive(Clone, Debug, PartialEq)]
pub struct CalibrationData {
    readout_error: Vec<f64>,
    gate_error: Vec<f64>,
    cx_error: BTreeMap<(usize, usize), f64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CalibrationJson {
    readout_error: Vec<f64>,
    gate_error: Vec<f64>,
    #[serde(default)]
    cx_error: BTreeMap<String, f64>,
}

fn check_prob(what: &str, p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::invalid(format!("{what} = {p} is not a probability")))
    }
}

impl CalibrationData {
    pub fn new(
        readout_error: Vec<f64>,
        gate_error: Vec<f64>,
        cx_error: BTreeMap<(usize, usize), f64>,
    ) -> Result<Self> {
        if readout_error.is_empty() {
            return Err(Error::invalid("calibration covers no qubits"));
        }
        if readout_error.len() != gate_error.len() {
            return Err(Error::invalid(format!(
                "calibration lists {} readout errors but {} gate errors",
                readout_error.len(),
                gate_error.len()
            )));
        }
        let n = readout_error.len();
        for (q, (&r, &g)) in readout_error.iter().zip(&gate_error).enumerate() {
            check_prob(&format!("readout_error[{q}]"), r)?;
            check_prob(&format!("gate_error[{q}]"), g)?;
        }
        for (&(c, t), &p) in &cx_error {
            Error::check_index("calibrated qubits", c, n)?;
            Error::check_index("calibrated qubits", t, n)?;
            if c == t {
                return Err(Error::invalid(format!("cx_error entry {c}-{t} has equal endpoints")));
            }
            check_prob(&format!("cx_error[{c}-{t}]"), p)?;
        }
        Ok(CalibrationData {
            readout_error,
            gate_error,
            cx_error,
        })
    }

    /// Noise-free calibration for `n` qubits; CX pairs are left unlisted.
    pub fn ideal(n: usize) -> Result<Self> {
        Self::new(vec![0.0; n], vec![0.0; n], BTreeMap::new())
    }

    /// Only readout errors; every gate is perfect and every directed pair of
    /// distinct qubits carries a zero CX error.
    pub fn readout_only(readout_error: Vec<f64>) -> Result<Self> {
        let n = readout_error.len();
        let cx = (0..n)
            .flat_map(|c| (0..n).filter(move |&t| t != c).map(move |t| ((c, t), 0.0)))
            .collect();
        Self::new(readout_error, vec![0.0; n], cx)
    }

    /// The 5-qubit IBM Q Valencia calibration of 19 January 2021.
    pub fn valencia_2021_01_19() -> Self {
        Self::from_json(VALENCIA_2021_01_19).expect("bundled calibration fixture is valid")
    }

    /// Parses `{"readout_error": [...], "gate_error": [...], "cx_error": {"c-t": p}}`.
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: CalibrationJson = serde_json::from_str(text)?;
        let mut cx = BTreeMap::new();
        for (key, p) in raw.cx_error {
            let pair = key
                .split_once('-')
                .and_then(|(c, t)| Some((c.trim().parse().ok()?, t.trim().parse().ok()?)))
                .ok_or_else(|| Error::invalid(format!("cx_error key '{key}' is not 'control-target'")))?;
            if cx.insert(pair, p).is_some() {
                return Err(Error::invalid(format!("duplicate cx_error key '{key}'")));
            }
        }
        Self::new(raw.readout_error, raw.gate_error, cx)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> String {
        let raw = CalibrationJson {
            readout_error: self.readout_error.clone(),
            gate_error: self.gate_error.clone(),
            cx_error: self.cx_error.iter().map(|(&(c, t), &p)| (format!("{c}-{t}"), p)).collect(),
        };
        serde_json::to_string_pretty(&raw).expect("calibration json")
    }

    pub fn n_qubits(&self) -> usize {
        self.readout_error.len()
    }

    pub fn readout_errors(&self) -> &[f64] {
        &self.readout_error
    }

    pub fn readout_error(&self, q: usize) -> Result<f64> {
        Error::check_index("calibrated qubits", q, self.n_qubits())?;
        Ok(self.readout_error[q])
    }

    pub fn gate_error(&self, q: usize) -> Result<f64> {
        Error::check_index("calibrated qubits", q, self.n_qubits())?;
        Ok(self.gate_error[q])
    }

    /// Error of a CX with the given control and target; `None` when the pair
    /// is not calibrated.
    pub fn cx_error(&self, control: usize, target: usize) -> Option<f64> {
        self.cx_error.get(&(control, target)).copied()
    }

    pub fn cx_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.cx_error.keys().copied()
    }

    /// Errors unless the table covers at least `n` qubits.
    pub fn require_qubits(&self, n: usize) -> Result<()> {
        if self.n_qubits() < n {
            return Err(Error::invalid(format!(
                "calibration covers {} qubits, {n} needed",
                self.n_qubits()
            )));
        }
        Ok(())
    }
}
