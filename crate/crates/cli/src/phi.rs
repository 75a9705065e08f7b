//! Angles and sweep ranges as written on the command line.

use std::f64::consts::PI;
use std::str::FromStr;

use crate::CliError;

/// Parses decimal radians or a multiple/fraction of π: `0.3`, `pi`, `-pi/4`,
/// `2pi/3`, `3*pi/2`, `0.5pi`.
pub fn parse_phi(expr: &str) -> Result<f64, CliError> {
    let bad = || CliError::Usage(format!("cannot read angle '{expr}'"));
    let s: String = expr.trim().to_ascii_lowercase().replace('π', "pi");
    let Some((coef, rest)) = s.split_once("pi") else {
        return s.parse::<f64>().ok().filter(|x| x.is_finite()).ok_or_else(bad);
    };
    let coef = coef.trim().trim_end_matches('*').trim();
    let coef = match coef {
        "" | "+" => 1.0,
        "-" => -1.0,
        c => c.parse::<f64>().map_err(|_| bad())?,
    };
    let rest = rest.trim();
    let denom = if rest.is_empty() {
        1.0
    } else {
        let d = rest.strip_prefix('/').ok_or_else(bad)?.trim();
        d.parse::<f64>().ok().filter(|&d| d != 0.0).ok_or_else(bad)?
    };
    let v = coef * PI / denom;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(bad())
    }
}

/// Inclusive, uniformly spaced range of angles.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepSpec {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl SweepSpec {
    pub fn new(start: f64, stop: f64, count: usize) -> Result<Self, CliError> {
        if count < 2 {
            return Err(CliError::Usage(format!("sweep needs at least 2 points, got {count}")));
        }
        if !(start < stop) {
            return Err(CliError::Usage(format!("sweep start {start} must be below stop {stop}")));
        }
        Ok(SweepSpec { start, stop, count })
    }

    pub fn points(&self) -> Vec<f64> {
        let last = (self.count - 1) as f64;
        (0..self.count)
            .map(|k| {
                if k + 1 == self.count {
                    self.stop
                } else {
                    self.start + (self.stop - self.start) * k as f64 / last
                }
            })
            .collect()
    }
}

impl FromStr for SweepSpec {
    type Err = CliError;

    /// `START:STOP:COUNT`, e.g. `0:2pi:64`.
    fn from_str(s: &str) -> Result<Self, CliError> {
        let parts: Vec<&str> = s.split(':').collect();
        let [start, stop, count] = parts.as_slice() else {
            return Err(CliError::Usage(format!("sweep '{s}' is not START:STOP:COUNT")));
        };
        let count = count
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("bad sweep point count '{count}'")))?;
        SweepSpec::new(parse_phi(start)?, parse_phi(stop)?, count)
    }
}
